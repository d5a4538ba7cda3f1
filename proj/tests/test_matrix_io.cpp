#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "blocktri/instance_gen.hpp"
#include "blocktri/matrix_io.hpp"
#include "support/test_util.hpp"

namespace {

using namespace blocktri;
using nlohmann::json;
namespace fs = std::filesystem;

class MatrixIo : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("blocktri_io_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()
                                                ->current_test_info()
                                                ->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

TEST_F(MatrixIo, MatrixRoundTripIsExact) {
    BlockTridiagonalMatrix a = gen_random(3, 4, 7);
    write_block_tridiagonal(a, path("m.json"));
    BlockTridiagonalMatrix b = read_block_tridiagonal(path("m.json"));
    ASSERT_EQ(b.k, a.k);
    ASSERT_EQ(b.l, a.l);
    // Shortest round-trip serialization must reproduce bits.
    for (std::size_t n = 0; n < a.l; ++n)
        EXPECT_EQ(testutil::max_abs_diff(a.diag[n], b.diag[n]), 0.0);
    for (std::size_t n = 0; n + 1 < a.l; ++n) {
        EXPECT_EQ(testutil::max_abs_diff(a.sub[n], b.sub[n]), 0.0);
        EXPECT_EQ(testutil::max_abs_diff(a.super[n], b.super[n]), 0.0);
    }
}

TEST_F(MatrixIo, VectorRoundTripIsExact) {
    std::mt19937_64 rng(8);
    std::vector<cplx> v = testutil::random_vector(9, rng);
    write_vector(v, path("v.json"));
    EXPECT_EQ(read_vector(path("v.json")), v);
}

TEST_F(MatrixIo, MissingFileIsIoError) {
    EXPECT_THROW(read_block_tridiagonal(path("nope.json")), IoError);
    EXPECT_THROW(read_vector(path("nope.json")), IoError);
}

TEST_F(MatrixIo, UnwritableTargetIsIoError) {
    BlockTridiagonalMatrix a = gen_random(1, 2, 1);
    EXPECT_THROW(write_block_tridiagonal(a, (dir_ / "no_dir" / "m.json").string()), IoError);
    // No stray temp files left behind.
    std::size_t count = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir_)) ++count;
    EXPECT_EQ(count, 0u);
}

TEST_F(MatrixIo, MalformedDocumentsAreFormatErrors) {
    auto write_text = [&](const std::string& name, const std::string& text) {
        std::ofstream out(path(name));
        out << text;
    };

    write_text("garbage.json", "this is not json");
    EXPECT_THROW(read_block_tridiagonal(path("garbage.json")), FormatError);

    write_text("missing.json", R"({"k": 1, "l": 2, "diag": [[[0,0]],[[0,0]]], "sub": [[[0,0]]]})");
    EXPECT_THROW(read_block_tridiagonal(path("missing.json")), FormatError);

    // One diagonal block short.
    write_text("short.json",
               R"({"k":1,"l":2,"diag":[[[0,0]]],"sub":[[[0,0]]],"super":[[[1,0]]]})");
    EXPECT_THROW(read_block_tridiagonal(path("short.json")), FormatError);

    // Entry is not an [re, im] pair.
    write_text("entry.json",
               R"({"k":1,"l":2,"diag":[[[0,0]],[[0]]],"sub":[[[0,0]]],"super":[[[1,0]]]})");
    EXPECT_THROW(read_block_tridiagonal(path("entry.json")), FormatError);

    // Degenerate shape.
    write_text("zerok.json", R"({"k":0,"l":1,"diag":[],"sub":[],"super":[]})");
    EXPECT_THROW(read_block_tridiagonal(path("zerok.json")), FormatError);

    // Vector length disagrees with n.
    write_text("vec.json", R"({"n": 3, "v": [[1,0],[2,0]]})");
    EXPECT_THROW(read_vector(path("vec.json")), FormatError);
}

TEST_F(MatrixIo, NonFiniteEntriesAreRejected) {
    std::ofstream out(path("inf.json"));
    out << R"({"k":1,"l":2,"diag":[[[1e999,0]],[[0,0]]],"sub":[[[0,0]]],"super":[[[1,0]]]})";
    out.close();
    EXPECT_THROW(read_block_tridiagonal(path("inf.json")), FormatError);
}

TEST_F(MatrixIo, JsonHelpersRoundTrip) {
    cplx z(1.25, -3.5);
    EXPECT_EQ(complex_from_json(complex_to_json(z), "z"), z);

    std::mt19937_64 rng(9);
    ComplexMatrix m = testutil::random_matrix(3, 2, rng);
    ComplexMatrix back = matrix_from_json(matrix_to_json(m), 3, 2, "m");
    EXPECT_EQ(testutil::max_abs_diff(m, back), 0.0);
    EXPECT_THROW(matrix_from_json(matrix_to_json(m), 2, 2, "m"), FormatError);
}

}  // namespace
