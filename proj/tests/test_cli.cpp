#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "blocktri/instance_gen.hpp"
#include "blocktri/matrix_io.hpp"
#include "support/test_util.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct CmdResult {
    int code = -1;
    std::string out;
    std::string err;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("blocktri_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    CmdResult run(const std::string& argline) const {
        std::string out_file = path("stdout.txt"), err_file = path("stderr.txt");
        std::string cmd = std::string(BLOCKTRI_CLI_PATH) + " " + argline + " > " + out_file +
                          " 2> " + err_file;
        int rc = std::system(cmd.c_str());
        CmdResult r;
        r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
        r.out = slurp(out_file);
        r.err = slurp(err_file);
        return r;
    }

    fs::path dir_;
};

TEST_F(CliTest, GenDecomposeVerifyRoundTrip) {
    ASSERT_EQ(run("gen random -k 2 -l 3 --seed 5 -o " + path("m.json")).code, 0);

    CmdResult dec = run("decompose " + path("m.json") + " --inverse -o " + path("d.json"));
    ASSERT_EQ(dec.code, 0) << dec.err;

    json doc = json::parse(slurp(path("d.json")));
    EXPECT_EQ(doc.at("n").get<std::size_t>(), 6u);
    EXPECT_FALSE(doc.at("defective").get<bool>());
    EXPECT_LT(doc.at("residual_av").get<double>(), 1e-8);
    EXPECT_LT(doc.at("residual_wv").get<double>(), 1e-8);
    EXPECT_TRUE(doc.contains("inverse"));
    EXPECT_TRUE(doc.contains("cluster_tol"));

    CmdResult ver = run("verify " + path("m.json") + " " + path("d.json"));
    EXPECT_EQ(ver.code, 0) << ver.err;
    json report = json::parse(ver.out);
    EXPECT_TRUE(report.at("pass").get<bool>());
    EXPECT_TRUE(report.contains("residual_wv"));
}

TEST_F(CliTest, VerifyFailsWithTinyTolerance) {
    ASSERT_EQ(run("gen random -k 2 -l 2 --seed 1 -o " + path("m.json")).code, 0);
    ASSERT_EQ(run("decompose " + path("m.json") + " -o " + path("d.json")).code, 0);
    CmdResult ver = run("verify " + path("m.json") + " " + path("d.json") + " --tol 1e-300");
    EXPECT_EQ(ver.code, 4);
    json report = json::parse(ver.out);
    EXPECT_FALSE(report.at("pass").get<bool>());
}

TEST_F(CliTest, DefectiveMatrixExitsWithDedicatedCode) {
    ASSERT_EQ(
        run("gen defective -k 2 -l 3 --seed 2 -o " + path("m.json") + " --truth-out " +
            path("t.json"))
            .code,
        0);

    CmdResult dec = run("decompose " + path("m.json") + " -o " + path("d.json"));
    EXPECT_EQ(dec.code, 3);
    json doc = json::parse(slurp(path("d.json")));
    EXPECT_TRUE(doc.at("defective").get<bool>());

    json truth = json::parse(slurp(path("t.json")));
    std::size_t truth_algebraic = 0;
    for (const auto& t : truth.at("eigenvalues"))
        truth_algebraic += t.at("algebraic").get<std::size_t>();
    std::size_t report_algebraic = 0;
    for (const auto& item : doc.at("defect").at("items"))
        report_algebraic += item.at("algebraic").get<std::size_t>();
    EXPECT_EQ(report_algebraic, truth_algebraic);
}

TEST_F(CliTest, JordanChainsMatchGroundTruth) {
    ASSERT_EQ(
        run("gen defective -k 2 -l 3 --seed 7 -o " + path("m.json") + " --truth-out " +
            path("t.json"))
            .code,
        0);
    CmdResult jor = run("jordan " + path("m.json") + " -o " + path("j.json"));
    ASSERT_EQ(jor.code, 0) << jor.err;

    json doc = json::parse(slurp(path("j.json")));
    json truth = json::parse(slurp(path("t.json")));

    // For each ground-truth eigenvalue there is an analysis whose longest
    // chain has exactly the expected length.
    for (const auto& t : truth.at("eigenvalues")) {
        double lam = t.at("lambda")[0].get<double>();
        std::size_t want_len = t.at("chain_length").get<std::size_t>();
        bool found = false;
        for (const auto& an : doc.at("analyses")) {
            if (std::abs(an.at("lambda")[0].get<double>() - lam) < 1e-6) {
                found = true;
                EXPECT_EQ(an.at("chains").size(), t.at("chain_count").get<std::size_t>());
                for (const auto& c : an.at("chains"))
                    EXPECT_EQ(c.at("length").get<std::size_t>(), want_len);
            }
        }
        EXPECT_TRUE(found) << "no analysis for eigenvalue " << lam;
    }
}

TEST_F(CliTest, SpectrumCommutingFastPathAgrees) {
    ASSERT_EQ(run("gen commuting -k 3 -l 4 --seed 9 -o " + path("m.json") + " --basis-out " +
                  path("b.json"))
                  .code,
              0);
    CmdResult plain = run("spectrum " + path("m.json") + " -o " + path("s1.json"));
    ASSERT_EQ(plain.code, 0) << plain.err;
    CmdResult fast =
        run("spectrum " + path("m.json") + " --commuting " + path("b.json") + " -o " +
            path("s2.json"));
    ASSERT_EQ(fast.code, 0) << fast.err;

    auto lambdas = [](const json& j) {
        std::vector<blocktri::cplx> v;
        for (const auto& e : j.at("eigenvalues"))
            for (std::size_t i = 0; i < e.at("multiplicity").get<std::size_t>(); ++i)
                v.push_back({e.at("lambda")[0].get<double>(), e.at("lambda")[1].get<double>()});
        return v;
    };
    json s1 = json::parse(slurp(path("s1.json")));
    json s2 = json::parse(slurp(path("s2.json")));
    EXPECT_LT(testutil::match_distance(lambdas(s1), lambdas(s2)), 1e-7);
}

TEST_F(CliTest, SpiderExpandFastEqualsDirect) {
    // Deterministic vector written through the library writer.
    std::mt19937_64 rng(77);
    std::vector<blocktri::cplx> y;
    std::normal_distribution<double> d(0.0, 1.0);
    for (int i = 0; i < 32; ++i) y.push_back(blocktri::cplx(d(rng), 0.0));
    blocktri::write_vector(y, path("y.json"));

    ASSERT_EQ(run("spider --legs 4 --depth 8 --plan-out " + path("p.json") + " -o " +
                  path("spec.json"))
                  .code,
              0);
    CmdResult fast = run("spider --plan-in " + path("p.json") + " --expand " + path("y.json") +
                         " -o " + path("fast.json"));
    ASSERT_EQ(fast.code, 0) << fast.err;
    CmdResult direct = run("spider --legs 4 --depth 8 --expand " + path("y.json") +
                           " --direct -o " + path("direct.json"));
    ASSERT_EQ(direct.code, 0) << direct.err;

    json f = json::parse(slurp(path("fast.json")));
    json g = json::parse(slurp(path("direct.json")));
    ASSERT_EQ(f.at("coefficients").size(), 32u);
    for (std::size_t i = 0; i < 32; ++i) {
        EXPECT_NEAR(f.at("coefficients")[i][0].get<double>(),
                    g.at("coefficients")[i][0].get<double>(), 1e-9);
    }
    EXPECT_EQ(f.at("mode"), "fast");
    EXPECT_EQ(g.at("mode"), "direct");

    json spec = json::parse(slurp(path("spec.json")));
    EXPECT_EQ(spec.at("n").get<std::size_t>(), 32u);
    EXPECT_EQ(spec.at("alpha").size(), 8u);
}

TEST_F(CliTest, StdoutIsTheDefaultSink) {
    ASSERT_EQ(run("gen nilpotent -k 2 -l 2 -o " + path("m.json")).code, 0);
    CmdResult spec = run("spectrum " + path("m.json"));
    ASSERT_EQ(spec.code, 0);
    json doc = json::parse(spec.out);
    EXPECT_EQ(doc.at("n").get<std::size_t>(), 4u);
}

TEST_F(CliTest, UsageAndIoErrorCodes) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("decompose").code, 2);
    EXPECT_EQ(run("decompose " + path("missing.json")).code, 1);
    EXPECT_EQ(run("gen bogus-kind -o " + path("x.json")).code, 2);
    EXPECT_EQ(run("spider --expand " + path("nothing.json")).code, 2);  // no legs/depth
    EXPECT_EQ(run("--help").code, 0);

    // Malformed document.
    std::ofstream bad(path("bad.json"));
    bad << "{ not json";
    bad.close();
    EXPECT_EQ(run("decompose " + path("bad.json")).code, 1);
}

TEST_F(CliTest, NilpotentDecomposeReportsDefect) {
    ASSERT_EQ(run("gen nilpotent -k 2 -l 3 -o " + path("m.json")).code, 0);
    EXPECT_EQ(run("decompose " + path("m.json") + " -o " + path("d.json")).code, 3);
    json doc = json::parse(slurp(path("d.json")));
    ASSERT_TRUE(doc.at("defective").get<bool>());
    EXPECT_EQ(doc.at("defect").at("total_geometric").get<std::size_t>(), 2u);
}

}  // namespace
