#include "blocktri/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace blocktri {

using nlohmann::json;

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const char* context) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw FormatError(std::string(context) + ": entry is not a [re, im] pair");
    double re = j[0].get<double>(), im = j[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
        throw FormatError(std::string(context) + ": non-finite entry");
    return {re, im};
}

json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) entries.push_back(complex_to_json(m(i, j)));
    return entries;
}

ComplexMatrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols,
                               const char* context) {
    if (!j.is_array() || j.size() != rows * cols)
        throw FormatError(std::string(context) + ": expected " + std::to_string(rows * cols) +
                          " entries");
    ComplexMatrix m(rows, cols);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[idx++], context);
    return m;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return j;
}

void write_json_file(const json& j, const std::string& path) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot create " + tmp.string());
        out << j.dump(2) << '\n';
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + " to " + path);
    }
}

namespace {

std::size_t positive_size(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_unsigned() || j[key].get<std::size_t>() == 0)
        throw FormatError(std::string("matrix document: missing or invalid \"") + key + "\"");
    return j[key].get<std::size_t>();
}

std::vector<ComplexMatrix> blocks_from_json(const json& j, const char* key, std::size_t count,
                                            std::size_t k) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != count)
        throw FormatError(std::string("matrix document: \"") + key + "\" must hold " +
                          std::to_string(count) + " blocks");
    std::vector<ComplexMatrix> out;
    out.reserve(count);
    for (const auto& b : j[key]) out.push_back(matrix_from_json(b, k, k, key));
    return out;
}

}  // namespace

BlockTridiagonalMatrix block_tridiagonal_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("matrix document: not a JSON object");
    std::size_t k = positive_size(j, "k");
    std::size_t l = positive_size(j, "l");
    auto diag = blocks_from_json(j, "diag", l, k);
    auto sub = blocks_from_json(j, "sub", l - 1, k);
    auto super = blocks_from_json(j, "super", l - 1, k);
    return BlockTridiagonalMatrix::from_blocks(k, l, std::move(diag), std::move(sub),
                                               std::move(super));
}

BlockTridiagonalMatrix read_block_tridiagonal(const std::string& path) {
    return block_tridiagonal_from_json(read_json_file(path));
}

json block_tridiagonal_to_json(const BlockTridiagonalMatrix& a) {
    json j;
    j["k"] = a.k;
    j["l"] = a.l;
    auto blocks = [](const std::vector<ComplexMatrix>& v) {
        json arr = json::array();
        for (const auto& b : v) arr.push_back(matrix_to_json(b));
        return arr;
    };
    j["diag"] = blocks(a.diag);
    j["sub"] = blocks(a.sub);
    j["super"] = blocks(a.super);
    return j;
}

void write_block_tridiagonal(const BlockTridiagonalMatrix& a, const std::string& path) {
    write_json_file(block_tridiagonal_to_json(a), path);
}

std::vector<cplx> read_vector(const std::string& path) {
    json j = read_json_file(path);
    if (!j.is_object() || !j.contains("n") || !j.contains("v") || !j["v"].is_array())
        throw FormatError(path + ": vector document must hold \"n\" and \"v\"");
    std::size_t n = j["n"].is_number_unsigned() ? j["n"].get<std::size_t>() : 0;
    if (n == 0 || j["v"].size() != n)
        throw FormatError(path + ": vector length does not match \"n\"");
    std::vector<cplx> v;
    v.reserve(n);
    for (const auto& e : j["v"]) v.push_back(complex_from_json(e, "vector document"));
    return v;
}

void write_vector(const std::vector<cplx>& v, const std::string& path) {
    json j;
    j["n"] = v.size();
    json arr = json::array();
    for (const auto& e : v) arr.push_back(complex_to_json(e));
    j["v"] = arr;
    write_json_file(j, path);
}

}  // namespace blocktri
