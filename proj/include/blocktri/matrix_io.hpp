#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blocktri/block_matrix.hpp"

namespace blocktri {

// File could not be opened, created, or renamed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Content is not a valid document: malformed JSON, missing or mistyped
// fields, wrong block counts, non-finite numbers.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Matrix document:
//   {"k": K, "l": L, "diag": [...L blocks...], "sub": [...L-1...], "super": [...L-1...]}
// where a block is a row-major list of K*K entries and an entry is [re, im].
// Vector document: {"n": N, "v": [[re, im], ...]}.
// Writers emit shortest round-trip doubles, so write-then-read is bit exact.

BlockTridiagonalMatrix read_block_tridiagonal(const std::string& path);
BlockTridiagonalMatrix block_tridiagonal_from_json(const nlohmann::json& j);
void write_block_tridiagonal(const BlockTridiagonalMatrix& a, const std::string& path);
nlohmann::json block_tridiagonal_to_json(const BlockTridiagonalMatrix& a);

std::vector<cplx> read_vector(const std::string& path);
void write_vector(const std::vector<cplx>& v, const std::string& path);

// Shared JSON helpers for the other document types.
nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j, const char* context);
nlohmann::json matrix_to_json(const ComplexMatrix& m);  // row-major entry list
ComplexMatrix matrix_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols,
                               const char* context);

nlohmann::json read_json_file(const std::string& path);
// Writes via a temp file in the same directory, then renames over the target.
void write_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace blocktri
