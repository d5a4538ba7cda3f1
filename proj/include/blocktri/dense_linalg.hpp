#pragma once

#include <vector>

#include "blocktri/complex_matrix.hpp"

namespace blocktri {

// Dense factorization facade. Everything here is standard numerical plumbing
// (SVD, LU, QR eigensolvers) delegated to Eigen inside the implementation;
// the rest of the library sees only library types.

struct SvdResult {
    std::vector<double> singular_values;  // descending
    ComplexMatrix right_vectors;          // columns = right singular vectors (full)
};

SvdResult svd(const ComplexMatrix& m);

ComplexMatrix inverse(const ComplexMatrix& m);

std::vector<cplx> solve(const ComplexMatrix& m, const std::vector<cplx>& rhs);

cplx determinant(const ComplexMatrix& m);

// Minimum-norm least squares via complete orthogonal decomposition.
std::vector<cplx> least_squares(const ComplexMatrix& a, const std::vector<cplx>& b);

// Eigenvalues of a general complex matrix (QR iteration, no vectors).
std::vector<cplx> dense_eigenvalues(const ComplexMatrix& m);

struct DenseEigenResult {
    std::vector<cplx> values;
    ComplexMatrix vectors;  // columns, unit norm
};

DenseEigenResult dense_eigen(const ComplexMatrix& m);

// Eigenvalues of the real symmetric tridiagonal matrix with the given
// diagonal and off-diagonal, ascending.
std::vector<double> symmetric_tridiagonal_eigenvalues(const std::vector<double>& diag,
                                                      const std::vector<double>& offdiag);

// Orthonormalizes the columns of m (thin QR), returning the Q factor.
ComplexMatrix orthonormal_columns(const ComplexMatrix& m);

}  // namespace blocktri
