#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "blocktri/complex_matrix.hpp"

namespace blocktri {

// Block tridiagonal matrix with square K-by-K blocks and L block rows.
// Storage follows the band: diag holds B_0..B_{L-1}, sub holds C_0..C_{L-2}
// (block row n+1, column n), super holds D_0..D_{L-2} (block row n, column
// n+1). The assembled matrix is N-by-N with N = K*L. Algorithms that chain
// past the band treat the implicit closing super block D_{L-1} as the
// identity; it is not stored.
struct BlockTridiagonalMatrix {
    std::size_t k = 0;
    std::size_t l = 0;
    std::vector<ComplexMatrix> diag;
    std::vector<ComplexMatrix> sub;
    std::vector<ComplexMatrix> super;

    std::size_t dense_dim() const { return k * l; }

    // Validates counts and block shapes; throws std::invalid_argument on
    // structural violations (wrong counts, non-square or mis-sized blocks,
    // k or l of zero).
    static BlockTridiagonalMatrix from_blocks(std::size_t k, std::size_t l,
                                              std::vector<ComplexMatrix> diag,
                                              std::vector<ComplexMatrix> sub,
                                              std::vector<ComplexMatrix> super);
};

// Numerical precondition report. Structural problems throw; near-singular
// super blocks and non-finite entries are reported here so callers can
// decide (the CLI maps !ok to its precondition exit code).
struct ValidationReport {
    struct BlockCheck {
        std::size_t index;
        double sigma_min;
        double sigma_max;
        bool ok;
    };
    bool ok = true;
    bool entries_finite = true;
    std::vector<BlockCheck> super_checks;
    double tol;
    std::string message;
};

// Checks every stored super block for nonsingularity: sigma_min > tol * max(sigma_max, 1).
ValidationReport validate(const BlockTridiagonalMatrix& a, double tol = 1e-12);

ComplexMatrix assemble_dense(const BlockTridiagonalMatrix& a);

// y = A x without assembling, O(K^2 L).
std::vector<cplx> matvec(const BlockTridiagonalMatrix& a, const std::vector<cplx>& x);

// Blocks of A^T as a block tridiagonal matrix (diagonal B_n^T, sub D_n^T,
// super C_n^T).
BlockTridiagonalMatrix transpose_blocks(const BlockTridiagonalMatrix& a);

double frobenius_norm(const BlockTridiagonalMatrix& a);

// Radius enclosing the spectrum, used to scale interpolation nodes: a
// power-iteration estimate of the spectral radius with margin, capped by
// the guaranteed 1 + max block-row sum of infinity norms. Keeping the
// radius close to the actual root magnitudes is what makes the recovered
// polynomial coefficients accurate at high degree.
double sample_radius(const BlockTridiagonalMatrix& a);

}  // namespace blocktri
