#pragma once

#include <cstddef>
#include <vector>

#include "blocktri/block_matrix.hpp"
#include "blocktri/complex_matrix.hpp"

namespace blocktri {

// Polynomial with complex coefficients in ascending order (coeffs[j]
// multiplies x^j).
struct ScalarPolynomial {
    std::vector<cplx> coeffs;

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    cplx eval(cplx x) const;
    ScalarPolynomial derivative() const;
    // Drops trailing coefficients with magnitude <= tol * max coefficient
    // magnitude; keeps at least the constant term.
    void trim(double tol = 1e-12);
};

ScalarPolynomial polynomial_from_roots(const std::vector<cplx>& roots);
ScalarPolynomial polynomial_multiply(const ScalarPolynomial& a, const ScalarPolynomial& b);

// Polynomial with K-by-K matrix coefficients, ascending.
struct MatrixPolynomial {
    std::size_t k = 0;
    std::vector<ComplexMatrix> coeffs;

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

// Horner evaluation; runs on the kernel backend over the flattened blocks.
ComplexMatrix evaluate(const MatrixPolynomial& p, cplx x);
MatrixPolynomial derivative(const MatrixPolynomial& p);

// Magnitude scale sum_j ||coeffs[j]||_F max(1, |x|)^j of an evaluation at x.
// Times machine epsilon it majorizes the roundoff in evaluate(p, x), and it
// stays bounded away from zero near the origin, where a root estimate that
// is merely close to a root would otherwise shrink the floor below the
// genuinely negligible values it must absorb. This is the noise floor for
// rank decisions about evaluations at computed eigenvalues.
double evaluation_scale(const MatrixPolynomial& p, cplx x);

// The polynomial sequence attached to a block tridiagonal matrix:
//   P_{-1} = 0,  P_0 = I,
//   P_{n+1} = D_n^{-1} (x P_n - B_n P_n - C_{n-1} P_{n-1}),  n = 0..L-1,
// with the closing convention D_{L-1} = I. deg P_n = n; the eigenvalues of
// the matrix are exactly the roots of det P_L, and stacking P_n(lambda)
// against null vectors of P_L(lambda) yields eigenvectors.
struct PolynomialSequence {
    enum class Flavor { standard, transposed };
    Flavor flavor = Flavor::standard;
    std::size_t k = 0, l = 0;
    std::vector<MatrixPolynomial> polys;  // P_0 .. P_L

    const MatrixPolynomial& last() const { return polys.back(); }
};

// Builds P_0..P_L. Throws std::invalid_argument if a super block is
// numerically singular (the recurrence divides by it).
PolynomialSequence generate_sequence(const BlockTridiagonalMatrix& a);

// The same recurrence driven by the block transpose: diagonal B_n^T,
// sub D_n^T, super C_n^T, closing block I. Its stacked chains, transposed
// and renormalized, invert the eigenvector matrix.
PolynomialSequence generate_transposed_sequence(const BlockTridiagonalMatrix& a);

// det p(x) as a scalar polynomial of degree k * deg(p), recovered by
// evaluation at Chebyshev extrema scaled to [-radius, radius] followed by
// a cosine-transform coefficient solve and change to the monomial basis.
// radius should dominate the root magnitudes (sample_radius of the source
// matrix); nodes inside the root disk would lose the leading coefficients.
ScalarPolynomial determinant_polynomial(const MatrixPolynomial& p, double radius);

}  // namespace blocktri
