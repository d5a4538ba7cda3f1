#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "blocktri/block_matrix.hpp"
#include "blocktri/complex_matrix.hpp"
#include "blocktri/matrix_polynomial.hpp"
#include "blocktri/spectral.hpp"

namespace blocktri {

struct JordanChain {
    cplx lambda{};
    std::vector<cplx> seed;                  // k-vector u the chain grew from
    std::vector<std::vector<cplx>> vectors;  // v_0 .. v_{R-1}, each length N
    std::vector<double> residuals;           // per link, see chain_via_derivatives

    std::size_t length() const { return vectors.size(); }
};

struct ChainOptions {
    std::size_t max_length = 0;  // 0 means k * l
    // Derivative test threshold: a derivative order r keeps the chain alive
    // while ||d^r/dx^r P_L(lambda) u|| <= seed_tol * ||u|| * (1 + |lambda|)^L.
    double seed_tol = 1e-8;
    // Per-link acceptance for ||A v_r - lambda v_r - v_{r-1}|| relative to
    // the link norms; failing links truncate the chain.
    double verify_tol = 1e-8;
};

// Chain from the derivative ladder of the closing polynomial: the chain
// length R is the largest r such that all lower derivatives of P_L at lambda
// annihilate u, and link r is the stacked vector of r-th derivative blocks
// scaled by 1/r!. Each link is re-verified against the matrix action before
// it is accepted. seq must be generate_sequence(a).
// Throws PreconditionError when u is not an approximate null vector of
// P_L(lambda).
JordanChain chain_via_derivatives(const BlockTridiagonalMatrix& a, const PolynomialSequence& seq,
                                  cplx lambda, const std::vector<cplx>& seed,
                                  const ChainOptions& opts = {});

struct PowerOptions {
    enum class Mode { automatic, structured_only, dense_only };
    Mode mode = Mode::automatic;
    double null_tol = 1e-10;
    // Acceptance for the least-squares continuation against the previous link.
    double match_tol = 1e-8;
};

struct PowerPathResult {
    // mu = (-1)^r lambda^{r+1} was confirmed as an eigenvalue of the shifted
    // power (null space nonempty).
    bool eigenvalue_confirmed = false;
    bool used_structured = false;
    ComplexMatrix candidates;  // N x d null basis of (A - lambda I)^{r+1}
    // Least-squares combination w with (A - lambda I) w ~= prev, when a
    // previous link was supplied and the fit met match_tol.
    std::optional<std::vector<cplx>> matched;
    double match_residual = 0.0;
};

// Independent chain construction through powers: S = A - lambda I, the
// candidates span ker S^{r+1}, recovered either densely (SVD) or, when r+1
// divides L, through the polynomial machinery of the reblocked matrix
// S^{r+1} + (-1)^r lambda^{r+1} I, whose coarser super blocks are products
// of the original ones and stay nonsingular. Mode structured_only throws
// PreconditionError when r+1 does not divide L.
PowerPathResult chain_via_powers(const BlockTridiagonalMatrix& a, cplx lambda, std::size_t r,
                                 const std::vector<cplx>* prev = nullptr,
                                 const PowerOptions& opts = {});

struct JordanAnalysis {
    cplx lambda{};
    NullspaceBasis eigenbasis;        // null space of P_L(lambda)
    std::vector<JordanChain> chains;  // one per eigenbasis column
};

// Chains for every null direction of P_L(lambda).
JordanAnalysis jordan_analysis(const BlockTridiagonalMatrix& a, cplx lambda,
                               const ChainOptions& opts = {}, double null_tol = 1e-10);

}  // namespace blocktri
