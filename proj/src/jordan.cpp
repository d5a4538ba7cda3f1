#include "blocktri/jordan.hpp"

#include <cmath>
#include <stdexcept>

#include "blocktri/dense_linalg.hpp"
#include "blocktri/errors.hpp"

namespace blocktri {
namespace {

std::vector<cplx> stacked_derivative_link(const std::vector<MatrixPolynomial>& ders_at_r,
                                          cplx lambda, const std::vector<cplx>& u,
                                          double inv_factorial, std::size_t k, std::size_t l) {
    std::vector<cplx> v(k * l);
    for (std::size_t n = 0; n < l; ++n) {
        ComplexMatrix pn = evaluate(ders_at_r[n], lambda);
        std::vector<cplx> block = pn * u;
        for (std::size_t i = 0; i < k; ++i) v[n * k + i] = inv_factorial * block[i];
    }
    return v;
}

}  // namespace

JordanChain chain_via_derivatives(const BlockTridiagonalMatrix& a, const PolynomialSequence& seq,
                                  cplx lambda, const std::vector<cplx>& seed,
                                  const ChainOptions& opts) {
    const std::size_t k = a.k, l = a.l, n = k * l;
    if (seq.k != k || seq.l != l)
        throw std::invalid_argument("chain_via_derivatives: sequence does not match matrix");
    if (seed.size() != k) throw std::invalid_argument("chain_via_derivatives: seed must have length k");
    double unorm = vector_norm(seed);
    if (unorm == 0.0) throw std::invalid_argument("chain_via_derivatives: zero seed");

    std::size_t cap = opts.max_length == 0 ? n : std::min(opts.max_length, n);
    const double tol = opts.seed_tol * unorm * std::pow(1.0 + std::abs(lambda), double(l));

    // Derivative ladder of the whole sequence, one order at a time. ders[n]
    // holds the current order's derivative of P_n.
    std::vector<MatrixPolynomial> ders(seq.polys.begin(), seq.polys.end());

    auto closing_norm = [&](const std::vector<MatrixPolynomial>& d) {
        return vector_norm(evaluate(d[l], lambda) * seed);
    };

    if (closing_norm(ders) > tol)
        throw PreconditionError("chain_via_derivatives: seed is not an approximate null vector");

    JordanChain chain;
    chain.lambda = lambda;
    chain.seed = seed;

    // Collect links order by order while the derivative test keeps passing.
    double inv_factorial = 1.0;
    std::size_t r = 0;
    while (true) {
        chain.vectors.push_back(stacked_derivative_link(ders, lambda, seed, inv_factorial, k, l));
        ++r;
        if (r >= cap) break;
        for (auto& d : ders) d = derivative(d);
        if (closing_norm(ders) > tol) break;
        inv_factorial /= double(r);
    }

    // Matrix-action verification: A v_r = lambda v_r + v_{r-1}. A failing
    // link invalidates itself and everything after it.
    std::vector<std::vector<cplx>> verified;
    std::vector<double> residuals;
    for (std::size_t i = 0; i < chain.vectors.size(); ++i) {
        const auto& vr = chain.vectors[i];
        std::vector<cplx> resid = vector_add_scaled(matvec(a, vr), -lambda, vr);
        double prev_norm = 0.0;
        if (i > 0) {
            resid = vector_add_scaled(std::move(resid), -1.0, chain.vectors[i - 1]);
            prev_norm = vector_norm(chain.vectors[i - 1]);
        }
        double scale = (1.0 + std::abs(lambda)) * vector_norm(vr) + prev_norm;
        double res = vector_norm(resid) / (scale > 0.0 ? scale : 1.0);
        if (res > opts.verify_tol) break;
        verified.push_back(chain.vectors[i]);
        residuals.push_back(res);
    }
    chain.vectors = std::move(verified);
    chain.residuals = std::move(residuals);
    return chain;
}

namespace {

ComplexMatrix dense_shifted(const BlockTridiagonalMatrix& a, cplx lambda) {
    ComplexMatrix s = assemble_dense(a);
    for (std::size_t i = 0; i < s.rows(); ++i) s(i, i) -= lambda;
    return s;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, std::size_t e) {
    ComplexMatrix acc = ComplexMatrix::identity(m.rows());
    for (std::size_t i = 0; i < e; ++i) acc = acc * m;
    return acc;
}

// Carves the dense power into blocks of size kp = k * (r+1). The power of a
// block tridiagonal matrix has block bandwidth r+1, which the coarser
// blocking absorbs into a tridiagonal band again.
BlockTridiagonalMatrix reblock(const ComplexMatrix& dense, std::size_t kp, std::size_t lp,
                               cplx mu) {
    auto carve = [&](std::size_t bi, std::size_t bj) {
        ComplexMatrix b(kp, kp);
        for (std::size_t i = 0; i < kp; ++i)
            for (std::size_t j = 0; j < kp; ++j) b(i, j) = dense(bi * kp + i, bj * kp + j);
        return b;
    };
    std::vector<ComplexMatrix> diag, sub, super;
    for (std::size_t b = 0; b < lp; ++b) {
        ComplexMatrix d = carve(b, b);
        for (std::size_t i = 0; i < kp; ++i) d(i, i) += mu;
        diag.push_back(std::move(d));
    }
    for (std::size_t b = 0; b + 1 < lp; ++b) {
        sub.push_back(carve(b + 1, b));
        super.push_back(carve(b, b + 1));
    }
    return BlockTridiagonalMatrix::from_blocks(kp, lp, std::move(diag), std::move(sub),
                                               std::move(super));
}

double max_abs_outside_band(const ComplexMatrix& dense, std::size_t kp) {
    double worst = 0.0;
    const std::size_t lp = dense.rows() / kp;
    for (std::size_t i = 0; i < dense.rows(); ++i)
        for (std::size_t j = 0; j < dense.cols(); ++j) {
            std::size_t bi = i / kp, bj = j / kp;
            std::size_t d = bi > bj ? bi - bj : bj - bi;
            if (d > 1 && bi < lp && bj < lp) worst = std::max(worst, std::abs(dense(i, j)));
        }
    return worst;
}

}  // namespace

PowerPathResult chain_via_powers(const BlockTridiagonalMatrix& a, cplx lambda, std::size_t r,
                                 const std::vector<cplx>* prev, const PowerOptions& opts) {
    const std::size_t k = a.k, l = a.l, n = k * l;
    if (prev && prev->size() != n)
        throw std::invalid_argument("chain_via_powers: previous link has wrong length");

    ComplexMatrix s = dense_shifted(a, lambda);
    ComplexMatrix spow = matrix_power(s, r + 1);

    const bool divides = (r + 1 <= l) && (l % (r + 1) == 0);
    if (opts.mode == PowerOptions::Mode::structured_only && !divides)
        throw PreconditionError("chain_via_powers: structured path needs (r+1) to divide l");

    PowerPathResult out;
    bool structured = divides && opts.mode != PowerOptions::Mode::dense_only;

    if (structured) {
        const std::size_t kp = k * (r + 1), lp = l / (r + 1);
        cplx mu = (r % 2 == 0 ? 1.0 : -1.0) * std::pow(lambda, double(r + 1));
        if (lp >= 2 && max_abs_outside_band(spow, kp) > 1e-10 * std::max(1.0, spow.max_abs()))
            structured = false;
        if (structured) {
            BlockTridiagonalMatrix ar = reblock(spow, kp, lp, mu);
            bool blocks_ok = true;
            for (const auto& chk : validate(ar, 1e-13).super_checks)
                if (!chk.ok) blocks_ok = false;
            if (!blocks_ok && opts.mode == PowerOptions::Mode::structured_only)
                throw PreconditionError(
                    "chain_via_powers: reblocked super blocks are numerically singular");
            if (blocks_ok) {
                PolynomialSequence seq = generate_sequence(ar);
                // lambda arrives at multiple-root center accuracy; the floor
                // keeps the kernel visible through that error.
                NullspaceBasis nb = nullspace_basis(evaluate(seq.last(), mu),
                                                    std::max(opts.null_tol, kKernelRankFloor),
                                                    evaluation_scale(seq.last(), mu));
                out.eigenvalue_confirmed = nb.dim() > 0;
                out.candidates = eigenvectors_for(seq, mu, nb.basis);
                out.used_structured = true;
            } else {
                structured = false;
            }
        }
    }

    if (!out.used_structured) {
        NullspaceBasis nb = nullspace_basis(spow, opts.null_tol);
        out.eigenvalue_confirmed = nb.dim() > 0;
        out.candidates = nb.basis;
    }

    if (prev && out.candidates.cols() > 0) {
        ComplexMatrix t = s * out.candidates;
        std::vector<cplx> c = least_squares(t, *prev);
        std::vector<cplx> fit = t * c;
        double prev_norm = vector_norm(*prev);
        double resid = vector_norm(vector_add_scaled(std::move(fit), -1.0, *prev)) /
                       (prev_norm > 0.0 ? prev_norm : 1.0);
        out.match_residual = resid;
        if (resid <= opts.match_tol) out.matched = out.candidates * c;
    }
    return out;
}

JordanAnalysis jordan_analysis(const BlockTridiagonalMatrix& a, cplx lambda,
                               const ChainOptions& opts, double null_tol) {
    PolynomialSequence seq = generate_sequence(a);
    // lambda is caller-supplied (typically a multiple-root cluster center),
    // so the kernel singular values carry its error; see kKernelRankFloor.
    NullspaceBasis nb = nullspace_basis(evaluate(seq.last(), lambda),
                                        std::max(null_tol, kKernelRankFloor),
                                        evaluation_scale(seq.last(), lambda));
    nb.lambda = lambda;
    if (nb.dim() == 0)
        throw PreconditionError("jordan_analysis: lambda is not an eigenvalue (empty null space)");
    JordanAnalysis out;
    out.lambda = lambda;
    out.eigenbasis = nb;
    for (std::size_t j = 0; j < nb.dim(); ++j)
        out.chains.push_back(chain_via_derivatives(a, seq, lambda, nb.basis.column(j), opts));
    return out;
}

}  // namespace blocktri
