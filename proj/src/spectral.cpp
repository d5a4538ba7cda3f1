#include "blocktri/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "blocktri/dense_linalg.hpp"
#include "blocktri/kernels.hpp"

namespace blocktri {

std::size_t Spectrum::total() const {
    std::size_t t = 0;
    for (const auto& e : entries) t += e.multiplicity;
    return t;
}

namespace {

// Iterative exponent scaling (radix 2, exact similarity) so the companion
// eigenvalue problem sees comparable row and column norms.
void balance_in_place(ComplexMatrix& m) {
    const std::size_t n = m.rows();
    bool converged = false;
    while (!converged) {
        converged = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                r += std::abs(m(i, j));
                c += std::abs(m(j, i));
            }
            if (r == 0.0 || c == 0.0) continue;
            double s = r + c, f = 1.0;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s && f != 1.0) {
                converged = false;
                for (std::size_t j = 0; j < n; ++j) {
                    m(i, j) /= f;
                    m(j, i) *= f;
                }
            }
        }
    }
}

struct Cluster {
    std::vector<cplx> members;
    cplx center;
    double spread = 0.0;  // max member distance from center
};

cplx centroid(const std::vector<cplx>& v) {
    cplx s = 0.0;
    for (cplx z : v) s += z;
    return s / double(v.size());
}

double spread_of(const std::vector<cplx>& v, cplx center) {
    double d = 0.0;
    for (cplx z : v) d = std::max(d, std::abs(z - center));
    return d;
}

// Newton refinement of an m-fold cluster center on the (m-1)-th derivative,
// where the root is simple. Movement is capped; a polish that wants to leave
// the cluster neighborhood is discarded.
cplx polish_center(const std::vector<ScalarPolynomial>& ders, std::size_t m, cplx z0,
                   double max_move) {
    if (m >= ders.size()) return z0;
    const ScalarPolynomial& f = ders[m - 1];
    const ScalarPolynomial& fp = ders[m];
    cplx z = z0;
    for (int it = 0; it < 60; ++it) {
        cplx fv = f.eval(z);
        cplx fpv = fp.eval(z);
        if (std::abs(fpv) < 1e-300) break;
        cplx step = fv / fpv;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        if (std::abs(step) > max_move) break;
        z -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
    if (std::abs(z - z0) > max_move) return z0;
    return z;
}

bool close_roots(cplx a, cplx b, double cluster_tol) {
    return std::abs(a - b) <= cluster_tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace

Spectrum find_zeros(const ScalarPolynomial& p, double cluster_tol) {
    ScalarPolynomial q = p;
    q.trim(1e-12);
    if (q.coeffs.empty() || (q.coeffs.size() == 1 && q.coeffs[0] == cplx{}))
        throw std::invalid_argument("find_zeros: zero polynomial");
    const std::size_t n = q.degree();
    if (n < 1) throw std::invalid_argument("find_zeros: polynomial has no roots (degree 0)");

    // Monic normalization, companion matrix, balance, QR eigenvalues.
    cplx lead = q.coeffs.back();
    std::vector<cplx> monic(n);
    for (std::size_t j = 0; j < n; ++j) monic[j] = q.coeffs[j] / lead;
    ComplexMatrix companion(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) companion(i + 1, i) = 1.0;
    for (std::size_t i = 0; i < n; ++i) companion(i, n - 1) = -monic[i];
    balance_in_place(companion);
    std::vector<cplx> roots = dense_eigenvalues(companion);

    // Union-find clustering at cluster_tol * (1 + |root|).
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (close_roots(roots[i], roots[j], cluster_tol)) parent[find(i)] = find(j);

    std::vector<Cluster> clusters;
    {
        std::vector<std::vector<cplx>> groups(n);
        for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(roots[i]);
        for (auto& g : groups) {
            if (g.empty()) continue;
            Cluster c;
            c.center = centroid(g);
            c.spread = spread_of(g, c.center);
            c.members = std::move(g);
            clusters.push_back(std::move(c));
        }
    }

    // Derivative ladder for multiplicity-aware polishing.
    std::vector<ScalarPolynomial> ders;
    ders.push_back(q);
    for (std::size_t r = 0; r < n; ++r) ders.push_back(ders.back().derivative());

    auto polish_cluster = [&](Cluster& c) {
        double max_move =
            8.0 * (c.spread + cluster_tol * (1.0 + std::abs(c.center))) + 1e-14;
        c.center = polish_center(ders, c.members.size(), c.center, max_move);
    };
    for (auto& c : clusters) polish_cluster(c);

    // Polished centers of split clusters can coincide; merge until stable.
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < clusters.size() && !merged; ++i)
            for (std::size_t j = i + 1; j < clusters.size() && !merged; ++j) {
                if (!close_roots(clusters[i].center, clusters[j].center, cluster_tol)) continue;
                auto& a = clusters[i];
                auto& b = clusters[j];
                a.members.insert(a.members.end(), b.members.begin(), b.members.end());
                a.center = centroid(a.members);
                a.spread = spread_of(a.members, a.center);
                clusters.erase(clusters.begin() + j);
                polish_cluster(a);
                merged = true;
            }
    }

    Spectrum s;
    for (const auto& c : clusters) s.entries.push_back({c.center, c.members.size()});
    std::sort(s.entries.begin(), s.entries.end(), [](const auto& a, const auto& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    return s;
}

NullspaceBasis nullspace_basis(const ComplexMatrix& m, double tol, double scale) {
    if (m.rows() == 0 || m.cols() == 0)
        throw std::invalid_argument("nullspace_basis: empty matrix");
    SvdResult s = svd(m);
    double smax = s.singular_values.empty() ? 0.0 : s.singular_values.front();
    std::size_t dim = 0;
    if (smax == 0.0) {
        dim = m.cols();
    } else {
        double cutoff = tol * std::max(smax, scale);
        for (double sv : s.singular_values)
            if (sv <= cutoff) ++dim;
        // Wide matrices have cols - rows singular directions with no singular value.
        if (m.cols() > m.rows()) dim += m.cols() - m.rows();
    }
    NullspaceBasis nb;
    nb.basis = s.right_vectors.columns(m.cols() - dim, dim);
    if (dim > 0) {
        ComplexMatrix prod = m * nb.basis;
        double worst = 0.0;
        for (std::size_t j = 0; j < prod.cols(); ++j) worst = std::max(worst, vector_norm(prod.column(j)));
        nb.residual = worst;
    }
    return nb;
}

ComplexMatrix eigenvectors_for(const PolynomialSequence& seq, cplx lambda,
                               const ComplexMatrix& basis) {
    const std::size_t k = seq.k, l = seq.l;
    if (basis.rows() != k) throw std::invalid_argument("eigenvectors_for: basis row count != k");
    ComplexMatrix v(k * l, basis.cols());
    for (std::size_t n = 0; n < l; ++n) {
        ComplexMatrix block = evaluate(seq.polys[n], lambda) * basis;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < basis.cols(); ++j) v(n * k + i, j) = block(i, j);
    }
    for (std::size_t j = 0; j < v.cols(); ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < v.rows(); ++i) norm += std::norm(v(i, j));
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) /= norm;
    }
    return v;
}

std::size_t EigenDecomposition::column_offset(std::size_t m) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < m; ++i) off += bases[i].dim();
    return off;
}

namespace {

// Clustering tolerances to try in order: the caller's value, then factors of
// 10 up to 1e-1. An m-fold root scatters like eps^(1/m) in the companion
// spectrum (~1.7e-2 already at m = 9), so tight tolerances shatter it into
// spurious simple centers; the ladder keeps escalating until the kernels line
// up (the caller's success criterion) without asking the caller to know m in
// advance. Over-merging at the coarse end is self-defeating rather than
// dangerous: a merged center belonging to no root has an empty kernel, so
// that attempt scores worse and an earlier rung wins.
std::vector<double> cluster_ladder(double cluster_tol) {
    std::vector<double> ladder{cluster_tol};
    for (double t = cluster_tol * 10.0; t <= 1.05e-1; t *= 10.0) ladder.push_back(t);
    return ladder;
}

struct SpectrumAttempt {
    Spectrum spectrum;
    std::vector<NullspaceBasis> bases;  // aligned with spectrum.entries
    std::size_t total_geometric = 0;
    std::size_t empty_kernels = 0;
    // Entries whose kernel is larger than their multiplicity. The geometric
    // multiplicity never exceeds the algebraic one, so such an entry proves
    // the clustering split one root into several centers that all see the
    // same kernel; the whole attempt is untrustworthy, however large its
    // geometric total looks.
    std::size_t overcounted = 0;
    // Simple entries whose pointwise refinement stalled instead of
    // converging. A stall marks the center as a likely fragment of a
    // multiple root (or half of an unresolved tight pair), so an attempt
    // that contains one must not be accepted as complete: at block size 1 a
    // fragment's kernel is never empty and counting alone cannot expose it.
    std::size_t stalled = 0;
    double cluster_tol = 0.0;
};

// A simple cluster center inherits the interpolated polynomial's coefficient
// noise, which carries an R^degree factor from the sampling radius and can
// leave the center ~1e-9 off the eigenvalue. Newton steps on the pointwise
// determinant of the recurrence (whose rounding floor has no radius
// amplification) pull it back to machine accuracy, so the kernel singular
// values drop to eps level. The interpolated derivative only steers the
// iteration, so its noise is harmless.
//
// The refined point is accepted only when the iteration actually converges
// (a step collapses quadratically, or the determinant hits zero). A center
// that is really a fragment of an m-fold root converges linearly at rate
// (m-1)/m and rarely meets that test within the iteration budget; walking
// such a fragment downhill anyway would shrink its kernel singular values
// until a spurious "simple" eigenvector passes the rank cutoff, so on a
// stall the original center is returned untouched with converged = false
// and the caller scores the attempt accordingly.
struct SimpleRefinement {
    cplx lambda;
    bool converged;
};

SimpleRefinement refine_simple_root(const MatrixPolynomial& last, const ScalarPolynomial& deriv,
                                    cplx lambda, double move_cap) {
    cplx z = lambda;
    for (int it = 0; it < 9; ++it) {
        cplx f = determinant(evaluate(last, z));
        if (std::abs(f) == 0.0) return {z, true};
        cplx dp = deriv.eval(z);
        if (!(std::abs(dp) > 0.0)) return {lambda, false};
        cplx step = f / dp;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return {lambda, false};
        if (std::abs(z - step - lambda) > move_cap) return {lambda, false};
        z -= step;
        if (std::abs(step) <= 1e-12 * (1.0 + std::abs(z))) return {z, true};
    }
    return {lambda, false};
}

SpectrumAttempt attempt_spectrum(const PolynomialSequence& seq, const ScalarPolynomial& charpoly,
                                 double cluster_tol, double null_tol) {
    SpectrumAttempt at;
    at.cluster_tol = cluster_tol;
    at.spectrum = find_zeros(charpoly, cluster_tol);
    ScalarPolynomial deriv = charpoly.derivative();
    auto& entries = at.spectrum.entries;

    std::vector<bool> stalled(entries.size(), false);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto& e = entries[i];
        if (e.multiplicity != 1) continue;
        // The cap must exceed the center's own error (which can be well
        // above cluster_tol) while staying clear of neighboring roots, so
        // tie it to the gap to the nearest other center.
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < entries.size(); ++j)
            if (j != i) gap = std::min(gap, std::abs(e.lambda - entries[j].lambda));
        double cap = std::isfinite(gap) ? 0.25 * gap : 1.0 + std::abs(e.lambda);
        SimpleRefinement r = refine_simple_root(seq.last(), deriv, e.lambda, cap);
        e.lambda = r.lambda;
        stalled[i] = !r.converged;
        if (r.converged && std::isfinite(gap)) {
            // Around a multiple root the determinant sits below its own
            // rounding floor over a valley of width ~ floor / |P'|, so a
            // fragment inside that valley "converges" after one vanishing
            // step without being a root. The converged point only counts as
            // a distinct simple eigenvalue if its position uncertainty
            // (floor over derivative) is small against the gap to the
            // nearest neighbor; otherwise it is indistinguishable from that
            // neighbor and the entry is treated as stalled so a coarser
            // clustering can fuse them.
            long double mass = 0.0L, power = 1.0L;
            const long double ax = std::abs(e.lambda);
            for (const auto& c : charpoly.coeffs) {
                mass += (long double)std::abs(c) * power;
                power *= ax;
            }
            double dpv = std::abs(deriv.eval(e.lambda));
            double floor = std::numeric_limits<double>::epsilon() * double(mass);
            if (!(dpv > 0.0) || floor > 0.125 * gap * dpv) stalled[i] = true;
        }
    }

    // Refinement sharpens the centers, so re-cluster on the refined values:
    // fragments of a multiple root whose scatter was below the refinement
    // budget converge to one point and must be fused into a single entry
    // before their coinciding kernels are counted separately.
    bool remerged = false;
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = entries.size(); j-- > i + 1;)
            if (close_roots(entries[i].lambda, entries[j].lambda, cluster_tol)) {
                double wi = double(entries[i].multiplicity), wj = double(entries[j].multiplicity);
                entries[i].lambda = (entries[i].lambda * wi + entries[j].lambda * wj) / (wi + wj);
                entries[i].multiplicity += entries[j].multiplicity;
                entries.erase(entries.begin() + j);
                stalled[i] = false;
                stalled.erase(stalled.begin() + j);
                remerged = true;
            }
    if (remerged) {
        std::vector<std::size_t> order(entries.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (entries[x].lambda.real() != entries[y].lambda.real())
                return entries[x].lambda.real() < entries[y].lambda.real();
            return entries[x].lambda.imag() < entries[y].lambda.imag();
        });
        std::vector<Spectrum::Entry> se(entries.size());
        std::vector<bool> ss(entries.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            se[i] = entries[order[i]];
            ss[i] = stalled[order[i]];
        }
        entries = std::move(se);
        stalled = std::move(ss);
    }

    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        // A multiple-root center is polished on a derivative of the noisy
        // coefficients and stays ~1e-8 off; the kernel singular values scale
        // with that error.
        double tol = e.multiplicity == 1 ? null_tol : std::max(null_tol, kKernelRankFloor);
        NullspaceBasis nb = nullspace_basis(evaluate(seq.last(), e.lambda), tol,
                                            evaluation_scale(seq.last(), e.lambda));
        nb.lambda = e.lambda;
        at.total_geometric += nb.dim();
        if (nb.dim() == 0) ++at.empty_kernels;
        if (nb.dim() > e.multiplicity) ++at.overcounted;
        if (stalled[i]) ++at.stalled;
        at.bases.push_back(std::move(nb));
    }
    return at;
}

}  // namespace

Spectrum matrix_spectrum(const BlockTridiagonalMatrix& a, double cluster_tol, double null_tol) {
    PolynomialSequence seq = generate_sequence(a);
    ScalarPolynomial charpoly = determinant_polynomial(seq.last(), sample_radius(a));
    SpectrumAttempt best;
    bool have_best = false;
    for (double t : cluster_ladder(cluster_tol)) {
        SpectrumAttempt at = attempt_spectrum(seq, charpoly, t, null_tol);
        if (at.overcounted == 0 && at.empty_kernels == 0 && at.stalled == 0) return at.spectrum;
        if (!have_best ||
            std::make_tuple(at.overcounted, at.empty_kernels, at.stalled) <
                std::make_tuple(best.overcounted, best.empty_kernels, best.stalled)) {
            best = std::move(at);
            have_best = true;
        }
    }
    return best.spectrum;
}

DecompositionOutcome eigenvector_matrix(const BlockTridiagonalMatrix& a,
                                        const DecompositionOptions& opts) {
    const std::size_t n = a.dense_dim();
    PolynomialSequence seq = generate_sequence(a);
    ScalarPolynomial charpoly = determinant_polynomial(seq.last(), sample_radius(a));

    SpectrumAttempt chosen;
    bool complete = false, have_best = false;
    auto rank = [n](const SpectrumAttempt& at) {
        return std::make_tuple(at.overcounted, at.empty_kernels, at.stalled,
                               static_cast<std::ptrdiff_t>(n) -
                                   static_cast<std::ptrdiff_t>(at.total_geometric));
    };
    for (double t : cluster_ladder(opts.cluster_tol)) {
        SpectrumAttempt at = attempt_spectrum(seq, charpoly, t, opts.null_tol);
        if (at.overcounted == 0 && at.stalled == 0 && at.total_geometric == n) {
            chosen = std::move(at);
            complete = true;
            break;
        }
        if (!have_best || rank(at) < rank(chosen)) {
            chosen = std::move(at);
            have_best = true;
        }
    }

    Spectrum& spectrum = chosen.spectrum;
    std::vector<NullspaceBasis>& bases = chosen.bases;

    DecompositionOutcome out;
    if (!complete) {
        DefectReport report;
        report.n = n;
        report.total_geometric = chosen.total_geometric;
        for (std::size_t m = 0; m < spectrum.entries.size(); ++m)
            report.items.push_back(
                {spectrum.entries[m].lambda, spectrum.entries[m].multiplicity, bases[m].dim()});
        out.defect = std::move(report);
        return out;
    }

    EigenDecomposition dec;
    dec.n = n;
    dec.spectrum = spectrum;
    dec.cluster_tol = chosen.cluster_tol;
    dec.null_tol = opts.null_tol;
    dec.v = ComplexMatrix(n, n);
    std::size_t col = 0;
    for (std::size_t m = 0; m < spectrum.entries.size(); ++m) {
        ComplexMatrix block = eigenvectors_for(seq, spectrum.entries[m].lambda, bases[m].basis);
        for (std::size_t j = 0; j < block.cols(); ++j)
            for (std::size_t i = 0; i < n; ++i) dec.v(i, col + j) = block(i, j);
        col += block.cols();
    }
    dec.bases = std::move(bases);

    double anorm = frobenius_norm(a);
    if (anorm == 0.0) anorm = 1.0;
    double rsq = 0.0;
    col = 0;
    for (std::size_t m = 0; m < dec.spectrum.entries.size(); ++m) {
        cplx lambda = dec.spectrum.entries[m].lambda;
        for (std::size_t j = 0; j < dec.bases[m].dim(); ++j) {
            std::vector<cplx> vcol = dec.v.column(col + j);
            std::vector<cplx> r = vector_add_scaled(matvec(a, vcol), -lambda, vcol);
            double rn = vector_norm(r);
            rsq += rn * rn;
        }
        col += dec.bases[m].dim();
    }
    dec.residual_av = std::sqrt(rsq) / anorm;
    out.decomposition = std::move(dec);
    return out;
}

InverseResult inverse_eigenvector_matrix(const BlockTridiagonalMatrix& a,
                                         const EigenDecomposition& dec) {
    PolynomialSequence tseq;
    try {
        tseq = generate_transposed_sequence(a);
    } catch (const std::invalid_argument&) {
        throw PreconditionError(
            "inverse path requires nonsingular sub blocks (transposed recurrence divides by them)");
    }
    const std::size_t n = dec.n;

    ComplexMatrix w0(n, n);
    std::size_t off = 0;
    for (std::size_t m = 0; m < dec.spectrum.entries.size(); ++m) {
        cplx lambda = dec.spectrum.entries[m].lambda;
        double tol = dec.spectrum.entries[m].multiplicity > 1
                         ? std::max(dec.null_tol, kKernelRankFloor)
                         : dec.null_tol;
        NullspaceBasis nb = nullspace_basis(evaluate(tseq.last(), lambda), tol,
                                            evaluation_scale(tseq.last(), lambda));
        if (nb.dim() != dec.bases[m].dim())
            throw NumericalError("transposed null space dimension mismatch at eigenvalue index " +
                                 std::to_string(m));
        ComplexMatrix chain = eigenvectors_for(tseq, lambda, nb.basis);  // n x a_m
        for (std::size_t j = 0; j < chain.cols(); ++j)
            for (std::size_t i = 0; i < n; ++i) w0(off + j, i) = chain(i, j);
        off += chain.cols();
    }

    ComplexMatrix y = w0 * dec.v;

    InverseResult res;
    // Off-diagonal block norms before renormalization; the diagonal blocks G_m
    // are what the renormalization divides out.
    off = 0;
    std::vector<ComplexMatrix> gs;
    for (std::size_t m = 0; m < dec.bases.size(); ++m) {
        std::size_t am = dec.bases[m].dim();
        ComplexMatrix g(am, am);
        for (std::size_t i = 0; i < am; ++i)
            for (std::size_t j = 0; j < am; ++j) g(i, j) = y(off + i, off + j);
        gs.push_back(std::move(g));
        off += am;
    }
    off = 0;
    for (std::size_t m = 0; m < dec.bases.size(); ++m) {
        std::size_t am = dec.bases[m].dim();
        std::size_t off2 = 0;
        for (std::size_t m2 = 0; m2 < dec.bases.size(); ++m2) {
            std::size_t am2 = dec.bases[m2].dim();
            if (m2 != m) {
                double s = 0.0;
                for (std::size_t i = 0; i < am; ++i)
                    for (std::size_t j = 0; j < am2; ++j) s += std::norm(y(off + i, off2 + j));
                res.offblock_prenorm = std::max(res.offblock_prenorm, std::sqrt(s));
            }
            off2 += am2;
        }
        off += am;
    }

    res.w = ComplexMatrix(n, n);
    off = 0;
    for (std::size_t m = 0; m < dec.bases.size(); ++m) {
        std::size_t am = dec.bases[m].dim();
        auto s = svd(gs[m]);
        if (s.singular_values.empty() ||
            s.singular_values.back() <= 1e-12 * std::max(s.singular_values.front(), 1.0))
            throw NumericalError("renormalization block is numerically singular at eigenvalue index " +
                                 std::to_string(m));
        ComplexMatrix ginv = inverse(gs[m]);
        // Row group m of W is G_m^{-1} times the raw rows.
        for (std::size_t i = 0; i < am; ++i)
            for (std::size_t c = 0; c < n; ++c) {
                cplx acc = 0.0;
                for (std::size_t j = 0; j < am; ++j) acc += ginv(i, j) * w0(off + j, c);
                res.w(off + i, c) = acc;
            }
        off += am;
    }

    ComplexMatrix wv = res.w * dec.v;
    for (std::size_t i = 0; i < n; ++i) wv(i, i) -= 1.0;
    res.residual_wv = wv.frobenius_norm();
    return res;
}

CommutingResult commuting_fast_path(const BlockTridiagonalMatrix& a, const ComplexMatrix& u,
                                    double diag_tol, double cluster_tol) {
    const std::size_t k = a.k, l = a.l;
    if (u.rows() != k || u.cols() != k)
        throw std::invalid_argument("commuting fast path: basis must be k-by-k");
    ComplexMatrix uinv = inverse(u);

    // Conjugate every block; all must be diagonal in the common basis.
    auto channel_diag = [&](const ComplexMatrix& block) {
        ComplexMatrix y = uinv * block * u;
        double scale = std::max(1.0, y.max_abs());
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (i != j && std::abs(y(i, j)) > diag_tol * scale)
                    throw PreconditionError(
                        "commuting fast path: a block is not diagonalized by the given basis");
        std::vector<cplx> d(k);
        for (std::size_t i = 0; i < k; ++i) d[i] = y(i, i);
        return d;
    };

    std::vector<std::vector<cplx>> bd, cd, dd;
    for (const auto& b : a.diag) bd.push_back(channel_diag(b));
    for (const auto& c : a.sub) cd.push_back(channel_diag(c));
    for (const auto& d : a.super) {
        auto ch = channel_diag(d);
        for (cplx v : ch)
            if (std::abs(v) <= 1e-12)
                throw PreconditionError("commuting fast path: super block has a zero channel");
        dd.push_back(ch);
    }

    CommutingResult out;
    std::vector<Spectrum::Entry> pool;
    for (std::size_t c = 0; c < k; ++c) {
        // Scalar three-term recurrence q_{n+1} = ((x - b_n) q_n - c_{n-1} q_{n-1}) / d_n.
        std::vector<cplx> qm1, q{1.0};
        for (std::size_t n = 0; n < l; ++n) {
            std::vector<cplx> next(n + 2, cplx{});
            for (std::size_t j = 0; j < q.size(); ++j) {
                next[j + 1] += q[j];
                next[j] -= bd[n][c] * q[j];
            }
            if (n > 0)
                for (std::size_t j = 0; j < qm1.size(); ++j) next[j] -= cd[n - 1][c] * qm1[j];
            cplx dn = (n + 1 < l) ? dd[n][c] : cplx{1.0};
            for (auto& v : next) v /= dn;
            qm1 = std::move(q);
            q = std::move(next);
        }
        ScalarPolynomial poly;
        poly.coeffs = q;
        Spectrum roots = find_zeros(poly, cluster_tol);
        for (const auto& e : roots.entries) pool.push_back(e);
        out.channel_polynomials.push_back(std::move(poly));
    }

    // Union across channels: shared roots accumulate multiplicity.
    std::vector<Spectrum::Entry> entries;
    for (const auto& e : pool) {
        bool placed = false;
        for (auto& t : entries)
            if (close_roots(t.lambda, e.lambda, cluster_tol)) {
                // Weighted average keeps the center stable as clusters grow.
                t.lambda = (t.lambda * double(t.multiplicity) + e.lambda * double(e.multiplicity)) /
                           double(t.multiplicity + e.multiplicity);
                t.multiplicity += e.multiplicity;
                placed = true;
                break;
            }
        if (!placed) entries.push_back(e);
    }
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
        if (x.lambda.real() != y.lambda.real()) return x.lambda.real() < y.lambda.real();
        return x.lambda.imag() < y.lambda.imag();
    });
    out.spectrum.entries = std::move(entries);
    return out;
}

}  // namespace blocktri
