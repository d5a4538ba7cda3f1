#include "blocktri/matrix_polynomial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "blocktri/dense_linalg.hpp"
#include "blocktri/kernels.hpp"

namespace blocktri {

cplx ScalarPolynomial::eval(cplx x) const {
    cplx r = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) r = r * x + coeffs[j];
    return r;
}

ScalarPolynomial ScalarPolynomial::derivative() const {
    ScalarPolynomial d;
    if (coeffs.size() <= 1) {
        d.coeffs = {cplx{}};
        return d;
    }
    d.coeffs.resize(coeffs.size() - 1);
    for (std::size_t j = 1; j < coeffs.size(); ++j) d.coeffs[j - 1] = double(j) * coeffs[j];
    return d;
}

void ScalarPolynomial::trim(double tol) {
    double maxmag = 0.0;
    for (const auto& c : coeffs) maxmag = std::max(maxmag, std::abs(c));
    std::size_t keep = coeffs.size();
    while (keep > 1 && std::abs(coeffs[keep - 1]) <= tol * maxmag) --keep;
    coeffs.resize(keep);
}

ScalarPolynomial polynomial_from_roots(const std::vector<cplx>& roots) {
    ScalarPolynomial p;
    p.coeffs = {cplx{1.0}};
    for (cplx r : roots) {
        p.coeffs.insert(p.coeffs.begin(), cplx{});
        for (std::size_t j = 0; j + 1 < p.coeffs.size(); ++j) p.coeffs[j] -= r * p.coeffs[j + 1];
    }
    return p;
}

ScalarPolynomial polynomial_multiply(const ScalarPolynomial& a, const ScalarPolynomial& b) {
    ScalarPolynomial p;
    if (a.coeffs.empty() || b.coeffs.empty()) return p;
    p.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, cplx{});
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        kernels::active().axpy_z(a.coeffs[i], b.coeffs.data(), p.coeffs.data() + i,
                                 b.coeffs.size());
    return p;
}

ComplexMatrix evaluate(const MatrixPolynomial& p, cplx x) {
    if (p.coeffs.empty()) return ComplexMatrix(p.k, p.k);
    ComplexMatrix r = p.coeffs.back();
    const auto& ker = kernels::active();
    for (std::size_t j = p.coeffs.size() - 1; j-- > 0;)
        ker.horner_z(x, r.data().data(), p.coeffs[j].data().data(), r.data().size());
    return r;
}

MatrixPolynomial derivative(const MatrixPolynomial& p) {
    MatrixPolynomial d;
    d.k = p.k;
    if (p.coeffs.size() <= 1) {
        d.coeffs.push_back(ComplexMatrix(p.k, p.k));
        return d;
    }
    for (std::size_t j = 1; j < p.coeffs.size(); ++j)
        d.coeffs.push_back(cplx(double(j)) * p.coeffs[j]);
    return d;
}

double evaluation_scale(const MatrixPolynomial& p, cplx x) {
    long double s = 0.0L, power = 1.0L;
    const long double ax = std::max(1.0L, static_cast<long double>(std::abs(x)));
    for (const auto& c : p.coeffs) {
        s += static_cast<long double>(c.frobenius_norm()) * power;
        power *= ax;
    }
    return static_cast<double>(s);
}

namespace {

using lcplx = std::complex<long double>;

// det p(x) carried out entirely in extended precision: Horner over the
// coefficient matrices, then partially pivoted elimination. Node values
// this accurate keep the recovered coefficients limited by the transform
// rather than by rounding in the samples.
lcplx determinant_node(const MatrixPolynomial& p, long double x) {
    const std::size_t k = p.k;
    std::vector<lcplx> m(k * k);
    const auto& top = p.coeffs.back().data();
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = lcplx(top[i]);
    for (std::size_t j = p.coeffs.size() - 1; j-- > 0;) {
        const auto& c = p.coeffs[j].data();
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = m[i] * x + lcplx(c[i]);
    }
    lcplx det = 1.0L;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        long double best = std::abs(m[col * k + col]);
        for (std::size_t r = col + 1; r < k; ++r) {
            long double mag = std::abs(m[r * k + col]);
            if (mag > best) {
                best = mag;
                piv = r;
            }
        }
        if (best == 0.0L) return lcplx{};
        if (piv != col) {
            for (std::size_t c = 0; c < k; ++c) std::swap(m[piv * k + c], m[col * k + c]);
            det = -det;
        }
        det *= m[col * k + col];
        for (std::size_t r = col + 1; r < k; ++r) {
            lcplx f = m[r * k + col] / m[col * k + col];
            for (std::size_t c = col + 1; c < k; ++c) m[r * k + c] -= f * m[col * k + c];
        }
    }
    return det;
}

PolynomialSequence run_recurrence(const BlockTridiagonalMatrix& a,
                                  PolynomialSequence::Flavor flavor) {
    const std::size_t k = a.k, l = a.l;
    PolynomialSequence seq;
    seq.flavor = flavor;
    seq.k = k;
    seq.l = l;
    seq.polys.reserve(l + 1);

    MatrixPolynomial p0;
    p0.k = k;
    p0.coeffs.push_back(ComplexMatrix::identity(k));
    seq.polys.push_back(std::move(p0));

    std::vector<ComplexMatrix> dinv;
    for (std::size_t n = 0; n + 1 < l; ++n) {
        auto s = svd(a.super[n]);
        if (s.singular_values.back() <= 1e-14 * std::max(s.singular_values.front(), 1.0))
            throw std::invalid_argument("polynomial sequence: super block " + std::to_string(n) +
                                        " is numerically singular");
        dinv.push_back(inverse(a.super[n]));
    }
    dinv.push_back(ComplexMatrix::identity(k));  // closing convention D_{L-1} = I

    for (std::size_t n = 0; n < l; ++n) {
        const auto& pn = seq.polys[n];
        MatrixPolynomial next;
        next.k = k;
        next.coeffs.assign(n + 2, ComplexMatrix(k, k));
        // shift: x * P_n
        for (std::size_t j = 0; j <= n; ++j) next.coeffs[j + 1] = pn.coeffs[j];
        // minus B_n P_n
        for (std::size_t j = 0; j <= n; ++j) next.coeffs[j] -= a.diag[n] * pn.coeffs[j];
        // minus C_{n-1} P_{n-1}
        if (n > 0) {
            const auto& pm = seq.polys[n - 1];
            for (std::size_t j = 0; j < pm.coeffs.size(); ++j)
                next.coeffs[j] -= a.sub[n - 1] * pm.coeffs[j];
        }
        for (auto& c : next.coeffs) c = dinv[n] * c;
        seq.polys.push_back(std::move(next));
    }
    return seq;
}

}  // namespace

PolynomialSequence generate_sequence(const BlockTridiagonalMatrix& a) {
    return run_recurrence(a, PolynomialSequence::Flavor::standard);
}

PolynomialSequence generate_transposed_sequence(const BlockTridiagonalMatrix& a) {
    return run_recurrence(transpose_blocks(a), PolynomialSequence::Flavor::transposed);
}

ScalarPolynomial determinant_polynomial(const MatrixPolynomial& p, double radius) {
    if (p.coeffs.empty()) throw std::invalid_argument("determinant polynomial: empty polynomial");
    if (!(radius > 0.0)) throw std::invalid_argument("determinant polynomial: radius must be positive");
    const std::size_t m = p.k * p.degree();
    if (m == 0) {
        ScalarPolynomial c;
        c.coeffs = {determinant(p.coeffs[0])};
        return c;
    }

    // det p at the m+1 Chebyshev extrema radius * cos(pi j / m).
    const long double pi = std::numbers::pi_v<long double>;
    std::vector<lcplx> values(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        long double x = (long double)radius * std::cos(pi * (long double)j / (long double)m);
        values[j] = determinant_node(p, x);
    }

    // First-kind cosine transform gives the Chebyshev coefficients of the
    // interpolant on [-radius, radius]; endpoint terms carry weight 1/2 on
    // both sides of the transform.
    std::vector<lcplx> cheb(m + 1);
    for (std::size_t c = 0; c <= m; ++c) {
        lcplx s = 0.0L;
        for (std::size_t j = 0; j <= m; ++j) {
            long double w = (j == 0 || j == m) ? 0.5L : 1.0L;
            long double ang = pi * (long double)(j * c) / (long double)m;
            s += w * std::cos(ang) * values[j];
        }
        s *= 2.0L / double(m);
        if (c == 0 || c == m) s *= 0.5L;
        cheb[c] = s;
    }

    // Change to the monomial basis: T_c(x / radius) by the shifted Chebyshev
    // recurrence, accumulated in extended precision.
    std::vector<lcplx> mono(m + 1, lcplx{});
    std::vector<long double> t_prev{1.0L}, t_cur{0.0L, 1.0L / (long double)radius};
    mono[0] += cheb[0];
    if (m >= 1)
        for (std::size_t j = 0; j < t_cur.size(); ++j) mono[j] += cheb[1] * t_cur[j];
    for (std::size_t c = 2; c <= m; ++c) {
        std::vector<long double> t_next(c + 1, 0.0L);
        for (std::size_t j = 0; j < t_cur.size(); ++j)
            t_next[j + 1] += 2.0L / (long double)radius * t_cur[j];
        for (std::size_t j = 0; j < t_prev.size(); ++j) t_next[j] -= t_prev[j];
        for (std::size_t j = 0; j <= c; ++j) mono[j] += cheb[c] * t_next[j];
        t_prev = std::move(t_cur);
        t_cur = std::move(t_next);
    }

    ScalarPolynomial out;
    out.coeffs.reserve(m + 1);
    for (const auto& c : mono) out.coeffs.emplace_back((double)c.real(), (double)c.imag());
    return out;
}

}  // namespace blocktri
