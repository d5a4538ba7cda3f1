#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace oracle {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("oracle matmul shape mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::complex<long double> acc = 0;
            for (std::size_t t = 0; t < a.cols(); ++t)
                acc += std::complex<long double>(a(i, t)) * std::complex<long double>(b(t, j));
            c(i, j) = cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
        }
    }
    return c;
}

std::vector<cplx> matvec(const ComplexMatrix& m, const std::vector<cplx>& x) {
    if (m.cols() != x.size()) throw std::invalid_argument("oracle matvec shape mismatch");
    std::vector<cplx> y(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::complex<long double> acc = 0;
        for (std::size_t j = 0; j < m.cols(); ++j)
            acc += std::complex<long double>(m(i, j)) * std::complex<long double>(x[j]);
        y[i] = cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
    return y;
}

std::vector<double> symmetric_eigenvalues(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw std::invalid_argument("oracle eigenvalues need a square matrix");
    double scale = std::max(m.max_abs(), 1.0);
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(m(i, j).imag()) > 1e-12 * scale)
                throw std::invalid_argument("oracle eigenvalues need a real matrix");
            if (std::abs(m(i, j).real() - m(j, i).real()) > 1e-12 * scale)
                throw std::invalid_argument("oracle eigenvalues need a symmetric matrix");
            a[i * n + j] = m(i, j).real();
        }

    auto off_norm = [&] {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        return std::sqrt(2 * s);
    };

    // Cyclic-by-row Jacobi. Quadratic convergence makes ~10 sweeps plenty
    // even at n = 512.
    for (int sweep = 0; sweep < 60; ++sweep) {
        if (off_norm() <= 1e-14 * scale * n) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (apq == 0.0) continue;
                double theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    double aip = a[i * n + p], aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    double apj = a[p * n + j], aqj = a[q * n + j];
                    a[p * n + j] = c * apj - s * aqj;
                    a[q * n + j] = s * apj + c * aqj;
                }
            }
        }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i * n + i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> dst1(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> y(n);
    const long double pi = 3.14159265358979323846264338327950288L;
    for (std::size_t j = 0; j < n; ++j) {
        long double acc = 0;
        for (std::size_t i = 0; i < n; ++i)
            acc += static_cast<long double>(x[i]) *
                   std::sin(pi * static_cast<long double>((i + 1) * (j + 1)) /
                            static_cast<long double>(n + 1));
        y[j] = static_cast<double>(acc);
    }
    return y;
}

std::vector<cplx> dft(const std::vector<cplx>& x) {
    const std::size_t n = x.size();
    std::vector<cplx> y(n);
    const long double pi = 3.14159265358979323846264338327950288L;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<long double> acc = 0;
        for (std::size_t j = 0; j < n; ++j) {
            long double ang = -2.0L * pi * static_cast<long double>(j * k) /
                              static_cast<long double>(n);
            acc += std::complex<long double>(x[j]) *
                   std::complex<long double>(std::cos(ang), std::sin(ang));
        }
        y[k] = cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
    return y;
}

ipoly u_half(std::size_t n) {
    // U_{m+1}(x/2) = x U_m(x/2) - U_{m-1}(x/2)
    ipoly prev{};   // U_{-1} = 0
    ipoly cur{1};   // U_0 = 1
    for (std::size_t m = 0; m < n; ++m) {
        ipoly next(cur.size() + 1, 0);
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

ipoly poly_mul(const ipoly& a, const ipoly& b) {
    if (a.empty() || b.empty()) return {};
    ipoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

ipoly poly_sub(const ipoly& a, const ipoly& b) {
    ipoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    return c;
}

ipoly poly_scale(const ipoly& a, __int128 s) {
    ipoly c = a;
    for (auto& v : c) v *= s;
    return c;
}

ipoly poly_pow(const ipoly& a, std::size_t e) {
    ipoly r{1};
    for (std::size_t i = 0; i < e; ++i) r = poly_mul(r, a);
    return r;
}

long double poly_eval(const ipoly& p, long double x) {
    long double acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + coeff_as_double(p[i]);
    return acc;
}

double coeff_as_double(__int128 v) {
    bool neg = v < 0;
    if (neg) v = -v;
    double d = static_cast<double>(static_cast<std::uint64_t>(v >> 64)) * 18446744073709551616.0 +
               static_cast<double>(static_cast<std::uint64_t>(v));
    return neg ? -d : d;
}

double max_abs_coeff(const ipoly& p) {
    double m = 0;
    for (__int128 v : p) m = std::max(m, std::abs(coeff_as_double(v)));
    return m;
}

}  // namespace oracle
