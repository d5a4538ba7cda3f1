// AVX2+FMA backend. Complex values stay interleaved (re, im); one __m256d
// holds two complex doubles. Compiled with -mavx2 -mfma in its own TU and
// only ever called after the dispatcher's cpuid check.

#include "blocktri/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace blocktri::kernels {
namespace {

void axpy_d_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double dot_d_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

// (xr*br - xi*bi, xi*br + xr*bi) for two complex pairs, b given as
// broadcast (br, br, br, br) and (bi, bi, bi, bi).
inline __m256d cmul_broadcast(__m256d x, __m256d bre, __m256d bim) {
    __m256d xswap = _mm256_permute_pd(x, 0x5);
    return _mm256_fmaddsub_pd(x, bre, _mm256_mul_pd(xswap, bim));
}

void axpy_z_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const __m256d are = _mm256_set1_pd(a.real());
    const __m256d aim = _mm256_set1_pd(a.imag());
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        yv = _mm256_add_pd(yv, cmul_broadcast(xv, are, aim));
        _mm256_storeu_pd(yd + 2 * i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

cplx dotu_z_avx2(const cplx* x, const cplx* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* yd = reinterpret_cast<const double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        __m256d yre = _mm256_movedup_pd(yv);
        __m256d yim = _mm256_permute_pd(yv, 0xF);
        acc = _mm256_add_pd(acc, cmul_broadcast(xv, yre, yim));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    cplx s{lanes[0] + lanes[2], lanes[1] + lanes[3]};
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void horner_z_avx2(cplx a, cplx* r, const cplx* c, std::size_t n) {
    const __m256d are = _mm256_set1_pd(a.real());
    const __m256d aim = _mm256_set1_pd(a.imag());
    auto* rd = reinterpret_cast<double*>(r);
    const auto* cd = reinterpret_cast<const double*>(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d rv = _mm256_loadu_pd(rd + 2 * i);
        __m256d cv = _mm256_loadu_pd(cd + 2 * i);
        rv = _mm256_add_pd(cmul_broadcast(rv, are, aim), cv);
        _mm256_storeu_pd(rd + 2 * i, rv);
    }
    for (; i < n; ++i) r[i] = a * r[i] + c[i];
}

}  // namespace

const Backend* avx2_impl() {
    static const Backend backend{
        "avx2", axpy_d_avx2, dot_d_avx2,
        axpy_z_avx2, dotu_z_avx2, horner_z_avx2,
    };
    return &backend;
}

}  // namespace blocktri::kernels

#endif  // x86_64
