#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace blocktri::kernels {

using cplx = std::complex<double>;

// Dense inner-loop primitives behind the block-matrix and transform code.
// Two interchangeable backends: a portable scalar reference and an AVX2+FMA
// variant picked at runtime when the CPU supports it. Complex data is
// interleaved (re, im), the layout std::complex guarantees.
struct Backend {
    const char* name;

    // y += a * x
    void (*axpy_d)(double a, const double* x, double* y, std::size_t n);
    // sum x[i] * y[i]
    double (*dot_d)(const double* x, const double* y, std::size_t n);

    // y += a * x (unconjugated complex)
    void (*axpy_z)(cplx a, const cplx* x, cplx* y, std::size_t n);
    // sum x[i] * y[i] (unconjugated)
    cplx (*dotu_z)(const cplx* x, const cplx* y, std::size_t n);
    // r = a * r + c, the Horner update over a coefficient row
    void (*horner_z)(cplx a, cplx* r, const cplx* c, std::size_t n);
};

const Backend& scalar();

// AVX2 backend, or nullptr when the build or the CPU lacks it.
const Backend* avx2();

// Active backend: AVX2 when available unless overridden. The environment
// variable BLOCKTRI_KERNELS=scalar|avx2 forces a choice at first use;
// forcing avx2 on an unsupported CPU falls back to scalar.
const Backend& active();

// Test hook: override the active backend by name ("scalar", "avx2", or ""
// to restore auto-detection). Returns false if the name is unavailable.
bool force(const std::string& name);

}  // namespace blocktri::kernels
