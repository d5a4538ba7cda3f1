#include "blocktri/kernels.hpp"

namespace blocktri::kernels {
namespace {

void axpy_d_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_d_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_z_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

cplx dotu_z_scalar(const cplx* x, const cplx* y, std::size_t n) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void horner_z_scalar(cplx a, cplx* r, const cplx* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) r[i] = a * r[i] + c[i];
}

}  // namespace

const Backend& scalar() {
    static const Backend backend{
        "scalar", axpy_d_scalar, dot_d_scalar,
        axpy_z_scalar, dotu_z_scalar, horner_z_scalar,
    };
    return backend;
}

}  // namespace blocktri::kernels
