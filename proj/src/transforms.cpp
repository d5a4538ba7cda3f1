#include "blocktri/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "blocktri/kernels.hpp"
#include "blocktri/op_count.hpp"

namespace blocktri {

void fft_pow2(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_pow2: size must be a power of two");

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / double(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = data[i + j];
                std::complex<double> v = data[i + j + len / 2] * w;
                data[i + j] = u + v;
                data[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& v : data) v /= double(n);
    // One complex twiddle multiply-add pair per butterfly, 4 real fma each.
    std::size_t levels = 0;
    for (std::size_t m = n; m > 1; m >>= 1) ++levels;
    ops::add(4 * (n / 2) * levels);
}

Dst1Plan::Dst1Plan(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("Dst1Plan: empty transform");
    const std::size_t m = n + 1;
    fft_ = (m & (m - 1)) == 0;
    if (!fft_) {
        // Kernel rows stored densely so the inner loop is a unit-stride dot.
        rows_.resize(n, std::vector<double>(n));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                rows_[j][i] =
                    std::sin(std::numbers::pi * double((i + 1) * (j + 1)) / double(m));
    }
}

void Dst1Plan::apply(const double* x, double* y) const {
    const std::size_t n = n_;
    if (fft_) {
        const std::size_t m = n + 1;
        std::vector<std::complex<double>> z(2 * m, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            z[i + 1] = x[i];
            z[2 * m - 1 - i] = -x[i];
        }
        fft_pow2(z, false);
        // Odd real input makes the spectrum purely imaginary:
        // Z[j+1] = -2i * y[j].
        for (std::size_t j = 0; j < n; ++j) y[j] = -0.5 * z[j + 1].imag();
        ops::add(2 * m);  // pack and unpack passes
        return;
    }
    const auto& ker = kernels::active();
    for (std::size_t j = 0; j < n; ++j) y[j] = ker.dot_d(rows_[j].data(), x, n);
    ops::add(std::uint64_t(n) * n);
}

std::vector<double> Dst1Plan::apply(const std::vector<double>& x) const {
    if (x.size() != n_) throw std::invalid_argument("Dst1Plan: length mismatch");
    std::vector<double> y(n_);
    apply(x.data(), y.data());
    return y;
}

}  // namespace blocktri
