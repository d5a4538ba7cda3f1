#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace blocktri {

// In-place radix-2 decimation-in-time FFT; size must be a power of two.
// forward uses the e^{-2 pi i jk/n} kernel, inverse divides by n.
void fft_pow2(std::vector<std::complex<double>>& data, bool inverse);

// Type-I discrete sine transform of length n:
//   y[j] = sum_{i=0}^{n-1} x[i] sin(pi (i+1)(j+1) / (n+1)).
// Self-inverse up to the factor (n+1)/2. When n+1 is a power of two the
// transform runs through a length-2(n+1) FFT of the odd extension in
// O(n log n); otherwise it falls back to direct summation against
// precomputed kernel rows. Both paths agree to roundoff and both charge the
// multiply-add counter.
class Dst1Plan {
public:
    explicit Dst1Plan(std::size_t n);

    std::size_t length() const { return n_; }
    bool uses_fft() const { return fft_; }

    void apply(const double* x, double* y) const;
    std::vector<double> apply(const std::vector<double>& x) const;

private:
    std::size_t n_ = 0;
    bool fft_ = false;
    std::vector<std::vector<double>> rows_;  // direct path: kernel rows
};

}  // namespace blocktri
