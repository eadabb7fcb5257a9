#pragma once

#include <complex>

namespace holo::fft {

// DFT convention, binding for all modules:
//   forward:  X[k] = sum_x f[x] * exp(-j*2*pi*k.x/N)   (unnormalized)
//   inverse:  f[x] = (1/(W*H)) * sum_k X[k] * exp(+j*2*pi*k.x/N)
// Arrays are row-major [height][width]; in == out is allowed.

void dft2(const std::complex<double>* in, std::complex<double>* out, int width, int height);
void idft2(const std::complex<double>* in, std::complex<double>* out, int width, int height);
/// Unnormalized +sign transform (inverse kernel without the 1/(W*H) factor).
void dft2_conj(const std::complex<double>* in, std::complex<double>* out, int width, int height);

void dft2(const std::complex<float>* in, std::complex<float>* out, int width, int height);
void idft2(const std::complex<float>* in, std::complex<float>* out, int width, int height);
void dft2_conj(const std::complex<float>* in, std::complex<float>* out, int width, int height);

/// DFT frequency for bin index i of n samples spaced dx apart, cycles/meter.
/// Indices above n/2 wrap to negative frequencies.
inline double freq(int i, int n, double dx) {
    const int k = (i <= (n - 1) / 2) ? i : i - n;
    return static_cast<double>(k) / (static_cast<double>(n) * dx);
}

}  // namespace holo::fft
