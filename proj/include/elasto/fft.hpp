#pragma once

#include <complex>
#include <span>

namespace elasto::fft {

/// Real-to-half-complex transform of n samples into n/2+1 coefficients,
/// normalized so that w(x_j) = sum_k c_k exp(2 pi i k j / n).
void forward(std::span<const double> in, std::span<std::complex<double>> out);

/// Exact inverse of forward(). The input is not modified.
void inverse(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace elasto::fft
