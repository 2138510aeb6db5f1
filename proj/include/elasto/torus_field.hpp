#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace elasto {

/// A 1-periodic real function sampled on the uniform grid x_j = j/n.
///
/// n must be a power of two no smaller than 8 and every sample finite;
/// the constructor enforces both. Values are immutable after construction.
class TorusField {
 public:
  explicit TorusField(std::vector<double> values);

  static TorusField zeros(std::size_t n);

  /// Samples f at the grid points j/n.
  template <class F>
  static TorusField sample(std::size_t n, F&& f) {
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = f(static_cast<double>(j) / static_cast<double>(n));
    return TorusField(std::move(v));
  }

  std::size_t size() const { return values_.size(); }
  double x(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(size()); }
  double operator[](std::size_t j) const { return values_[j]; }
  std::span<const double> values() const { return values_; }
  double mean() const;

  friend TorusField operator+(const TorusField& a, const TorusField& b);
  friend TorusField operator-(const TorusField& a, const TorusField& b);
  friend TorusField operator*(double s, const TorusField& a);

  bool operator==(const TorusField&) const = default;

 private:
  std::vector<double> values_;
};

/// Fourier coefficients of a real field, w(x) = sum_k c_k exp(2 pi i k x),
/// for k in {-n/2+1, ..., n/2}.
///
/// Only k = 0..n/2 is stored; negative wavenumbers are the conjugates, so
/// Hermitian symmetry holds exactly.
class Spectrum {
 public:
  Spectrum(std::size_t n, std::vector<std::complex<double>> half);

  std::size_t size() const { return n_; }
  std::size_t nyquist() const { return n_ / 2; }
  /// Coefficient for any k in {-n/2+1, ..., n/2}.
  std::complex<double> coeff(long k) const;
  std::span<const std::complex<double>> half() const { return half_; }

 private:
  std::size_t n_;
  std::vector<std::complex<double>> half_;
};

Spectrum to_spectrum(const TorusField& w);
TorusField from_spectrum(const Spectrum& s);

/// Spectral derivative of order 1..4. The Nyquist mode is dropped for odd
/// orders. Throws std::invalid_argument for any other order.
TorusField derivative(const TorusField& w, int order);

TorusField project_mean_zero(const TorusField& w);

double l2_norm(const TorusField& w);
double h1_seminorm(const TorusField& w);
double linf_norm(const TorusField& w);
/// (1/n) sum w1*w2; throws std::invalid_argument on size mismatch.
double inner(const TorusField& w1, const TorusField& w2);

/// Wavenumber 2 pi k.
inline double angular_wavenumber(std::size_t k) { return 2.0 * 3.14159265358979323846 * static_cast<double>(k); }

void write_csv(std::ostream& os, const TorusField& w);
TorusField read_csv(std::istream& is);

bool is_power_of_two(std::size_t n);

}  // namespace elasto
