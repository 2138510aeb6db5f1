#include "elasto/torus_field.hpp"

#include "elasto/fft.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace elasto {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

TorusField::TorusField(std::vector<double> values) : values_(std::move(values)) {
  const std::size_t n = values_.size();
  if (n < 8 || !is_power_of_two(n))
    throw std::invalid_argument("TorusField: n must be a power of two >= 8, got " + std::to_string(n));
  for (std::size_t j = 0; j < n; ++j)
    if (!std::isfinite(values_[j]))
      throw std::invalid_argument("TorusField: non-finite sample at index " + std::to_string(j));
}

TorusField TorusField::zeros(std::size_t n) { return TorusField(std::vector<double>(n, 0.0)); }

double TorusField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(size());
}

static void require_same_size(const TorusField& a, const TorusField& b, const char* what) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(what) + ": size mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
}

TorusField operator+(const TorusField& a, const TorusField& b) {
  require_same_size(a, b, "operator+");
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = a.values_[j] + b.values_[j];
  return TorusField(std::move(out));
}

TorusField operator-(const TorusField& a, const TorusField& b) {
  require_same_size(a, b, "operator-");
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = a.values_[j] - b.values_[j];
  return TorusField(std::move(out));
}

TorusField operator*(double s, const TorusField& a) {
  std::vector<double> out(a.values_);
  for (double& v : out) v *= s;
  return TorusField(std::move(out));
}

Spectrum::Spectrum(std::size_t n, std::vector<std::complex<double>> half) : n_(n), half_(std::move(half)) {
  if (n < 8 || !is_power_of_two(n)) throw std::invalid_argument("Spectrum: n must be a power of two >= 8");
  if (half_.size() != n / 2 + 1) throw std::invalid_argument("Spectrum: expected n/2+1 coefficients");
  // Mean and Nyquist coefficients of a real field are real.
  half_.front().imag(0.0);
  half_.back().imag(0.0);
}

std::complex<double> Spectrum::coeff(long k) const {
  const long half_n = static_cast<long>(n_ / 2);
  if (k <= -half_n || k > half_n) throw std::out_of_range("Spectrum::coeff: wavenumber out of range");
  return k >= 0 ? half_[static_cast<std::size_t>(k)] : std::conj(half_[static_cast<std::size_t>(-k)]);
}

Spectrum to_spectrum(const TorusField& w) {
  std::vector<std::complex<double>> half(w.size() / 2 + 1);
  fft::forward(w.values(), half);
  return Spectrum(w.size(), std::move(half));
}

TorusField from_spectrum(const Spectrum& s) {
  std::vector<double> out(s.size());
  fft::inverse(s.half(), out);
  return TorusField(std::move(out));
}

TorusField derivative(const TorusField& w, int order) {
  if (order < 1 || order > 4)
    throw std::invalid_argument("derivative: order must be in {1,2,3,4}, got " + std::to_string(order));
  const Spectrum s = to_spectrum(w);
  std::vector<std::complex<double>> half(s.half().begin(), s.half().end());
  const std::complex<double> i(0.0, 1.0);
  for (std::size_t k = 0; k < half.size(); ++k) {
    std::complex<double> factor = 1.0;
    for (int p = 0; p < order; ++p) factor *= i * angular_wavenumber(k);
    half[k] *= factor;
  }
  if (order % 2 == 1) half.back() = 0.0;
  return from_spectrum(Spectrum(w.size(), std::move(half)));
}

TorusField project_mean_zero(const TorusField& w) {
  const Spectrum s = to_spectrum(w);
  std::vector<std::complex<double>> half(s.half().begin(), s.half().end());
  half.front() = 0.0;
  return from_spectrum(Spectrum(w.size(), std::move(half)));
}

double inner(const TorusField& w1, const TorusField& w2) {
  require_same_size(w1, w2, "inner");
  double s = 0.0;
  for (std::size_t j = 0; j < w1.size(); ++j) s += w1[j] * w2[j];
  return s / static_cast<double>(w1.size());
}

double l2_norm(const TorusField& w) { return std::sqrt(inner(w, w)); }

double h1_seminorm(const TorusField& w) { return l2_norm(derivative(w, 1)); }

double linf_norm(const TorusField& w) {
  double m = 0.0;
  for (double v : w.values()) m = std::max(m, std::abs(v));
  return m;
}

void write_csv(std::ostream& os, const TorusField& w) {
  os << "x,value\n" << std::setprecision(17);
  for (std::size_t j = 0; j < w.size(); ++j) os << w.x(j) << ',' << w[j] << '\n';
}

TorusField read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "x,value")
    throw std::invalid_argument("read_csv: expected header 'x,value'");
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("read_csv: malformed row '" + line + "'");
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return TorusField(std::move(values));
}

}  // namespace elasto
