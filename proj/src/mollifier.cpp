#include "elasto/mollifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace elasto {

namespace {

double raw_bump(double s) {
  const double t = 1.0 - s * s;
  return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

// Rule on [-b, b] with `panels` panels per half-support, weights times phi.
QuadratureRule weighted_rule(double b, int panels) {
  QuadratureRule r = composite_gauss_legendre(-b, b, 2 * panels);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) r.weights[i] *= bump(r.nodes[i] / b) / b;
  return r;
}

double transform_minus_one_with(const QuadratureRule& r, double xi) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double sn = std::sin(std::numbers::pi * xi * r.nodes[i]);
    s += r.weights[i] * sn * sn;
  }
  return -2.0 * s;
}

}  // namespace

const BumpMoments& bump_moments() {
  static const BumpMoments moments = [] {
    constexpr double tol = 1e-15;
    const double z = integrate_doubling(raw_bump, -1.0, 1.0, tol).value;
    const double m2 = integrate_doubling([](double s) { return raw_bump(s) * s * s; }, -1.0, 1.0, tol).value;
    const double m4 =
        integrate_doubling([](double s) { return raw_bump(s) * s * s * s * s; }, -1.0, 1.0, tol).value;
    return BumpMoments{z, m2 / z, m4 / z};
  }();
  return moments;
}

double bump(double s) { return raw_bump(s) / bump_moments().normalization; }

double max_admissible_gamma() { return 0.5 * bump_moments().second; }

double Mollifier::density(double s) const { return bump(s / b_) / b_; }

double Mollifier::transform_minus_one(double xi, int panels) const {
  if (panels == 0) return transform_minus_one_with(weighted_, xi);
  return transform_minus_one_with(weighted_rule(b_, panels), xi);
}

Mollifier build_mollifier(double gamma, double quad_tolerance) {
  const double m2 = bump_moments().second;
  if (!(gamma > 0.0) || 2.0 * gamma > m2) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "build_mollifier: gamma = " << gamma
        << " is not achievable by a kernel supported in [-1,1]; admissible interval is (0, " << 0.5 * m2 << "]";
    throw UnachievableMomentError(msg.str());
  }

  Mollifier phi;
  phi.gamma_ = gamma;
  phi.b_ = std::min(1.0, std::sqrt(2.0 * gamma / m2));
  phi.tol_ = quad_tolerance;

  auto moments = [](const QuadratureRule& r) {
    double m0 = 0.0, m2s = 0.0, m4s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double s2 = r.nodes[i] * r.nodes[i];
      m0 += r.weights[i];
      m2s += r.weights[i] * s2;
      m4s += r.weights[i] * s2 * s2;
    }
    return std::array<double, 3>{m0, m2s, m4s};
  };

  // 64 nodes per half-support, doubled until the moments settle.
  int panels = 4;
  QuadratureRule rule = weighted_rule(phi.b_, panels);
  auto prev = moments(rule);
  for (;;) {
    QuadratureRule finer = weighted_rule(phi.b_, 2 * panels);
    const auto next = moments(finer);
    panels *= 2;
    rule = std::move(finer);
    bool settled = true;
    for (int i = 0; i < 3; ++i) settled = settled && std::abs(next[i] - prev[i]) < quad_tolerance;
    prev = next;
    if (settled) break;
    if (panels > (1 << 14)) throw std::runtime_error("build_mollifier: moment quadrature did not converge");
  }
  phi.panels_ = panels;
  phi.weighted_ = std::move(rule);
  phi.mass_ = prev[0];
  phi.second_moment_ = prev[1];
  phi.fourth_moment_ = prev[2];

  if (std::abs(phi.mass_ - 1.0) > 1e-10 || std::abs(phi.second_moment_ - 2.0 * gamma) > 1e-10)
    throw std::runtime_error("build_mollifier: quadrature failed to certify mass/second moment");
  return phi;
}

NonlocalMultiplier::NonlocalMultiplier(double eps, std::size_t n, std::vector<double> half)
    : eps_(eps), n_(n), half_(std::move(half)) {
  if (!(eps_ > 0.0)) throw std::invalid_argument("NonlocalMultiplier: eps must be positive");
  if (half_.size() != n_ / 2 + 1) throw std::invalid_argument("NonlocalMultiplier: expected n/2+1 entries");
  half_.front() = 0.0;
}

void require_support_fits(const Mollifier& phi, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (eps * phi.scale_b() >= 0.5) {
    std::ostringstream msg;
    msg << "kernel support eps*b = " << eps * phi.scale_b() << " must be < 1/2 (eps < " << 0.5 / phi.scale_b()
        << ")";
    throw SupportTooWideError(msg.str());
  }
}

NonlocalMultiplier multiplier_table(const Mollifier& phi, double eps, std::size_t n) {
  require_support_fits(phi, eps);
  if (n < 8 || !is_power_of_two(n)) throw std::invalid_argument("multiplier_table: n must be a power of two >= 8");

  const double inv_eps2 = 1.0 / (eps * eps);
  auto tabulate = [&](const QuadratureRule& r) {
    std::vector<double> m(n / 2 + 1);
    for (std::size_t k = 1; k < m.size(); ++k)
      m[k] = transform_minus_one_with(r, eps * static_cast<double>(k)) * inv_eps2;
    return m;
  };

  int panels = phi.panels();
  std::vector<double> prev = tabulate(phi.quad_nodes());
  for (;;) {
    panels *= 2;
    std::vector<double> next = tabulate(weighted_rule(phi.scale_b(), panels));
    double worst = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k)
      worst = std::max(worst, std::abs(next[k] - prev[k]) / (1.0 + std::abs(next[k])));
    prev = std::move(next);
    if (worst < phi.quad_tolerance()) break;
    if (panels > (1 << 16)) throw std::runtime_error("multiplier_table: quadrature did not converge");
  }
  prev[0] = 0.0;
  return NonlocalMultiplier(eps, n, std::move(prev));
}

void write_csv(std::ostream& os, const NonlocalMultiplier& m) {
  os << "k,m\n" << std::setprecision(17);
  for (std::size_t k = 0; k < m.half().size(); ++k) os << k << ',' << m.half()[k] << '\n';
}

TorusField apply_L(const TorusField& w, const NonlocalMultiplier& mult) {
  if (w.size() != mult.size())
    throw std::invalid_argument("apply_L: field has n = " + std::to_string(w.size()) + " but multiplier has n = " +
                                std::to_string(mult.size()));
  const Spectrum s = to_spectrum(w);
  std::vector<std::complex<double>> half(s.half().begin(), s.half().end());
  for (std::size_t k = 0; k < half.size(); ++k) half[k] *= mult.half()[k];
  return from_spectrum(Spectrum(w.size(), std::move(half)));
}

TrigInterpolant::TrigInterpolant(const TorusField& w) : n_(w.size()) {
  const Spectrum s = to_spectrum(w);
  half_.assign(s.half().begin(), s.half().end());
}

double TrigInterpolant::operator()(double x) const {
  const std::size_t nyq = n_ / 2;
  const std::complex<double> z = std::polar(1.0, 2.0 * std::numbers::pi * x);
  std::complex<double> zk = z;
  double acc = half_[0].real();
  for (std::size_t k = 1; k < nyq; ++k) {
    acc += 2.0 * (half_[k] * zk).real();
    zk *= z;
  }
  // Real-valued interpolant takes the cosine branch of the Nyquist mode.
  acc += half_[nyq].real() * std::cos(std::numbers::pi * static_cast<double>(n_) * x);
  return acc;
}

QuadratureRule kernel_trapezoid(const Mollifier& phi, int intervals) {
  if (intervals < 2) throw std::invalid_argument("kernel_trapezoid: need at least two intervals");
  const double b = phi.scale_b();
  const double ds = 2.0 * b / intervals;
  QuadratureRule r;
  // Endpoints carry phi = 0 and are omitted.
  for (int i = 1; i < intervals; ++i) {
    const double s = -b + i * ds;
    r.nodes.push_back(s);
    r.weights.push_back(phi.density(s) * ds);
  }
  return r;
}

TorusField apply_L_direct(const TorusField& w, const Mollifier& phi, double eps, int intervals) {
  require_support_fits(phi, eps);
  const TrigInterpolant interp(w);
  const QuadratureRule kernel = kernel_trapezoid(phi, intervals);
  const double inv_eps2 = 1.0 / (eps * eps);
  std::vector<double> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double x = w.x(j);
    double conv = 0.0;
    for (std::size_t i = 0; i < kernel.nodes.size(); ++i) conv += kernel.weights[i] * interp(x - eps * kernel.nodes[i]);
    out[j] = (conv - w[j]) * inv_eps2;
  }
  return TorusField(std::move(out));
}

}  // namespace elasto
