#include "elasto/dynamics.hpp"

#include "elasto/fft.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace elasto {

using cplx = std::complex<double>;

void validate(const ModelParams& p) {
  if (!(p.mu > 0.0)) throw std::invalid_argument("ModelParams: mu must be positive");
  if (!(p.gamma > 0.0)) throw std::invalid_argument("ModelParams: gamma must be positive");
  if (p.eps && !(*p.eps > 0.0)) throw std::invalid_argument("ModelParams: eps must be positive");
}

State::State(TorusField u_, TorusField v_, double t) : u(std::move(u_)), v(std::move(v_)), time(t) {
  if (u.size() != v.size()) throw std::invalid_argument("State: u and v must share n");
  if (std::abs(u.mean()) > 1e-12 * std::max(1.0, linf_norm(u)) ||
      std::abs(v.mean()) > 1e-12 * std::max(1.0, linf_norm(v)))
    throw std::invalid_argument("State: u and v must have vanishing mean");
}

namespace detail {

std::size_t padding_factor(const Potential& pot) {
  const int d = std::max(1, pot.stress_degree());
  std::size_t p = 1;
  while (2 * p < static_cast<std::size_t>(d + 1)) p *= 2;
  return p;
}

std::vector<cplx> stress_gradient(std::span<const cplx> u_half, std::size_t n, const Potential& pot) {
  const std::size_t nyq = n / 2;
  std::vector<cplx> out(nyq + 1, 0.0);
  if (pot.stress_degree() <= 0) return out;

  const std::size_t m = n * padding_factor(pot);
  std::vector<cplx> padded(m / 2 + 1, 0.0);
  std::copy(u_half.begin(), u_half.end(), padded.begin());
  if (m > n) padded[nyq] = 0.5 * padded[nyq].real();  // Nyquist cosine splits over +-n/2.
  std::vector<double> grid(m);
  fft::inverse(padded, grid);
  for (double& g : grid) g = pot.d1(g);
  fft::forward(grid, padded);

  const cplx i(0.0, 1.0);
  for (std::size_t k = 1; k < nyq; ++k) out[k] = i * angular_wavenumber(k) * padded[k];
  return out;
}

}  // namespace detail

namespace {

// Shared body of both right-hand sides; `capillarity` returns the symbol of
// the term subtracted from v_t, applied to u-hat.
template <class Capillarity>
Rates rhs_impl(const State& s, const ModelParams& p, const Potential& pot, Capillarity&& capillarity) {
  const std::size_t n = s.u.size();
  const std::size_t nyq = n / 2;
  const Spectrum us = to_spectrum(s.u);
  const Spectrum vs = to_spectrum(s.v);
  std::vector<cplx> ut(nyq + 1, 0.0), vt = detail::stress_gradient(us.half(), n, pot);
  const cplx i(0.0, 1.0);
  for (std::size_t k = 1; k <= nyq; ++k) {
    const double kk = angular_wavenumber(k);
    const bool odd_ok = k < nyq;  // odd-order derivatives drop the Nyquist mode
    ut[k] = odd_ok ? i * kk * vs.half()[k] : 0.0;
    vt[k] += -p.mu * kk * kk * vs.half()[k];
    if (odd_ok) vt[k] -= capillarity(k, kk) * us.half()[k];
  }
  return {from_spectrum(Spectrum(n, std::move(ut))), from_spectrum(Spectrum(n, std::move(vt)))};
}

}  // namespace

Rates rhs_local(const State& s, const ModelParams& p, const Potential& pot) {
  if (p.nonlocal()) throw std::invalid_argument("rhs_local: params carry eps; use rhs_nonlocal");
  // gamma u_xxx has symbol gamma (ik)^3 = -i gamma k^3.
  return rhs_impl(s, p, pot, [&](std::size_t, double kk) { return cplx(0.0, -p.gamma * kk * kk * kk); });
}

Rates rhs_nonlocal(const State& s, const ModelParams& p, const Potential& pot, const NonlocalMultiplier& mult) {
  if (!p.nonlocal() || *p.eps != mult.eps())
    throw std::invalid_argument("rhs_nonlocal: params eps does not match multiplier eps");
  if (mult.size() != s.u.size()) throw std::invalid_argument("rhs_nonlocal: multiplier size mismatch");
  // d/dx L_eps[u] has symbol i k m[k].
  return rhs_impl(s, p, pot, [&](std::size_t k, double kk) { return cplx(0.0, kk * mult.half()[k]); });
}

double surface_energy(const TorusField& w, const NonlocalMultiplier& mult) {
  return -0.5 * inner(w, apply_L(w, mult));
}

double surface_energy_direct(const TorusField& w, const Mollifier& phi, double eps, int intervals) {
  require_support_fits(phi, eps);
  const TrigInterpolant interp(w);
  const QuadratureRule kernel = kernel_trapezoid(phi, intervals);
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double x = w.x(j);
    double row = 0.0;
    for (std::size_t i = 0; i < kernel.nodes.size(); ++i) {
      const double d = interp(x - eps * kernel.nodes[i]) - w[j];
      row += kernel.weights[i] * d * d;
    }
    total += row;
  }
  return total / static_cast<double>(w.size()) / (4.0 * eps * eps);
}

double total_energy(const State& s, const ModelParams& p, const Potential& pot, const NonlocalMultiplier* mult) {
  if (p.nonlocal() != (mult != nullptr))
    throw std::invalid_argument("total_energy: multiplier must be given exactly for the non-local model");
  if (mult && mult->eps() != *p.eps) throw std::invalid_argument("total_energy: multiplier eps mismatch");

  double bulk = 0.0;
  for (std::size_t j = 0; j < s.u.size(); ++j) bulk += pot.eval(s.u[j]) + 0.5 * s.v[j] * s.v[j];
  bulk /= static_cast<double>(s.u.size());
  if (mult) return bulk + surface_energy(s.u, *mult);
  const double ux = h1_seminorm(s.u);
  return bulk + 0.5 * p.gamma * ux * ux;
}

double dissipation_rate(const State& s, const ModelParams& p) {
  const double vx = h1_seminorm(s.v);
  return p.mu * vx * vx;
}

void EnergyLedger::append(double t, double e, double d) {
  times.push_back(t);
  energy.push_back(e);
  dissipation_cum.push_back(d);
  residual.push_back(times.size() == 1 ? 0.0 : e + d - energy.front());
}

double EnergyLedger::max_abs_residual() const {
  double m = 0.0;
  for (double r : residual) m = std::max(m, std::abs(r));
  return m;
}

void write_csv(std::ostream& os, const EnergyLedger& ledger) {
  os << "t,energy,cumulative_dissipation,residual\n" << std::setprecision(17);
  for (std::size_t i = 0; i < ledger.times.size(); ++i)
    os << ledger.times[i] << ',' << ledger.energy[i] << ',' << ledger.dissipation_cum[i] << ','
       << ledger.residual[i] << '\n';
}

H1Report h1_apriori_check(std::span<const State> snapshots) {
  H1Report r;
  for (const State& s : snapshots) {
    const double h1 = h1_seminorm(s.u);
    if (h1 > r.max_h1) {
      r.max_h1 = h1;
      r.time_of_max = s.time;
    }
  }
  return r;
}

}  // namespace elasto
