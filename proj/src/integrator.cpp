#include "elasto/integrator.hpp"

#include <cmath>
#include <string>

namespace elasto {

using cplx = std::complex<double>;
using Matrix = LinearBlock::Matrix;

namespace {

void require_model(const ModelParams& p, const NonlocalMultiplier* mult, std::size_t n) {
  validate(p);
  if (p.nonlocal() != (mult != nullptr))
    throw std::invalid_argument("integrator: a multiplier is required exactly for the non-local model");
  if (mult && (mult->eps() != *p.eps || mult->size() != n))
    throw std::invalid_argument("integrator: multiplier does not match eps or n");
}

std::vector<cplx> half_of(const TorusField& w) {
  const Spectrum s = to_spectrum(w);
  return {s.half().begin(), s.half().end()};
}

State state_from(std::size_t n, const std::vector<cplx>& u, const std::vector<cplx>& v, double t) {
  return State(from_spectrum(Spectrum(n, u)), from_spectrum(Spectrum(n, v)), t);
}

// Parseval sums over the half spectrum.
double sum_sq(const std::vector<cplx>& c, bool include_nyquist) {
  const std::size_t nyq = c.size() - 1;
  double s = std::norm(c[0]);
  for (std::size_t k = 1; k < nyq; ++k) s += 2.0 * std::norm(c[k]);
  if (include_nyquist) s += std::norm(c[nyq]);
  return s;
}

double viscous_rate(const std::vector<cplx>& v, double mu) {
  const std::size_t nyq = v.size() - 1;
  double s = 0.0;
  for (std::size_t k = 1; k < nyq; ++k) {
    const double kk = angular_wavenumber(k);
    s += 2.0 * kk * kk * std::norm(v[k]);
  }
  return mu * s;
}

bool finite(const std::vector<cplx>& c) {
  for (const auto& z : c)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

LinearBlock linear_block(std::size_t n, const ModelParams& p, const NonlocalMultiplier* mult) {
  require_model(p, mult, n);
  const std::size_t nyq = n / 2;
  LinearBlock block;
  block.modes.assign(nyq + 1, Matrix{});
  const cplx i(0.0, 1.0);
  for (std::size_t k = 1; k <= nyq; ++k) {
    const double kk = angular_wavenumber(k);
    Matrix& a = block.modes[k];
    a[3] = -p.mu * kk * kk;
    if (k == nyq) continue;
    a[1] = i * kk;
    a[2] = mult ? -i * kk * mult->half()[k] : i * p.gamma * kk * kk * kk;
  }
  return block;
}

BlowUpError::BlowUpError(double time, State last_good)
    : std::runtime_error("integration blew up at t = " + std::to_string(time)), time_(time),
      last_good_(std::move(last_good)) {}

Stepper::Stepper(std::size_t n, double dt, const ModelParams& p, const Potential& pot, const NonlocalMultiplier* mult)
    : n_(n), dt_(dt), pot_(pot) {
  if (!(dt > 0.0)) throw std::invalid_argument("Stepper: dt must be positive");
  const LinearBlock block = linear_block(n, p, mult);
  const double h = 0.5 * dt;
  explicit_.resize(block.modes.size());
  solve_.resize(block.modes.size());
  for (std::size_t k = 0; k < block.modes.size(); ++k) {
    const Matrix& a = block.modes[k];
    explicit_[k] = {1.0 + h * a[0], h * a[1], h * a[2], 1.0 + h * a[3]};
    const Matrix m{1.0 - h * a[0], -h * a[1], -h * a[2], 1.0 - h * a[3]};
    const cplx det = m[0] * m[3] - m[1] * m[2];
    solve_[k] = {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
  }
}

void Stepper::advance(std::vector<cplx>& u, std::vector<cplx>& v) const {
  const std::size_t modes = u.size();
  // rhs0 = (I + dt/2 A) z^n
  std::vector<cplx> ru(modes), rv(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    const Matrix& e = explicit_[k];
    ru[k] = e[0] * u[k] + e[1] * v[k];
    rv[k] = e[2] * u[k] + e[3] * v[k];
  }
  const std::vector<cplx> n0 = detail::stress_gradient(u, n_, pot_);

  std::vector<cplx> pu(modes), pv(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    const Matrix& s = solve_[k];
    const cplx bv = rv[k] + dt_ * n0[k];
    pu[k] = s[0] * ru[k] + s[1] * bv;
    pv[k] = s[2] * ru[k] + s[3] * bv;
  }
  const std::vector<cplx> n1 = detail::stress_gradient(pu, n_, pot_);

  for (std::size_t k = 1; k < modes; ++k) {
    const Matrix& s = solve_[k];
    const cplx bv = rv[k] + 0.5 * dt_ * (n0[k] + n1[k]);
    u[k] = s[0] * ru[k] + s[1] * bv;
    v[k] = s[2] * ru[k] + s[3] * bv;
  }
}

State step(const State& s, double dt, const ModelParams& p, const Potential& pot, const NonlocalMultiplier* mult) {
  const std::size_t n = s.u.size();
  const Stepper stepper(n, dt, p, pot, mult);
  auto u = half_of(s.u);
  auto v = half_of(s.v);
  stepper.advance(u, v);
  if (!finite(u) || !finite(v) || std::sqrt(sum_sq(u, true)) > 1e6) throw BlowUpError(s.time + dt, s);
  return state_from(n, u, v, s.time + dt);
}

Trajectory run(const State& s0, double T, double dt, int record_every, const ModelParams& p, const Potential& pot,
               const NonlocalMultiplier* mult, const StepObserver& observer) {
  const std::size_t n = s0.u.size();
  require_model(p, mult, n);
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("run: T and dt must be positive");
  if (record_every < 1) throw std::invalid_argument("run: record_every must be >= 1");

  long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  if (steps < 1) steps = 1;
  const double last_dt = T - static_cast<double>(steps - 1) * dt;
  const Stepper full(n, dt, p, pot, mult);
  const Stepper last(n, last_dt, p, pot, mult);

  Trajectory traj;
  traj.params = p;
  traj.snapshots.push_back(s0);
  traj.ledger.append(s0.time, total_energy(s0, p, pot, mult), 0.0);

  auto u = half_of(s0.u);
  auto v = half_of(s0.v);
  double dissipated = 0.0;
  double rate = viscous_rate(v, p.mu);
  State current = s0;
  for (long i = 1; i <= steps; ++i) {
    const Stepper& stepper = (i == steps) ? last : full;
    stepper.advance(u, v);
    const double t = (i == steps) ? s0.time + T : s0.time + static_cast<double>(i) * dt;
    if (!finite(u) || !finite(v) || std::sqrt(sum_sq(u, true)) > 1e6) throw BlowUpError(t, current);

    const double next_rate = viscous_rate(v, p.mu);
    dissipated += 0.5 * stepper.dt() * (rate + next_rate);
    rate = next_rate;

    const bool record = (i % record_every == 0) || i == steps;
    if (record || observer) {
      current = state_from(n, u, v, t);
      if (observer) observer(current);
      if (record) {
        traj.snapshots.push_back(current);
        traj.ledger.append(t, total_energy(current, p, pot, mult), dissipated);
      }
    }
  }
  return traj;
}

}  // namespace elasto
