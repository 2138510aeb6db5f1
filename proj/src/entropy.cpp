#include "elasto/entropy.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace elasto {

namespace {

void require_compatible(const State& a, const State& b, const ModelParams& p, const NonlocalMultiplier& mult) {
  if (a.u.size() != b.u.size()) throw std::invalid_argument("entropy: states have different n");
  if (a.time != b.time) throw std::invalid_argument("entropy: states are at different times");
  if (mult.size() != a.u.size()) throw std::invalid_argument("entropy: multiplier size mismatch");
  if (p.eps && *p.eps != mult.eps()) throw std::invalid_argument("entropy: params eps does not match multiplier");
}

double mean_of(std::size_t n, auto&& integrand) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += integrand(j);
  return s / static_cast<double>(n);
}

// Terms shared by eta and eta^M: F[u^eps] + int (v^eps-v)^2/2 + gamma/2 u_x^2 + L[u] u^eps.
double common_terms(const State& nl, const State& loc, const ModelParams& p, const NonlocalMultiplier& mult) {
  const TorusField ux = derivative(loc.u, 1);
  const TorusField lu = apply_L(loc.u, mult);
  const double bulk = mean_of(nl.u.size(), [&](std::size_t j) {
    const double dv = nl.v[j] - loc.v[j];
    return 0.5 * dv * dv + 0.5 * p.gamma * ux[j] * ux[j] + lu[j] * nl.u[j];
  });
  return surface_energy(nl.u, mult) + bulk;
}

// int gamma v^eps u_xxx + v^eps_x L[u]
double regularization_mismatch(const State& nl, const State& loc, const ModelParams& p,
                               const NonlocalMultiplier& mult) {
  const TorusField uxxx = derivative(loc.u, 3);
  const TorusField vx = derivative(nl.v, 1);
  const TorusField lu = apply_L(loc.u, mult);
  return mean_of(nl.u.size(), [&](std::size_t j) { return p.gamma * nl.v[j] * uxxx[j] + vx[j] * lu[j]; });
}

}  // namespace

double eta(const State& nl, const State& loc, const ModelParams& p, const Potential& pot,
           const NonlocalMultiplier& mult) {
  require_compatible(nl, loc, p, mult);
  const double w_block = mean_of(nl.u.size(), [&](std::size_t j) {
    const double ue = nl.u[j], u = loc.u[j];
    return pot.eval(ue) - pot.eval(u) - pot.d1(u) * (ue - u);
  });
  return common_terms(nl, loc, p, mult) + w_block;
}

double eta_m(const State& nl, const State& loc, const ModelParams& p, const Potential&,
             const NonlocalMultiplier& mult) {
  require_compatible(nl, loc, p, mult);
  const double quad = mean_of(nl.u.size(), [&](std::size_t j) {
    const double du = nl.u[j] - loc.u[j];
    return 0.5 * du * du;
  });
  return common_terms(nl, loc, p, mult) + quad;
}

double rate_rhs(const State& nl, const State& loc, const ModelParams& p, const Potential& pot,
                const NonlocalMultiplier& mult) {
  require_compatible(nl, loc, p, mult);
  const TorusField vx = derivative(loc.v, 1);
  const TorusField vex = derivative(nl.v, 1);
  const double bulk = mean_of(nl.u.size(), [&](std::size_t j) {
    const double ue = nl.u[j], u = loc.u[j];
    const double taylor = pot.d1(ue) - pot.d1(u) - pot.d2(u) * (ue - u);
    const double dvx = vx[j] - vex[j];
    return vx[j] * taylor - p.mu * dvx * dvx;
  });
  return bulk + regularization_mismatch(nl, loc, p, mult);
}

double rate_bound_rhs(const State& nl, const State& loc, const ModelParams& p, const Potential& pot,
                      const NonlocalMultiplier& mult) {
  require_compatible(nl, loc, p, mult);
  const double bulk = mean_of(nl.u.size(), [&](std::size_t j) {
    const double ds = pot.d1(nl.u[j]) - pot.d1(loc.u[j]);
    const double du = nl.u[j] - loc.u[j];
    return (ds * ds + du * du) / (2.0 * p.mu);
  });
  return bulk + regularization_mismatch(nl, loc, p, mult);
}

double reg_gap(const TorusField& u, const ModelParams& p, const NonlocalMultiplier& mult) {
  return l2_norm(apply_L(u, mult) - p.gamma * derivative(u, 2));
}

double surface_gap(const State& nl, const State& loc, const ModelParams& p, const NonlocalMultiplier& mult) {
  require_compatible(nl, loc, p, mult);
  const double ux = h1_seminorm(loc.u);
  return surface_energy(nl.u, mult) + 0.5 * p.gamma * ux * ux + inner(apply_L(loc.u, mult), nl.u) -
         surface_energy(nl.u - loc.u, mult);
}

EntropyReport entropy_report(const State& nl, const State& loc, const ModelParams& p, const Potential& pot,
                             const NonlocalMultiplier& mult) {
  EntropyReport r;
  r.time = nl.time;
  r.eta = eta(nl, loc, p, pot, mult);
  r.eta_m = eta_m(nl, loc, p, pot, mult);
  r.rate_rhs = rate_rhs(nl, loc, p, pot, mult);
  r.rate_bound_rhs = rate_bound_rhs(nl, loc, p, pot, mult);
  r.reg_gap = reg_gap(loc.u, p, mult);
  r.surface_gap = surface_gap(nl, loc, p, mult);
  return r;
}

void write_csv(std::ostream& os, const std::vector<EntropyReport>& series) {
  os << "t,eta,eta_m,rate_rhs,rate_bound_rhs,reg_gap,surface_gap\n" << std::setprecision(17);
  for (const auto& r : series)
    os << r.time << ',' << r.eta << ',' << r.eta_m << ',' << r.rate_rhs << ',' << r.rate_bound_rhs << ','
       << r.reg_gap << ',' << r.surface_gap << '\n';
}

}  // namespace elasto
