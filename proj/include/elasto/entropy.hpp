#pragma once

#include "elasto/dynamics.hpp"

#include <iosfwd>
#include <vector>

namespace elasto {

// Relative-entropy functionals between a non-local state (u^eps, v^eps) and
// a local state (u, v) at the same time. Integrals are collocation sums and
// derivatives are spectral, so the algebraic identities between these
// functionals hold to round-off.

/// eta_eps = F[u^eps] + int W(u^eps) - W(u) - W'(u)(u^eps-u) + (v^eps-v)^2/2
///           + gamma/2 u_x^2 + L_eps[u] u^eps.
double eta(const State& nonlocal, const State& local, const ModelParams& p, const Potential& pot,
           const NonlocalMultiplier& mult);

/// eta_eps^M: eta with the W-block replaced by (u^eps-u)^2/2.
double eta_m(const State& nonlocal, const State& local, const ModelParams& p, const Potential& pot,
             const NonlocalMultiplier& mult);

/// Right-hand side of the exact rate identity for eta:
/// int v_x (W'(u^eps) - W'(u) - W''(u)(u^eps-u)) - mu (v_x - v^eps_x)^2
///     + gamma v^eps u_xxx + v^eps_x L_eps[u].
double rate_rhs(const State& nonlocal, const State& local, const ModelParams& p, const Potential& pot,
                const NonlocalMultiplier& mult);

/// Upper bound for d eta^M / dt:
/// int (W'(u^eps) - W'(u))^2/(2 mu) + (u^eps-u)^2/(2 mu) + gamma v^eps u_xxx + v^eps_x L_eps[u].
double rate_bound_rhs(const State& nonlocal, const State& local, const ModelParams& p, const Potential& pot,
                      const NonlocalMultiplier& mult);

/// || L_eps[u] - gamma u_xx ||_{L^2}.
double reg_gap(const TorusField& u_local, const ModelParams& p, const NonlocalMultiplier& mult);

/// F[u^eps] + int gamma/2 u_x^2 + L_eps[u] u^eps - F[u^eps - u]. Independent of v.
double surface_gap(const State& nonlocal, const State& local, const ModelParams& p, const NonlocalMultiplier& mult);

struct EntropyReport {
  double time = 0.0;
  double eta = 0.0;
  double eta_m = 0.0;
  double rate_rhs = 0.0;
  double rate_bound_rhs = 0.0;
  double reg_gap = 0.0;
  double surface_gap = 0.0;
};

EntropyReport entropy_report(const State& nonlocal, const State& local, const ModelParams& p, const Potential& pot,
                             const NonlocalMultiplier& mult);

void write_csv(std::ostream& os, const std::vector<EntropyReport>& series);

}  // namespace elasto
