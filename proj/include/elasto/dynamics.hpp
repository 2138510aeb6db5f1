#pragma once

#include "elasto/mollifier.hpp"
#include "elasto/potential.hpp"
#include "elasto/torus_field.hpp"

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace elasto {

/// Viscosity mu, capillarity gamma, and the non-local scale eps (absent for
/// the local model).
struct ModelParams {
  double mu = 0.5;
  double gamma = 0.005;
  std::optional<double> eps;

  bool nonlocal() const { return eps.has_value(); }
};

void validate(const ModelParams& p);

/// Strain u and velocity v at a given time. Both fields share n and have
/// vanishing mean.
struct State {
  State(TorusField u, TorusField v, double time = 0.0);

  TorusField u;
  TorusField v;
  double time;
};

/// Time derivatives (u_t, v_t).
using Rates = std::pair<TorusField, TorusField>;

Rates rhs_local(const State& s, const ModelParams& p, const Potential& pot);
Rates rhs_nonlocal(const State& s, const ModelParams& p, const Potential& pot, const NonlocalMultiplier& mult);

/// Non-local surface energy F_eps[w] = -1/2 (w, L_eps w).
double surface_energy(const TorusField& w, const NonlocalMultiplier& mult);

/// F_eps[w] from its double-integral definition,
/// 1/(4 eps^2) int int phi_eps(x-y) (w(y)-w(x))^2 dx dy, by tensor quadrature
/// (collocation in x, kernel trapezoid in y).
double surface_energy_direct(const TorusField& w, const Mollifier& phi, double eps, int intervals = 1024);

/// Local: int W(u) + v^2/2 + gamma/2 u_x^2. Non-local: int W(u) + v^2/2 + F_eps[u].
double total_energy(const State& s, const ModelParams& p, const Potential& pot,
                    const NonlocalMultiplier* mult = nullptr);

/// mu * |v|_{H^1}^2, the instantaneous dissipation rate.
double dissipation_rate(const State& s, const ModelParams& p);

struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> dissipation_cum;
  std::vector<double> residual;

  void append(double t, double e, double d);
  double max_abs_residual() const;
};

void write_csv(std::ostream& os, const EnergyLedger& ledger);

struct H1Report {
  double max_h1 = 0.0;
  double time_of_max = 0.0;
};

/// Maximum over snapshots of |u|_{H^1}.
H1Report h1_apriori_check(std::span<const State> snapshots);

namespace detail {

/// Half spectrum (k = 0..n/2) of d/dx W'(u) given the half spectrum of u.
/// W'(u) is evaluated on a zero-padded grid large enough that the
/// polynomial product is alias-free on the retained modes, then truncated
/// (Nyquist dropped).
std::vector<std::complex<double>> stress_gradient(std::span<const std::complex<double>> u_half, std::size_t n,
                                                  const Potential& pot);

/// Smallest power-of-two padding factor that makes W'(u) alias-free.
std::size_t padding_factor(const Potential& pot);

}  // namespace detail

}  // namespace elasto
