#pragma once

#include "elasto/dynamics.hpp"

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace elasto {

/// Per-wavenumber 2x2 matrices of the linear part acting on (u-hat, v-hat):
/// u_t = i k v, v_t = a21(k) u - mu k^2 v, where a21 = i gamma k^3 (local)
/// or -i k m[k] (non-local), k = 2 pi * wavenumber. A_0 = 0; the Nyquist row
/// keeps only the viscous entry.
struct LinearBlock {
  using Matrix = std::array<std::complex<double>, 4>;  // row-major a11 a12 a21 a22
  std::vector<Matrix> modes;                            // k = 0..n/2
};

LinearBlock linear_block(std::size_t n, const ModelParams& p, const NonlocalMultiplier* mult);

/// Thrown when a step produces non-finite values or |u|_{L^2} > 1e6.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, State last_good);
  double time() const { return time_; }
  const State& last_good() const { return last_good_; }

 private:
  double time_;
  State last_good_;
};

/// Second-order IMEX step: Crank-Nicolson on the linear block, Heun
/// predictor-corrector on the stress gradient d/dx W'(u). Mode 0 is never
/// touched, so means are conserved exactly.
class Stepper {
 public:
  Stepper(std::size_t n, double dt, const ModelParams& p, const Potential& pot, const NonlocalMultiplier* mult);

  double dt() const { return dt_; }
  /// Advances the half spectra of u and v in place.
  void advance(std::vector<std::complex<double>>& u, std::vector<std::complex<double>>& v) const;

 private:
  std::size_t n_;
  double dt_;
  const Potential& pot_;
  std::vector<LinearBlock::Matrix> explicit_;  // I + dt/2 A
  std::vector<LinearBlock::Matrix> solve_;     // (I - dt/2 A)^{-1}
};

/// One step of size dt. The model is non-local exactly when p.eps is set,
/// in which case mult must be given.
State step(const State& s, double dt, const ModelParams& p, const Potential& pot,
           const NonlocalMultiplier* mult = nullptr);

struct Trajectory {
  std::vector<State> snapshots;
  ModelParams params;
  EnergyLedger ledger;
};

/// Called after every step with the new state.
using StepObserver = std::function<void(const State&)>;

/// Advances s0 to time T (the last step shortened to land on T), recording
/// a snapshot and ledger row every `record_every` steps and at T. The
/// dissipation integral uses the trapezoid rule over every step.
Trajectory run(const State& s0, double T, double dt, int record_every, const ModelParams& p, const Potential& pot,
               const NonlocalMultiplier* mult = nullptr, const StepObserver& observer = {});

}  // namespace elasto
