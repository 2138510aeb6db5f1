#include "elasto/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace elasto::fft {

namespace {

// Plans are created once per size and shared. Plan creation in FFTW is not
// thread-safe; execution through the new-array interface is.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~PlanPair() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

std::mutex plan_mutex;

const PlanPair& plans_for(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  auto pair = std::make_unique<PlanPair>();
  std::vector<double> real(n);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  pair->r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(),
                                   reinterpret_cast<fftw_complex*>(spec.data()), flags);
  pair->c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                   reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
                                   flags | FFTW_DESTROY_INPUT);
  if (!pair->r2c || !pair->c2r) throw std::runtime_error("fftw plan creation failed");
  return *cache.emplace(n, std::move(pair)).first->second;
}

}  // namespace

void forward(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  if (out.size() != n / 2 + 1) throw std::invalid_argument("fft::forward: output size must be n/2+1");
  const auto& p = plans_for(n);
  // r2c does not touch its input, the const_cast only satisfies the C signature.
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& c : out) c *= scale;
}

void inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t n = out.size();
  if (in.size() != n / 2 + 1) throw std::invalid_argument("fft::inverse: input size must be n/2+1");
  const auto& p = plans_for(n);
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace elasto::fft
