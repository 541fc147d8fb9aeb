#pragma once

#include <vector>

#include "ptwind/bloch.hpp"

namespace ptwind {

// Stationary state of E psi = -psi'' + V psi + |psi|^{2 sigma} psi over one
// period with psi(x + pi) = e^{i k pi} psi(x).
struct NonlinearState {
  cd energy;
  // Samples at x_j = j pi / N, j = 0..N; the last repeats the first times
  // the Bloch factor, so trapezoidal sums cover exactly one period.
  ComplexSamples psi;
  double power = 0.0;
  double residual = 0.0;
  double epsilon = 0.0;
  double k = 0.0;
  int sigma = 1;
  // Powers (or epsilons, for continue_in_epsilon) visited on the way here.
  std::vector<double> path;
};

// NewtonDivergence carrying the last iterate.
class NewtonFailure : public Error {
 public:
  NewtonFailure(const std::string& what, NonlinearState last)
      : Error(ErrorKind::NewtonDivergence, what), last_(std::move(last)) {}
  const NonlinearState& last() const { return last_; }

 private:
  NonlinearState last_;
};

struct NlsOptions {
  std::size_t grid_points = 128;  // unknown samples per period
  double p_start = 1e-4;
  double growth = 2.0;   // geometric power step
  int max_halvings = 10;
  int max_newton = 30;
  double tol = 1e-10;    // residual, relative to max(1, |E|) max |psi|
  double rcond_floor = 1e-13;
  // A continuation step is rejected (and halved) when the normalized overlap
  // with the previous state drops below this: the iterate jumped branches.
  double min_overlap = 0.9;
};

// Trapezoidal integral of |psi|^2 over the samples.
double unit_cell_power(const ComplexSamples& psi);

// Newton solve seeded by a linear band at the same (k, eps), continued in
// P_uc from opts.p_start. Unknowns are Re/Im psi and Re/Im E; the power row
// and the gauge Im psi(x0) = 0 (x0 = largest seed sample, psi(x0) > 0) close
// the system. P_uc = 0 returns the linear finite-difference state with
// unit shape and power 0.
NonlinearState solve_stationary_state(const PotentialSpec& potential, double k, int sigma,
                                      double power, const BandPoint& seed,
                                      const NlsOptions& opts = {});

// Follows one state through the epsilon list at fixed power; each step is
// halved on divergence up to opts.max_halvings times. TurningPointSuspected
// when the Newton matrix goes near-singular.
std::vector<NonlinearState> continue_in_epsilon(const PotentialSpec& potential,
                                                const NonlinearState& start,
                                                const std::vector<double>& epsilons,
                                                const NlsOptions& opts = {});

// At every epsilon, the lowest n_states states seeded afresh from the
// plane-wave bands and continued in power; states[i][j] is state j at
// epsilons[i], sorted by (Re E, Im E).
std::vector<std::vector<NonlinearState>> nonlinear_states(const PotentialSpec& potential, double k,
                                                          int sigma, double power,
                                                          const std::vector<double>& epsilons,
                                                          std::size_t n_states,
                                                          const NlsOptions& opts = {},
                                                          int jobs = 1);

}  // namespace ptwind
