#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ptwind/core.hpp"

namespace ptwind {

struct PhaseOptions {
  // Node threshold; relative to max |psi| unless `relative_tol` is false.
  double node_tol = 1e-10;
  bool relative_tol = true;
  // Largest principal increment accepted before AliasingSuspected.
  double alias_limit = kPi / 2.0;
};

struct PhaseProfile {
  std::vector<cd> points;
  std::vector<double> theta;
  std::vector<double> magnitude;
};

struct WindingReport {
  double winding = 0.0;
  double min_magnitude = 0.0;
  double aliasing_margin = 0.0;
};

PhaseProfile unwrap_phase(const ComplexSamples& psi, const PhaseOptions& opts = {});
WindingReport winding_number(const PhaseProfile& profile);
inline WindingReport winding_of(const ComplexSamples& psi, const PhaseOptions& opts = {}) {
  return winding_number(unwrap_phase(psi, opts));
}

// Winding of a callable along [a, b]. Starts from `n_initial` uniform samples
// and bisects every interval whose principal increment exceeds `split_above`
// until it does not, or the interval shrinks below `min_width`.
// `opts.node_tol` is relative to the largest magnitude met on the initial
// samples when `opts.relative_tol` holds.
struct AdaptiveWindingOptions {
  std::size_t n_initial = 4097;
  double split_above = kPi / 4.0;
  double min_width = 1e-13;
  PhaseOptions phase;
};
WindingReport adaptive_winding(const std::function<cd(double)>& f, double a, double b,
                               const AdaptiveWindingOptions& opts = {});

// Interior sign changes of real samples, located by linear interpolation.
// Samples with |v| <= tol count as zero and are skipped.
std::vector<double> find_real_nodes(const std::vector<double>& x, const std::vector<double>& v,
                                    double tol);

bool check_interlacing(const std::vector<double>& nodes_lo, const std::vector<double>& nodes_hi);

// Winding of psi_a - psi_b about zero.
WindingReport relative_winding(const ComplexSamples& psi_a, const ComplexSamples& psi_b,
                               const PhaseOptions& opts = {});

// Two-column CSV "x,theta" with 17 significant digits.
std::string phase_csv(const PhaseProfile& profile);

}  // namespace ptwind
