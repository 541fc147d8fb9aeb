#pragma once

#include <string>
#include <vector>

#include "ptwind/phase.hpp"

namespace ptwind {

// y'(x) = cos(pi (x - shift)(y - level)), y(0) = start.
// shift = level = 0 is the plain cosine problem with y(0) = a; level = a,
// start = 0 is its shifted form with y(b) = a moved to the origin.
struct CosineIvp {
  cd start;
  cd level;
  cd shift;
};

struct IvpOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  std::size_t samples = 4096;  // uniform analysis grid
  double min_step = 1e-12;
  double max_step = 0.25;
};

// One accepted Dormand-Prince step with its continuous extension.
struct IvpStep {
  double x0 = 0.0, h = 0.0;
  cd r[5];
};

struct Trajectory {
  CosineIvp problem;
  Grid1D grid;
  std::vector<cd> y;      // on grid
  std::vector<cd> slope;  // right-hand side on grid
  std::size_t steps = 0;
  double max_error = 0.0;  // largest accepted scaled error estimate

  // Dense output, valid anywhere in [grid.x_min(), grid.x_max()].
  cd at(double x) const;
  cd slope_at(double x) const;

  std::vector<IvpStep> backward, forward;  // outward from x = 0
};

cd cosine_rhs(const CosineIvp& p, double x, cd y);

// Integrates outward from 0 to both window ends (x_lo <= 0 <= x_hi, x_lo < x_hi).
// StepUnderflow when the step size drops below opts.min_step.
Trajectory integrate_cosine(const CosineIvp& problem, double x_lo, double x_hi,
                            const IvpOptions& opts = {});

// The cosine problem y(0) = a with y(b) = a shifted to the origin when b != 0,
// integrated on [0, x_max] with rtol = atol = tol.
Trajectory integrate_cosine_ivp(cd a, double b, double x_max, double tol);

// Strict sign changes of Re y' on the analysis grid; a change registers only
// once Re y' has crossed the band on the other side.
std::size_t count_extrema(const Trajectory& traj, double band = 1e-9);
// Same rule on finite differences of real samples; band relative to the
// largest difference.
std::size_t count_extrema(const std::vector<double>& y, double band = 1e-9);

// Winding of the slope curve y'(x) over the trajectory window, resolved
// adaptively on the dense output. Real data meets y' = 0 and raises
// NodeEncountered or AliasingSuspected.
WindingReport ivp_winding(const Trajectory& traj);
// Winding of y - y_ref on the analysis grid (grids must match).
WindingReport ivp_winding(const Trajectory& traj, const Trajectory& reference);

// Odd multiple of pi nearest w when within `slack` (in units of pi), else 0.
int winding_class(double w, double slack = 0.2);

struct WindingMap {
  std::vector<double> re, im;
  // Indexed [i_im * re.size() + i_re].
  std::vector<double> winding;  // NaN when the cell failed
  std::vector<int> cls;         // odd k for k pi; 0 for flagged
  std::vector<std::string> status;
  double x_max = 0.0;

  std::size_t index(std::size_t i_re, std::size_t i_im) const { return i_im * re.size() + i_re; }
};

// Slope windings of y' = cos(pi x y), y(0) = a on [0, x_max] over a uniform
// grid of complex a. Cell failures are recorded in `status`; cells on the
// real axis are flagged with status "real-axis".
WindingMap classify_region(double re_lo, double re_hi, double im_lo, double im_hi, std::size_t n_re,
                           std::size_t n_im, double x_max = 20.0, const IvpOptions& opts = {},
                           int jobs = 1);

// Fraction of cells whose class differs between two maps on the same grid.
double class_change_fraction(const WindingMap& a, const WindingMap& b);

std::string winding_map_csv(const WindingMap& map);

struct ShiftedMember {
  int n = 0;
  double b = 0.0;  // 2n/a
  Trajectory real;
  // Same problem with the shift moved to b + i*perturbation.
  Trajectory perturbed;
  std::size_t extrema = 0;
  double winding = 0.0;  // slope winding of the perturbed member
  double slope_defect = 0.0;  // |y'(0) - 1| of the real member
};

struct ShiftedFamilyOptions {
  IvpOptions ivp{1e-10, 1e-10, 40001};
  double perturbation = 0.01;
};

// Members y_n with b_n = 2n/a for n in [n_lo, n_hi], integrated on
// [x_lo, x_hi]. InvalidArgument for a = 0.
std::vector<ShiftedMember> shifted_family(double a, int n_lo, int n_hi, double x_lo, double x_hi,
                                          const ShiftedFamilyOptions& opts = {});

// The pair y_+ and y_- of the shifted problem with level a and shifts -+2/a.
struct PairTrajectories {
  Trajectory plus, minus;
};
PairTrajectories pairing_trajectories(double a, double x_lo, double x_hi, const IvpOptions& opts = {});

struct PairingResult {
  double offset = 0.0;
  double misfit = 0.0;
};

// Shift s minimizing ||y_+(x) - y_-(x - s)|| over the overlap, |s| at most
// max_shift (default: a quarter of the window). Misfit is relative to
// ||y_+ - level|| on the same overlap. WindowTooSmall when the overlap drops
// below half the window.
PairingResult pairing_offset(const Trajectory& plus, const Trajectory& minus, double max_shift = -1.0);

std::string trajectory_csv(const Trajectory& traj);

}  // namespace ptwind
