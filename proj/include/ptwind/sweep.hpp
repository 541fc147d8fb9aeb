#pragma once

#include <string>
#include <vector>

#include "ptwind/spectral.hpp"

namespace ptwind {

struct TrackPoint {
  cd energy;
  // NaN when the eigenfunction has a node on the grid (Hermitian limit).
  double winding = 0.0;
  // |<previous, current>| of the unit eigenvectors; 1 at the first sample.
  double overlap = 1.0;
  // Solve failed at this sample (near-defective operator); energy and
  // winding are linear interpolations of the neighbours.
  bool interpolated = false;
  // Unit eigenvector on the discretization grid; filled only when
  // SweepOptions::keep_eigenfunctions is set (empty on interpolated samples).
  std::vector<cd> psi;
};

struct SweepResult {
  std::vector<double> epsilons;
  // tracks[mode][sample]
  std::vector<std::vector<TrackPoint>> tracks;
  // Samples where two overlap scores for one track were within the
  // ambiguity tolerance (TrackingAmbiguity; reported, not fatal).
  std::vector<std::size_t> ambiguous_samples;
};

struct SweepOptions {
  std::size_t grid_points = 300;
  SolveOptions solve;
  double ambiguity_tol = 1e-3;
  int jobs = 1;
  bool keep_eigenfunctions = false;
};

// Solves at `steps` evenly spaced epsilons in [eps_lo, eps_hi] and follows
// modes by maximal eigenvector overlap with the previous sample.
SweepResult track_spectrum(const SpectralProblem& family, double eps_lo, double eps_hi,
                           std::size_t steps, std::size_t n_modes, const SweepOptions& opts = {});

struct ExceptionalPoint {
  double epsilon_star = 0.0;
  // Final bisection bracket.
  double eps_below = 0.0, eps_above = 0.0;
  // 0-based positions, in the sorted spectrum, of the coalescing pair.
  std::size_t mode_pair[2] = {0, 0};
  // |E_a - E_b| at epsilon_star. The gap closes like sqrt(eps - eps*), so at
  // a 1e-6 bracket this is of order 1e-3 of the spectral scale.
  double gap_at_star = 0.0;
};

struct ExceptionalPointOptions {
  std::size_t grid_points = 300;
  std::size_t n_modes = 6;
  // Relative to the spectral scale max |E| over the tracked modes.
  double im_tol = 1e-6;
  double bracket = 1e-6;
  int jobs = 1;
};

// Coarse scan of the tracked eigenvalues; every adjacent pair that splits
// into a conjugate pair between two samples is refined by bisection on the
// splitting predicate. Local gap minima below gap_tol (relative) without a
// split at the coarse ends are rescanned ten times finer, which catches a
// split and re-merge inside one coarse step. An empty result is valid.
std::vector<ExceptionalPoint> detect_exceptional_points(const SpectralProblem& family,
                                                        double eps_lo, double eps_hi,
                                                        std::size_t coarse_steps, double gap_tol,
                                                        const ExceptionalPointOptions& opts = {});

// Complex eigenvalues (|Im E| > tol) plus real eigenvalues with another real
// one within tol. Both thresholds are absolute.
int degree_of_symmetry_breaking(const std::vector<cd>& energies, double tol);
int degree_of_symmetry_breaking(const Spectrum& spectrum, double tol);

struct Conjugacy {
  bool holds = false;
  cd c;
  // ||psi1 - c psi2*(2 x0 - x)|| / ||psi1||
  double residual = 0.0;
};

// Least-squares fit of psi1(x) = c psi2*(2 x0 - x). Both sample sets must sit
// on one real grid mirrored about x0 (AsymmetricGrid otherwise).
Conjugacy check_pt_conjugacy(const ComplexSamples& psi1, const ComplexSamples& psi2, double tol,
                             double x0 = 0.0);

enum class SweepColumn { RealEnergy, ImagEnergy, Winding };

// epsilon followed by one column per track, 17 significant digits.
std::string sweep_table_csv(const SweepResult& r, SweepColumn column);

}  // namespace ptwind
