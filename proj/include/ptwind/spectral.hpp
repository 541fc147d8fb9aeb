#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>

#include "ptwind/core.hpp"
#include "ptwind/phase.hpp"

namespace ptwind {

struct EigenPair {
  cd energy;
  // Unit trapezoidal L2 norm; the largest sample is real and positive.
  ComplexSamples psi;
  std::size_t index = 0;
  double residual = 0.0;
};

struct Spectrum {
  std::vector<EigenPair> pairs;
  std::vector<cd> energies() const;
};

// Interior abscissae for Dirichlet (n points, h = (b-a)/(n+1)); for Bloch
// one period sampled at n points, h = period/n, starting at x_min.
Grid1D discretization_grid(const SpectralProblem& problem, std::size_t n);

Eigen::MatrixXcd discretize(const SpectralProblem& problem, std::size_t n);
Eigen::SparseMatrix<cd> discretize_sparse(const SpectralProblem& problem, std::size_t n);

// All eigenvalues of the dense operator, sorted by (Re, Im).
std::vector<cd> dense_eigenvalues(const Eigen::MatrixXcd& a);

// Sort key shared by every spectrum: ascending Re, ties (within a relative
// 1e-9 of the spectral scale) broken by ascending Im.
void sort_energies(std::vector<cd>& e);

struct SolveOptions {
  // Dense eigenvalue solves run on at most this many unknowns. Larger grids
  // take their eigenvalue guesses from a coarse dense solve and converge them
  // by Rayleigh-quotient inverse iteration on the full grid.
  std::size_t dense_limit = 400;
  double residual_tol = 1e-8;
  int max_inverse_iterations = 60;
  // Grow a truncated box (ShiftedHO) until boundary magnitudes drop below this.
  double boundary_tol = 1e-8;
  int max_box_growth = 6;
};

Spectrum solve_linear_spectrum(const SpectralProblem& problem, std::size_t n, std::size_t n_modes,
                               const SolveOptions& opts = {});

// Eigenvector for a known eigenvalue by shifted inverse iteration; returns the
// refined eigenvalue through `energy`.
Eigen::VectorXcd inverse_iteration(const Eigen::SparseMatrix<cd>& a, cd& energy, int max_iter,
                                   double tol, bool rayleigh);

// Fourth-order fixed-step transport of -psi'' + V psi = E psi along the
// contour, `substeps` RK4 steps per contour segment.
ComplexSamples integrate_along_contour(const SpectralProblem& problem, const Contour& contour,
                                       cd energy, cd psi0, cd dpsi0, int substeps = 4);

// Value and derivative after transporting (psi0, dpsi0) from z0 to z1 along
// a straight segment.
std::pair<cd, cd> transport_segment(const PotentialSpec& v, cd energy, cd z0, cd z1, cd psi0,
                                    cd dpsi0, int steps);

struct ShootingResult {
  cd energy;
  int iterations = 0;
  double mismatch = 0.0;
};

// Newton iteration on psi(b; E) = 0 with psi(a) = 0, psi'(a) = 1, using the
// variational equation for d psi / dE; `steps` fixed RK4 steps on [a, b].
ShootingResult shoot_dirichlet(const PotentialSpec& v, double a, double b, cd guess,
                               std::size_t steps, int max_iter = 40, double tol = 1e-13);

// Samples of the shooting eigenfunction on a uniform grid over [a, b] with
// `steps` RK4 steps (values at every step).
ComplexSamples shooting_eigenfunction(const PotentialSpec& v, double a, double b, cd energy,
                                      std::size_t steps);

double wkb_eigenvalue(int n, const SpectralProblem& problem, double wkb_eps = 1.0);

// Leading-order WKB eigenfunction as a callable, with the phase integral
// tabulated on `table_points` nodes and completed by Gauss-Legendre quadrature.
class WkbFunction {
 public:
  WkbFunction(int n, const SpectralProblem& problem, double wkb_eps = 1.0,
              std::size_t table_points = 4097);
  cd operator()(double x) const;
  double energy() const { return energy_; }
  cd phase_integral(double x) const;

 private:
  cd root(double x, cd near) const;
  PotentialSpec v_;
  double energy_ = 0.0;
  double eps_ = 1.0;
  double a_ = -1.0, b_ = 1.0;
  Grid1D table_;
  std::vector<cd> cumulative_;
  std::vector<cd> roots_;
};

ComplexSamples wkb_eigenfunction(int n, const SpectralProblem& problem, const Grid1D& grid,
                                 double wkb_eps = 1.0);

// Trapezoidal L2 norm squared over the sample abscissae.
double l2_norm_squared(const ComplexSamples& s);
// Scale to unit norm with the largest sample real and positive.
void normalize_and_gauge(ComplexSamples& s);

}  // namespace ptwind
