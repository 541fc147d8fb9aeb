#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ptwind/error.hpp"

namespace ptwind {

using cd = std::complex<double>;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Uniform real grid, endpoints included.
class Grid1D {
 public:
  Grid1D() = default;
  Grid1D(double x_min, double x_max, std::size_t n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double h() const { return (x_max_ - x_min_) / static_cast<double>(n_ - 1); }
  double x(std::size_t j) const;
  std::vector<double> points() const;

  bool operator==(const Grid1D& o) const {
    return x_min_ == o.x_min_ && x_max_ == o.x_max_ && n_ == o.n_;
  }

 private:
  double x_min_ = 0.0;
  double x_max_ = 1.0;
  std::size_t n_ = 3;
};

// Path z(t) = f_R(t) + i*eps*f_I(t) sampled on a parameter grid.
struct Contour {
  Grid1D t_grid;
  std::vector<double> f_real;
  std::vector<double> f_imag;
  double epsilon = 0.0;

  std::size_t size() const { return t_grid.size(); }
  cd z(std::size_t j) const { return {f_real[j], epsilon * f_imag[j]}; }
  std::vector<cd> points() const;
};

// Throws NonInjectivePath when two samples coincide.
Contour make_contour(const std::vector<double>& f_real, const std::vector<double>& f_imag,
                     double epsilon, const Grid1D& t_grid);

// A complex function sampled along a path. `grid` is the parameter grid; for
// plain real grids `points[j] == grid.x(j)`.
struct ComplexSamples {
  Grid1D grid;
  std::vector<cd> points;
  std::vector<cd> values;

  static ComplexSamples on_grid(const Grid1D& grid, std::vector<cd> values);
  static ComplexSamples on_contour(const Contour& contour, std::vector<cd> values);

  std::size_t size() const { return values.size(); }
  // Real abscissae (Re of the sample points).
  std::vector<double> abscissae() const;
  ComplexSamples reversed() const;
};

enum class Family { SquareWell, ShiftedHO, CubicPT, LinearPT, PeriodicPT, XSinX, Custom };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

// One term c*cos(q z) or c*sin(q z) of a custom potential.
struct TrigTerm {
  cd coefficient;
  double wavenumber = 0.0;
  bool is_sine = false;
};

struct PotentialSpec {
  Family family = Family::SquareWell;
  double epsilon = 0.0;
  // Half-width of the cubic well's box [-L, L].
  double half_width = 1.0;
  // Custom family only: sum_j poly[j] z^j + trig terms.
  std::vector<cd> poly;
  std::vector<TrigTerm> trig;

  static PotentialSpec square_well() { return {}; }
  static PotentialSpec shifted_ho(double eps) { return make(Family::ShiftedHO, eps); }
  static PotentialSpec cubic(double eps = 1.0, double L = 1.0) {
    PotentialSpec s = make(Family::CubicPT, eps);
    s.half_width = L;
    return s;
  }
  static PotentialSpec linear(double eps) { return make(Family::LinearPT, eps); }
  static PotentialSpec periodic(double eps) { return make(Family::PeriodicPT, eps); }
  static PotentialSpec xsinx(double eps) { return make(Family::XSinX, eps); }
  static PotentialSpec make(Family f, double eps) {
    PotentialSpec s;
    s.family = f;
    s.epsilon = eps;
    return s;
  }

  bool is_periodic() const;
  // Lattice period; only meaningful for periodic families.
  double period() const { return kPi; }
  PotentialSpec with_epsilon(double e) const {
    PotentialSpec s = *this;
    s.epsilon = e;
    return s;
  }
};

cd eval_potential(const PotentialSpec& spec, cd z);

enum class BoundaryKind { Dirichlet, Bloch };
enum class Nonlinearity { None, Cubic, Quintic };

struct Boundary {
  BoundaryKind kind = BoundaryKind::Dirichlet;
  double k = 0.0;

  static Boundary dirichlet() { return {}; }
  static Boundary bloch(double k) { return {BoundaryKind::Bloch, k}; }
};

struct SpectralProblem {
  PotentialSpec potential;
  Grid1D domain;
  Boundary boundary;
  Nonlinearity nonlinearity = Nonlinearity::None;
  std::optional<double> power;

  // Throws InvalidArgument when the invariants do not hold.
  void validate() const;
  bool is_linear() const { return nonlinearity == Nonlinearity::None; }
  SpectralProblem with_epsilon(double e) const {
    SpectralProblem p = *this;
    p.potential.epsilon = e;
    return p;
  }
};

// Physicists' Hermite polynomial by the three-term recurrence.
cd hermite_complex(unsigned n, cd z);

// log Gamma(z) on the principal branch (Lanczos, g=7).
cd log_gamma(cd z);
// 1/Gamma(z); entire, exact zeros at the poles of Gamma.
cd rgamma(cd z);

// J_nu(z) by the ascending series. `log_half_z` selects the branch of
// (z/2)^nu; pass std::nullopt for the principal one. Throws SeriesDivergence
// for |z| beyond the series cap.
cd bessel_j(cd nu, cd z, std::optional<cd> log_half_z = std::nullopt);
inline constexpr double kBesselArgumentCap = 30.0;

}  // namespace ptwind
