#include <array>
#include <cmath>

#include "ptwind/spectral.hpp"

namespace ptwind {

namespace {
// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kNodes = {-0.9602898564975363, -0.7966664774136267,
                                          -0.5255324099163290, -0.1834346424956498,
                                          0.1834346424956498,  0.5255324099163290,
                                          0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kWeights = {0.1012285362903763, 0.2223810344533745,
                                            0.3137066458778873, 0.3626837833783620,
                                            0.3626837833783620, 0.3137066458778873,
                                            0.2223810344533745, 0.1012285362903763};
constexpr double kTurningTol = 1e-10;
}  // namespace

double wkb_eigenvalue(int n, const SpectralProblem& problem, double wkb_eps) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "WKB index starts at 1");
  const double L = 0.5 * (problem.domain.x_max() - problem.domain.x_min());
  return n * n * kPi * kPi * wkb_eps * wkb_eps / (4.0 * L * L);
}

WkbFunction::WkbFunction(int n, const SpectralProblem& problem, double wkb_eps,
                         std::size_t table_points)
    : v_(problem.potential),
      energy_(wkb_eigenvalue(n, problem, wkb_eps)),
      eps_(wkb_eps),
      a_(problem.domain.x_min()),
      b_(problem.domain.x_max()),
      table_(a_, b_, table_points) {
  cumulative_.assign(table_points, 0.0);
  roots_.assign(table_points, 0.0);
  roots_[0] = root(a_, std::sqrt(cd(energy_) - eval_potential(v_, a_)));
  for (std::size_t j = 0; j + 1 < table_points; ++j) {
    const double x0 = table_.x(j), x1 = table_.x(j + 1);
    const double half = 0.5 * (x1 - x0), mid = 0.5 * (x0 + x1);
    cd acc = 0.0;
    cd near = roots_[j];
    for (std::size_t q = 0; q < kNodes.size(); ++q) {
      near = root(mid + half * kNodes[q], near);
      acc += kWeights[q] * near;
    }
    cumulative_[j + 1] = cumulative_[j] + half * acc;
    roots_[j + 1] = root(x1, near);
  }
}

cd WkbFunction::root(double x, cd near) const {
  const cd d = cd(energy_) - eval_potential(v_, x);
  if (std::abs(d) < kTurningTol * std::max(1.0, energy_))
    throw Error(ErrorKind::TurningPointOnGrid, "E - V vanishes on the quadrature grid");
  cd r = std::sqrt(d);
  return std::abs(r - near) <= std::abs(-r - near) ? r : -r;
}

cd WkbFunction::phase_integral(double x) const {
  if (x <= a_) return 0.0;
  const double h = table_.h();
  std::size_t j = static_cast<std::size_t>((x - a_) / h);
  if (j >= table_.size() - 1) j = table_.size() - 2;
  const double x0 = table_.x(j);
  const double half = 0.5 * (x - x0), mid = 0.5 * (x + x0);
  cd acc = 0.0;
  cd near = roots_[j];
  for (std::size_t q = 0; q < kNodes.size(); ++q) {
    near = root(mid + half * kNodes[q], near);
    acc += kWeights[q] * near;
  }
  return cumulative_[j] + half * acc;
}

cd WkbFunction::operator()(double x) const {
  const double h = table_.h();
  std::size_t j = static_cast<std::size_t>(std::max(0.0, (x - a_) / h));
  if (j >= table_.size()) j = table_.size() - 1;
  const cd r = root(x, roots_[j]);
  return std::sin(phase_integral(x) / eps_) / std::sqrt(r);
}

ComplexSamples wkb_eigenfunction(int n, const SpectralProblem& problem, const Grid1D& grid,
                                 double wkb_eps) {
  WkbFunction f(n, problem, wkb_eps);
  std::vector<cd> vals(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) vals[j] = f(grid.x(j));
  return ComplexSamples::on_grid(grid, std::move(vals));
}

}  // namespace ptwind
