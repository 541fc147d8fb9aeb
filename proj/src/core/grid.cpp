#include <algorithm>
#include <cmath>
#include <numeric>

#include "ptwind/core.hpp"

namespace ptwind {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw Error(ErrorKind::InvalidArgument, "grid needs finite x_min < x_max");
  if (n_points < 3) throw Error(ErrorKind::InvalidArgument, "grid needs at least 3 points");
}

double Grid1D::x(std::size_t j) const {
  // Pin the last point exactly so that concatenated grids share endpoints.
  if (j + 1 == n_) return x_max_;
  return x_min_ + static_cast<double>(j) * h();
}

std::vector<double> Grid1D::points() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
  return out;
}

std::vector<cd> Contour::points() const {
  std::vector<cd> out(size());
  for (std::size_t j = 0; j < size(); ++j) out[j] = z(j);
  return out;
}

Contour make_contour(const std::vector<double>& f_real, const std::vector<double>& f_imag,
                     double epsilon, const Grid1D& t_grid) {
  if (f_real.size() != t_grid.size() || f_imag.size() != t_grid.size())
    throw Error(ErrorKind::InvalidArgument, "contour samples must match the parameter grid");
  Contour c{t_grid, f_real, f_imag, epsilon};
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  auto pts = c.points();
  for (const auto& p : pts)
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw Error(ErrorKind::InvalidArgument, "contour point is not finite");
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].real() != pts[b].real()) return pts[a].real() < pts[b].real();
    return pts[a].imag() < pts[b].imag();
  });
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p));
  const double tol = 1e-14 * std::max(1.0, scale);
  // Coincident points end up adjacent after the lexicographic sort unless their
  // real parts differ by less than tol; scan a short window to cover that.
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t k = i + 1; k < order.size(); ++k) {
      if (pts[order[k]].real() - pts[order[i]].real() > tol) break;
      if (std::abs(pts[order[k]] - pts[order[i]]) <= tol)
        throw Error(ErrorKind::NonInjectivePath, "contour visits the same point twice",
                    std::min(order[i], order[k]));
    }
  }
  return c;
}

ComplexSamples ComplexSamples::on_grid(const Grid1D& grid, std::vector<cd> values) {
  if (values.size() != grid.size())
    throw Error(ErrorKind::InvalidArgument, "sample count does not match grid");
  for (std::size_t j = 0; j < values.size(); ++j)
    if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag()))
      throw Error(ErrorKind::InvalidArgument, "non-finite sample", j);
  ComplexSamples s;
  s.grid = grid;
  s.points.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) s.points[j] = grid.x(j);
  s.values = std::move(values);
  return s;
}

ComplexSamples ComplexSamples::on_contour(const Contour& contour, std::vector<cd> values) {
  ComplexSamples s = on_grid(contour.t_grid, std::move(values));
  s.points = contour.points();
  return s;
}

std::vector<double> ComplexSamples::abscissae() const {
  std::vector<double> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) out[j] = points[j].real();
  return out;
}

ComplexSamples ComplexSamples::reversed() const {
  ComplexSamples r = *this;
  std::reverse(r.points.begin(), r.points.end());
  std::reverse(r.values.begin(), r.values.end());
  return r;
}

}  // namespace ptwind
