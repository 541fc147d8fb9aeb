#include "ptwind/multidim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ptwind {

const char* field_family_name(FieldFamily f) {
  switch (f) {
    case FieldFamily::SquareWell: return "square-well";
    case FieldFamily::PlaneWave: return "plane-wave";
    case FieldFamily::Oscillator: return "oscillator";
  }
  return "unknown";
}

FieldFamily field_family_from_name(const std::string& name) {
  for (FieldFamily f : {FieldFamily::SquareWell, FieldFamily::PlaneWave, FieldFamily::Oscillator})
    if (name == field_family_name(f)) return f;
  throw Error(ErrorKind::UnknownFamily, "unknown field family: " + name);
}

ComplexSamples field_factor(FieldFamily family, unsigned a, const Grid1D& grid, double eps) {
  std::vector<cd> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    const cd z(x, eps);
    switch (family) {
      case FieldFamily::SquareWell: v[j] = std::sin(static_cast<double>(a) * z); break;
      case FieldFamily::PlaneWave: v[j] = std::exp(cd(0.0, static_cast<double>(a) * x)); break;
      case FieldFamily::Oscillator: v[j] = std::exp(-z * z / 2.0) * hermite_complex(a, z); break;
    }
  }
  return ComplexSamples::on_grid(grid, std::move(v));
}

Field2D tensor_field(const ComplexSamples& fx, const ComplexSamples& fy) {
  Field2D f;
  f.grid_x = fx.grid;
  f.grid_y = fy.grid;
  const std::size_t nx = fx.size(), ny = fy.size();
  f.values.resize(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) f.values[iy * nx + ix] = fx.values[ix] * fy.values[iy];
  return f;
}

Field2D separable_field(FieldFamily family, unsigned a1, unsigned a2, const Grid1D& grid_x,
                        const Grid1D& grid_y, double eps1, double eps2) {
  Field2D f = tensor_field(field_factor(family, a1, grid_x, eps1), field_factor(family, a2, grid_y, eps2));
  f.family = family;
  f.a1 = a1;
  f.a2 = a2;
  f.eps1 = eps1;
  f.eps2 = eps2;
  for (cd v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::InvalidArgument, "field overflows on this grid");
  return f;
}

ComplexSamples diagonal_samples(const Field2D& field) {
  const std::size_t n = field.grid_x.size();
  if (field.grid_y.size() != n)
    throw Error(ErrorKind::InvalidArgument, "diagonal needs equal sample counts on both axes");
  const double lx = field.grid_x.x_max() - field.grid_x.x_min();
  const double ly = field.grid_y.x_max() - field.grid_y.x_min();
  std::vector<cd> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = field(j, j);
  return ComplexSamples::on_grid(Grid1D(0.0, std::hypot(lx, ly), n), std::move(v));
}

WindingReport diagonal_winding(const Field2D& field, const PhaseOptions& opts) {
  return winding_of(diagonal_samples(field), opts);
}

PhaseMap phase_field(const Field2D& field, const PhaseOptions& opts, bool with_diagonal) {
  PhaseMap m;
  m.grid_x = field.grid_x;
  m.grid_y = field.grid_y;
  m.theta.resize(field.values.size());
  for (std::size_t c = 0; c < field.values.size(); ++c) m.theta[c] = std::arg(field.values[c]);
  if (with_diagonal) m.diagonal = diagonal_winding(field, opts);
  return m;
}

namespace {
std::size_t median(std::vector<std::size_t> v) {
  if (v.empty()) return 0;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

double wrapped(double d) { return std::remainder(d, 2.0 * kPi); }
}  // namespace

JumpLines count_jump_lines(const PhaseMap& map, double step_floor, double line_jump) {
  const std::size_t nx = map.grid_x.size(), ny = map.grid_y.size();
  auto count = [&](std::size_t n, auto&& phase) {
    std::size_t lines = 0;
    double run = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double d = wrapped(phase(j + 1) - phase(j));
      if (std::abs(d) > step_floor) {
        run += d;
        continue;
      }
      lines += std::abs(run) > line_jump;
      run = 0.0;
    }
    return lines + (std::abs(run) > line_jump);
  };
  std::vector<std::size_t> rows(ny), cols(nx);
  for (std::size_t iy = 0; iy < ny; ++iy) rows[iy] = count(nx, [&](std::size_t j) { return map(j, iy); });
  for (std::size_t ix = 0; ix < nx; ++ix) cols[ix] = count(ny, [&](std::size_t j) { return map(ix, j); });
  return {median(rows), median(cols)};
}

std::string phase_map_csv(const PhaseMap& map) {
  std::ostringstream os;
  char buf[64];
  os << "y\\x";
  for (std::size_t ix = 0; ix < map.grid_x.size(); ++ix) {
    std::snprintf(buf, sizeof buf, ",%.16e", map.grid_x.x(ix));
    os << buf;
  }
  os << '\n';
  for (std::size_t iy = 0; iy < map.grid_y.size(); ++iy) {
    std::snprintf(buf, sizeof buf, "%.16e", map.grid_y.x(iy));
    os << buf;
    for (std::size_t ix = 0; ix < map.grid_x.size(); ++ix) {
      std::snprintf(buf, sizeof buf, ",%.16e", map(ix, iy));
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace ptwind
