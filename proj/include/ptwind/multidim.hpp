#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptwind/phase.hpp"

namespace ptwind {

// 1D factor families:
//   SquareWell  sin(a (x + i eps))
//   PlaneWave   e^{i a x}                      (eps unused)
//   Oscillator  e^{-(x + i eps)^2 / 2} H_a(x + i eps)
enum class FieldFamily { SquareWell, PlaneWave, Oscillator };

const char* field_family_name(FieldFamily f);
FieldFamily field_family_from_name(const std::string& name);

ComplexSamples field_factor(FieldFamily family, unsigned a, const Grid1D& grid, double eps);

struct Field2D {
  Grid1D grid_x, grid_y;
  std::vector<cd> values;  // row-major: values[iy * nx + ix]
  FieldFamily family = FieldFamily::PlaneWave;
  unsigned a1 = 0, a2 = 0;
  double eps1 = 0.0, eps2 = 0.0;

  cd operator()(std::size_t ix, std::size_t iy) const { return values[iy * grid_x.size() + ix]; }
};

// Outer product fx(x) fy(y). Family and indices are left at their defaults.
Field2D tensor_field(const ComplexSamples& fx, const ComplexSamples& fy);

Field2D separable_field(FieldFamily family, unsigned a1, unsigned a2, const Grid1D& grid_x,
                        const Grid1D& grid_y, double eps1 = 0.0, double eps2 = 0.0);

struct PhaseMap {
  Grid1D grid_x, grid_y;
  std::vector<double> theta;  // principal phase in (-pi, pi], same layout as Field2D
  std::optional<WindingReport> diagonal;

  double operator()(std::size_t ix, std::size_t iy) const { return theta[iy * grid_x.size() + ix]; }
};

// Samples on the corner-to-corner diagonal (needs a square sample grid),
// parametrized by arc length from (x_min, y_min).
ComplexSamples diagonal_samples(const Field2D& field);
WindingReport diagonal_winding(const Field2D& field, const PhaseOptions& opts = {});

// Per-cell phase plus, when asked, the diagonal winding (NodeEncountered or
// AliasingSuspected from the diagonal). Maps at very small eps on coarse
// grids resolve the jump lines but not the diagonal unwrap.
PhaseMap phase_field(const Field2D& field, const PhaseOptions& opts = {}, bool with_diagonal = true);

// Phase-jump lines: the median over rows of the number of jumps met walking
// along x, and the same over columns walking along y. Consecutive cell steps
// above `step_floor` merge into one run (a sample sitting on the line splits
// the jump); a run counts when its total exceeds `line_jump`.
struct JumpLines {
  std::size_t across_x = 0;
  std::size_t across_y = 0;
};
JumpLines count_jump_lines(const PhaseMap& map, double step_floor = kPi / 8.0,
                           double line_jump = kPi / 2.0);

// Matrix CSV: header row of x values, then one row per y value.
std::string phase_map_csv(const PhaseMap& map);

}  // namespace ptwind
