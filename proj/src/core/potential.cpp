#include <cmath>

#include "ptwind/core.hpp"

namespace ptwind {

namespace {
struct FamilyName {
  Family family;
  const char* name;
};
constexpr FamilyName kNames[] = {
    {Family::SquareWell, "square-well"}, {Family::ShiftedHO, "shifted-ho"},
    {Family::CubicPT, "cubic-pt"},       {Family::LinearPT, "linear-pt"},
    {Family::PeriodicPT, "periodic-pt"}, {Family::XSinX, "xsinx"},
    {Family::Custom, "custom"},
};
}  // namespace

const char* family_name(Family f) {
  for (const auto& n : kNames)
    if (n.family == f) return n.name;
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (const auto& n : kNames)
    if (name == n.name) return n.family;
  throw Error(ErrorKind::UnknownFamily, "unknown potential family '" + name + "'");
}

bool PotentialSpec::is_periodic() const {
  if (family == Family::PeriodicPT || family == Family::SquareWell) return true;
  if (family != Family::Custom) return false;
  // A custom potential is periodic with period pi when it has no polynomial
  // part beyond a constant and every trig wavenumber is an even integer.
  for (std::size_t j = 1; j < poly.size(); ++j)
    if (poly[j] != cd(0.0)) return false;
  for (const auto& t : trig) {
    double half = t.wavenumber / 2.0;
    if (std::abs(half - std::round(half)) > 1e-12) return false;
  }
  return true;
}

cd eval_potential(const PotentialSpec& spec, cd z) {
  const cd I(0.0, 1.0);
  const double e = spec.epsilon;
  switch (spec.family) {
    case Family::SquareWell:
      return 0.0;
    case Family::ShiftedHO: {
      cd w = z + I * e;
      return w * w;
    }
    case Family::CubicPT:
      return I * e * z * z * z;
    case Family::LinearPT:
      return 4.0 - 4.0 * I * e * z;
    case Family::PeriodicPT: {
      cd c = std::cos(z);
      return 4.0 * c * c + 4.0 * I * e * std::sin(2.0 * z);
    }
    case Family::XSinX:
      return z * std::sin(z) + I * e * std::cos(3.0 * z);
    case Family::Custom: {
      cd acc = 0.0;
      for (std::size_t j = spec.poly.size(); j-- > 0;) acc = acc * z + spec.poly[j];
      for (const auto& t : spec.trig)
        acc += t.coefficient * (t.is_sine ? std::sin(t.wavenumber * z) : std::cos(t.wavenumber * z));
      return acc;
    }
  }
  throw Error(ErrorKind::UnknownFamily, "malformed potential spec");
}

void SpectralProblem::validate() const {
  if (boundary.kind == BoundaryKind::Bloch) {
    if (!potential.is_periodic())
      throw Error(ErrorKind::InvalidArgument, "Bloch boundary needs a periodic potential");
    // Reduced zone of a pi-periodic lattice.
    if (!(boundary.k >= -1.0 && boundary.k < 1.0))
      throw Error(ErrorKind::InvalidArgument, "Bloch k must lie in [-1, 1)");
  }
  if (is_linear() == power.has_value())
    throw Error(ErrorKind::InvalidArgument, "power must be given exactly for nonlinear problems");
  if (power && !(*power >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "power must be nonnegative");
  if (potential.family == Family::CubicPT && !(potential.half_width > 0.0))
    throw Error(ErrorKind::InvalidArgument, "cubic well needs L > 0");
}

}  // namespace ptwind
