#include <catch_amalgamated.hpp>

#include <cmath>

#include "ptwind/multidim.hpp"

using namespace ptwind;

namespace {
// Roots of H_a for a <= 3.
std::vector<double> hermite_roots(unsigned a) {
  switch (a) {
    case 0: return {};
    case 1: return {0.0};
    case 2: return {-std::sqrt(0.5), std::sqrt(0.5)};
    default: return {-std::sqrt(1.5), 0.0, std::sqrt(1.5)};
  }
}

// Phase gained by e^{-(t + i eps)^2 / 2} H_a(t + i eps) from t0 to t1: the
// Gaussian contributes -eps (t1 - t0), each root r adds the continuous change
// of arg(t - r + i eps), which stays in the upper half plane for eps > 0.
double oscillator_phase_gain(unsigned a, double eps, double t0, double t1) {
  double w = -eps * (t1 - t0);
  for (double r : hermite_roots(a)) w += std::atan2(eps, t1 - r) - std::atan2(eps, t0 - r);
  return w;
}

PhaseOptions absolute_nodes() {
  PhaseOptions o;
  o.relative_tol = false;
  o.node_tol = 1e-250;
  return o;
}
}  // namespace

TEST_CASE("square well (1,1) at eps = 0 is sin x sin y") {
  Grid1D g(0.0, kPi, 41);
  auto f = separable_field(FieldFamily::SquareWell, 1, 1, g, g);
  for (std::size_t iy = 0; iy < g.size(); ++iy)
    for (std::size_t ix = 0; ix < g.size(); ++ix) {
      CHECK(std::abs(f(ix, iy) - std::sin(g.x(ix)) * std::sin(g.x(iy))) < 1e-15);
      CHECK(f(ix, iy).imag() == 0.0);
    }
  // Corners are nodes.
  CHECK_THROWS_AS(phase_field(f), Error);
}

TEST_CASE("oscillator ground state: nodeless Gaussian with linear phase") {
  Grid1D g(-4.0, 4.0, 81);
  auto zero = phase_field(separable_field(FieldFamily::Oscillator, 0, 0, g, g));
  for (double t : zero.theta) CHECK(t == 0.0);
  const double e1 = 0.3, e2 = -0.2;
  auto f = separable_field(FieldFamily::Oscillator, 0, 0, g, g, e1, e2);
  auto m = phase_field(f);
  for (std::size_t iy = 0; iy < g.size(); ++iy)
    for (std::size_t ix = 0; ix < g.size(); ++ix) {
      CHECK(std::abs(f(ix, iy)) > 0.0);
      const double expect = -(e1 * g.x(ix) + e2 * g.x(iy));
      CHECK(std::abs(std::remainder(m(ix, iy) - expect, 2 * kPi)) < 1e-12);
    }
}

TEST_CASE("plane-wave form: diagonal winding is the index sum times pi") {
  Grid1D g(0.0, kPi, 401);
  auto f = separable_field(FieldFamily::PlaneWave, 3, 2, g, g);
  CHECK(std::abs(phase_field(f).diagonal->winding - 5 * kPi) < 1e-6);
  // Gauge: an overall complex constant leaves the total unchanged.
  auto scaled = f;
  for (cd& v : scaled.values) v *= cd(-0.3, 1.7);
  CHECK(std::abs(diagonal_winding(scaled).winding - 5 * kPi) < 1e-6);
}

TEST_CASE("diagonal winding is the sum of the factor windings") {
  Grid1D g(-5.0, 5.0, 1001);
  for (auto fam : {FieldFamily::Oscillator, FieldFamily::SquareWell}) {
    const double e1 = 0.15, e2 = 0.25;
    auto fx = field_factor(fam, 2, g, e1), fy = field_factor(fam, 3, g, e2);
    auto f = separable_field(fam, 2, 3, g, g, e1, e2);
    const double sum = winding_of(fx, absolute_nodes()).winding + winding_of(fy, absolute_nodes()).winding;
    CHECK(std::abs(diagonal_winding(f, absolute_nodes()).winding - sum) < 1e-6);
  }
}

TEST_CASE("oscillator diagonal windings against the root formula and ordered by index sum") {
  const double lo = -7.5, hi = 7.5, eps = 0.1;
  Grid1D g(lo, hi, 751);
  const std::vector<std::pair<unsigned, unsigned>> idx{{0, 0}, {1, 0}, {0, 1}, {2, 0},
                                                       {1, 1}, {2, 1}, {3, 0}};
  std::vector<double> lo_by_sum(4, 1e300), hi_by_sum(4, -1e300);
  for (auto [a1, a2] : idx) {
    auto f = separable_field(FieldFamily::Oscillator, a1, a2, g, g, eps, eps);
    // Boundary magnitude condition for the box.
    double peak = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      peak = std::max(peak, std::abs(f(j, g.size() / 2)));
      edge = std::max({edge, std::abs(f(0, j)), std::abs(f(j, 0))});
    }
    CHECK(edge < 1e-8 * peak);
    const double w = diagonal_winding(f, absolute_nodes()).winding;
    CHECK(std::abs(w - oscillator_phase_gain(a1, eps, lo, hi) - oscillator_phase_gain(a2, eps, lo, hi)) < 1e-6);
    const unsigned s = a1 + a2;
    lo_by_sum[s] = std::min(lo_by_sum[s], std::abs(w));
    hi_by_sum[s] = std::max(hi_by_sum[s], std::abs(w));
  }
  for (unsigned s = 0; s + 1 < 4; ++s) CHECK(hi_by_sum[s] < lo_by_sum[s + 1]);
}

TEST_CASE("phase-jump lines of the oscillator at tiny eps") {
  Grid1D g(-20.0, 20.0, 401);
  auto lines = [&](unsigned a1, unsigned a2) {
    auto f = separable_field(FieldFamily::Oscillator, a1, a2, g, g, 0.001, 0.001);
    return count_jump_lines(phase_field(f, absolute_nodes(), false));
  };
  // A 0.1 grid cannot follow the diagonal phase through a zero 0.001 away.
  auto diag = separable_field(FieldFamily::Oscillator, 2, 1, g, g, 0.001, 0.001);
  CHECK_THROWS_AS(phase_field(diag, absolute_nodes()), Error);
  auto e = lines(2, 1);
  CHECK(e.across_x == 2);
  CHECK(e.across_y == 1);
  auto a = lines(0, 0);
  CHECK(a.across_x == 0);
  CHECK(a.across_y == 0);
  auto f = lines(2, 2);
  CHECK(f.across_x == 2);
  CHECK(f.across_y == 2);
}

TEST_CASE("multidim argument checks and output") {
  CHECK_THROWS_AS(field_family_from_name("torus"), Error);
  CHECK(field_family_from_name("oscillator") == FieldFamily::Oscillator);
  auto f = separable_field(FieldFamily::PlaneWave, 1, 1, Grid1D(0.0, 1.0, 5), Grid1D(0.0, 1.0, 7));
  CHECK_THROWS_AS(diagonal_winding(f), Error);
  auto g = separable_field(FieldFamily::PlaneWave, 1, 1, Grid1D(0.0, 1.0, 3), Grid1D(0.0, 1.0, 3));
  const std::string csv = phase_map_csv(phase_field(g));
  CHECK(csv.rfind("y\\x,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
