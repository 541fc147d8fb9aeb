#include <catch_amalgamated.hpp>

#include <cmath>

#include "ptwind/config.hpp"
#include "ptwind/core.hpp"

using namespace ptwind;
using Catch::Approx;

namespace {
const Family kBuiltin[] = {Family::SquareWell, Family::ShiftedHO, Family::CubicPT,
                           Family::LinearPT,   Family::PeriodicPT, Family::XSinX};
}

TEST_CASE("grid spacing and endpoints") {
  Grid1D g(0.0, kPi, 5);
  CHECK(g.h() == Approx(kPi / 4));
  CHECK(g.x(0) == 0.0);
  CHECK(g.x(4) == kPi);
  CHECK_THROWS_AS(Grid1D(1.0, 1.0, 5), Error);
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 2), Error);
}

TEST_CASE("potential values") {
  CHECK(eval_potential(PotentialSpec::square_well(), 0.5) == cd(0.0));
  CHECK(eval_potential(PotentialSpec::linear(1.0), 0.0) == cd(4.0));
  cd v = eval_potential(PotentialSpec::periodic(0.25), kPi / 4);
  CHECK(v.real() == Approx(2.0));
  CHECK(v.imag() == Approx(1.0));
  cd c = eval_potential(PotentialSpec::cubic(), cd(0.5, 0.0));
  CHECK(c.imag() == Approx(0.125));
}

TEST_CASE("hermitian limit and PT symmetry of builtin families") {
  for (Family f : kBuiltin) {
    PotentialSpec s;
    s.family = f;
    for (double x = -2.0; x <= 2.0; x += 0.37) {
      s.epsilon = 0.0;
      CHECK(eval_potential(s, x).imag() == 0.0);
      for (double e : {0.1, 0.7, 2.0}) {
        s.epsilon = e;
        cd rhs = eval_potential(s, x);
        // The x sin x family has an even imaginary part, so it is parity
        // symmetric rather than PT symmetric about the origin.
        cd lhs = f == Family::XSinX ? eval_potential(s, -x) : std::conj(eval_potential(s, -x));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("unknown family name is rejected") {
  CHECK_THROWS_AS(family_from_name("morse"), Error);
  try {
    family_from_name("morse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownFamily);
  }
}

TEST_CASE("custom potential polynomial plus trig sum") {
  PotentialSpec s;
  s.family = Family::Custom;
  s.poly = {1.0, cd(0.0, 2.0), 3.0};
  s.trig = {{cd(0.5, 0.0), 2.0, true}};
  cd z(0.3, -0.2);
  cd expect = 1.0 + cd(0.0, 2.0) * z + 3.0 * z * z + 0.5 * std::sin(2.0 * z);
  CHECK(std::abs(eval_potential(s, z) - expect) < 1e-14);
  CHECK_FALSE(s.is_periodic());
}

TEST_CASE("hermite polynomials") {
  CHECK(hermite_complex(0, cd(1.0, 5.0)) == cd(1.0));
  CHECK(hermite_complex(2, 0.5).real() == Approx(-1.0));
  // closed form 8z^3 - 12z
  cd z(1.0, 1.0);
  cd closed = 8.0 * z * z * z - 12.0 * z;
  CHECK(std::abs(closed - cd(-28.0, 4.0)) < 1e-13);
  CHECK(std::abs(hermite_complex(3, z) - closed) < 1e-12);
}

TEST_CASE("hermite matches tabulated real values") {
  // Explicit coefficient table for H_0..H_10 (physicists').
  const std::vector<std::vector<double>> coeff = {
      {1},
      {0, 2},
      {-2, 0, 4},
      {0, -12, 0, 8},
      {12, 0, -48, 0, 16},
      {0, 120, 0, -160, 0, 32},
      {-120, 0, 720, 0, -480, 0, 64},
      {0, -1680, 0, 3360, 0, -1344, 0, 128},
      {1680, 0, -13440, 0, 13440, 0, -3584, 0, 256},
      {0, 30240, 0, -80640, 0, 48384, 0, -9216, 0, 512},
      {-30240, 0, 302400, 0, -403200, 0, 161280, 0, -23040, 0, 1024}};
  for (unsigned n = 0; n <= 10; ++n) {
    for (double x : {-2.3, -0.7, 0.1, 0.9, 1.7, 3.1}) {
      double ref = 0.0;
      for (std::size_t k = coeff[n].size(); k-- > 0;) ref = ref * x + coeff[n][k];
      double got = hermite_complex(n, x).real();
      CHECK(std::abs(got - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("contours") {
  Grid1D t(0.0, kPi, 101);
  auto pts = t.points();
  std::vector<double> one(t.size(), 1.0);
  Contour real = make_contour(pts, one, 0.0, t);
  for (std::size_t j = 0; j < t.size(); ++j) CHECK(real.z(j) == cd(t.x(j), 0.0));
  Contour line = make_contour(pts, one, 0.2, t);
  CHECK(line.z(50).imag() == Approx(0.2));
  std::vector<double> bump(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) bump[j] = t.x(j) * (kPi - t.x(j));
  Contour arc = make_contour(pts, bump, 0.1, t);
  CHECK(arc.z(0) == cd(0.0, 0.0));
  CHECK(std::abs(arc.z(100) - cd(kPi, 0.0)) < 1e-15);
  std::vector<double> fold(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) fold[j] = std::abs(t.x(j) - kPi / 2);
  std::vector<double> zero(t.size(), 0.0);
  CHECK_THROWS_AS(make_contour(fold, zero, 0.0, t), Error);
}

TEST_CASE("gamma and Bessel series") {
  CHECK(std::abs(rgamma(5.0) - 1.0 / 24.0) < 1e-15);
  CHECK(std::abs(rgamma(-3.0)) == 0.0);
  CHECK(std::abs(std::exp(log_gamma(0.5)) - std::sqrt(kPi)) < 1e-13);
  // Gamma(1+i) reference value.
  cd g = std::exp(log_gamma(cd(1.0, 1.0)));
  CHECK(std::abs(g - cd(0.49801566811835604, -0.15494982830181069)) < 1e-13);
  CHECK(bessel_j(0.0, 0.0) == cd(1.0));
  CHECK(std::abs(bessel_j(0.0, 1.0) - 0.7651976865579666) < 1e-12);
  CHECK(std::abs(bessel_j(1.0, 2.5) - 0.4970941024642741) < 1e-12);
  // Half-integer order closed form J_{1/2}(x) = sqrt(2/(pi x)) sin x.
  double x = 1.7;
  CHECK(std::abs(bessel_j(0.5, x) - std::sqrt(2.0 / (kPi * x)) * std::sin(x)) < 1e-13);
  // Negative integer order: J_{-n} = (-1)^n J_n.
  CHECK(std::abs(bessel_j(-3.0, 2.0) + bessel_j(3.0, 2.0)) < 1e-13);
  CHECK_THROWS_AS(bessel_j(0.0, 40.0), Error);
}

TEST_CASE("problem JSON round trip") {
  SpectralProblem p;
  p.potential = PotentialSpec::cubic(1.0, 1.5);
  p.domain = Grid1D(-1.5, 1.5, 401);
  json j = to_json(p);
  SpectralProblem q = problem_from_json(j);
  CHECK(q.potential.family == Family::CubicPT);
  CHECK(q.potential.half_width == 1.5);
  CHECK(q.domain == p.domain);
  CHECK(to_json(q).dump() == j.dump());
  j["potential"]["bogus"] = 1;
  CHECK_THROWS_AS(problem_from_json(j), Error);
}

TEST_CASE("problem invariants") {
  SpectralProblem p;
  p.potential = PotentialSpec::linear(0.5);
  p.domain = Grid1D(0.0, kPi, 101);
  p.boundary = Boundary::bloch(0.0);
  CHECK_THROWS_AS(p.validate(), Error);
  p.potential = PotentialSpec::periodic(0.2);
  p.validate();
  p.boundary.k = 1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.boundary.k = 0.3;
  p.nonlinearity = Nonlinearity::Cubic;
  CHECK_THROWS_AS(p.validate(), Error);
  p.power = 0.1;
  p.validate();
}
