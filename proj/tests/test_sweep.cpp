#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "ptwind/sweep.hpp"

using namespace ptwind;

namespace {
SpectralProblem linear_pt() {
  SpectralProblem p;
  p.potential = PotentialSpec::linear(0.0);
  p.domain = Grid1D(-kPi / 2, kPi / 2, 101);
  return p;
}

SpectralProblem shifted_ho() {
  SpectralProblem p;
  p.potential = PotentialSpec::shifted_ho(0.1);
  p.domain = Grid1D(-10.0, 10.0, 101);
  return p;
}

bool strictly_increasing_magnitude(const std::vector<double>& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!(std::abs(w[i + 1]) > std::abs(w[i]))) return false;
  return true;
}
}  // namespace

TEST_CASE("continuant oracle reproduces the frozen exceptional point") {
  const double eps = oracle::linear_pt_first_ep(oracle::kLinearEpGrid);
  CHECK(std::abs(eps - oracle::kLinearEpStar) < 1e-6);
}

TEST_CASE("linear potential: one coalescence of the lowest pair") {
  ExceptionalPointOptions o;
  o.grid_points = oracle::kLinearEpGrid;
  o.n_modes = 2;
  auto eps = detect_exceptional_points(linear_pt(), 0.0, 5.0, 21, 1e-4, o);
  REQUIRE(eps.size() == 1);
  CHECK(std::abs(eps[0].epsilon_star - oracle::kLinearEpStar) < 1e-4);
  CHECK(eps[0].eps_above - eps[0].eps_below <= 1e-6);
  CHECK(eps[0].mode_pair[0] == 0);
  CHECK(eps[0].mode_pair[1] == 1);
  // Square-root closing: well below the pair's separation at eps = 0 (3).
  CHECK(eps[0].gap_at_star < 0.05);
}

TEST_CASE("no exceptional points without a phase transition") {
  ExceptionalPointOptions o;
  o.n_modes = 6;
  CHECK(detect_exceptional_points(shifted_ho(), 0.05, 2.0, 11, 1e-4, o).empty());
  // A real potential that ignores epsilon: spectra stay real.
  SpectralProblem herm;
  herm.potential.family = Family::Custom;
  herm.potential.poly = {0.0, 0.0, 3.0};
  herm.domain = Grid1D(-3.0, 3.0, 101);
  CHECK(detect_exceptional_points(herm, 0.0, 1.0, 5, 1e-4, o).empty());
  CHECK_THROWS_AS(detect_exceptional_points(herm, 0.0, 1.0, 5, 0.0, o), Error);
}

TEST_CASE("degree of symmetry breaking") {
  CHECK(degree_of_symmetry_breaking(std::vector<cd>{1.0, 2.0, 3.0}, 1e-9) == 0);
  CHECK(degree_of_symmetry_breaking(std::vector<cd>{{1.0, 0.5}, {1.0, -0.5}, 3.0}, 1e-9) == 2);
  CHECK(degree_of_symmetry_breaking(std::vector<cd>{1.0, 1.0 + 1e-12, 3.0}, 1e-9) == 2);
  CHECK_THROWS_AS(degree_of_symmetry_breaking(std::vector<cd>{1.0}, 0.0), Error);

  auto above = linear_pt().with_epsilon(oracle::kLinearEpStar + 1e-3);
  auto s = solve_linear_spectrum(above, oracle::kLinearEpGrid, 6);
  double scale = 0.0;
  for (auto e : s.energies()) scale = std::max(scale, std::abs(e));
  CHECK(degree_of_symmetry_breaking(s, 1e-6 * scale) == 2);
  auto below = linear_pt().with_epsilon(oracle::kLinearEpStar - 1e-2);
  CHECK(degree_of_symmetry_breaking(solve_linear_spectrum(below, oracle::kLinearEpGrid, 6),
                                    1e-6 * scale) == 0);
}

TEST_CASE("PT conjugacy of sampled functions") {
  Grid1D g(-1.0, 1.0, 201);
  std::vector<cd> a(g.size()), b(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    a[j] = cd(std::cos(3 * x) + x, std::sin(2 * x) + 0.3 * x * x);
  }
  for (std::size_t j = 0; j < g.size(); ++j) b[j] = std::conj(a[g.size() - 1 - j]);
  auto r = check_pt_conjugacy(ComplexSamples::on_grid(g, a), ComplexSamples::on_grid(g, b), 1e-12);
  CHECK(r.holds);
  CHECK(std::abs(r.c - 1.0) < 1e-14);

  Grid1D off(-1.0, 1.2, 201);
  CHECK_THROWS_AS(check_pt_conjugacy(ComplexSamples::on_grid(off, a),
                                     ComplexSamples::on_grid(off, b), 1e-6),
                  Error);
  // Mirrored about a different centre works with that centre.
  CHECK_NOTHROW(check_pt_conjugacy(ComplexSamples::on_grid(off, a),
                                   ComplexSamples::on_grid(off, b), 1e-6, 0.1));
}

TEST_CASE("broken pair eigenfunctions are PT conjugates") {
  auto p = linear_pt().with_epsilon(1.0);
  auto s = solve_linear_spectrum(p, oracle::kLinearEpGrid, 4);
  REQUIRE(std::abs(s.pairs[0].energy - std::conj(s.pairs[1].energy)) < 1e-8);
  auto r = check_pt_conjugacy(s.pairs[0].psi, s.pairs[1].psi, 1e-6);
  CHECK(r.holds);
  CHECK(r.residual < 1e-6);
  CHECK(std::abs(std::abs(r.c) - 1.0) < 1e-8);
  // Distinct real-energy modes are not related this way.
  auto q = check_pt_conjugacy(s.pairs[2].psi, s.pairs[3].psi, 1e-6);
  CHECK_FALSE(q.holds);
}

TEST_CASE("shifted oscillator tracks stay real and follow the closed-form windings") {
  // On [-10, 10] the Gaussian tails fall under the relative node threshold
  // and every winding reads as NaN; [-6, 6] keeps them resolvable.
  auto p = shifted_ho();
  p.domain = Grid1D(-6.0, 6.0, 101);
  SweepOptions o;
  o.solve.boundary_tol = 1e-3;
  auto r = track_spectrum(p, 0.1, 2.0, 20, 4, o);
  REQUIRE(r.tracks.size() == 4);
  for (const auto& t : r.tracks)
    for (const auto& q : t) {
      CHECK(std::abs(q.energy.imag()) < 1e-6 * std::abs(q.energy));
      CHECK_FALSE(q.interpolated);
    }
  // H_n(x + i eps) exp(-(x + i eps)^2 / 2) on a span [-L, L]: the Gaussian
  // turns by -2 eps L and each Hermite zero x_k - i eps adds
  // atan(eps / (L - x_k)) + atan(eps / (L + x_k)) - pi. The Dirichlet box
  // bends the phase in the far tails by the same amount for every mode, so
  // only the differences between modes are compared.
  const std::vector<std::vector<double>> zeros = {
      {}, {0.0}, {-std::sqrt(0.5), std::sqrt(0.5)}, {-std::sqrt(1.5), 0.0, std::sqrt(1.5)}};
  auto zero_part = [&](std::size_t n, double e) {
    const double L = 6.0;
    double w = 0.0;
    for (double xk : zeros[n]) w += std::atan(e / (L - xk)) + std::atan(e / (L + xk)) - kPi;
    return w;
  };
  for (std::size_t t = 0; t + 1 < 4; ++t)
    for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
      const double e = r.epsilons[i];
      const double d = r.tracks[t + 1][i].winding - r.tracks[t][i].winding;
      CHECK(std::abs(d - (zero_part(t + 1, e) - zero_part(t, e))) < 0.05);
    }
}

TEST_CASE("linear potential windings are ordered below the exceptional point") {
  auto r = track_spectrum(linear_pt(), 0.05, 0.7, 14, 4);
  for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
    std::vector<double> w;
    for (const auto& t : r.tracks) w.push_back(t[i].winding);
    CHECK(strictly_increasing_magnitude(w));
  }
  // Continuity: winding changes scale with the epsilon step.
  const double de = r.epsilons[1] - r.epsilons[0];
  for (const auto& t : r.tracks)
    for (std::size_t i = 1; i < t.size(); ++i)
      CHECK(std::abs(t[i].winding - t[i - 1].winding) < 20.0 * de);
}

TEST_CASE("windings across the exceptional point") {
  const double star = oracle::kLinearEpStar;
  auto r = track_spectrum(linear_pt(), star - 0.15, star + 0.35, 11, 6);
  for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
    // Spectators keep their order through the coalescence.
    std::vector<double> spect;
    for (std::size_t t = 2; t < 6; ++t) spect.push_back(r.tracks[t][i].winding);
    CHECK(strictly_increasing_magnitude(spect));
    if (r.epsilons[i] > star + 1e-3) {
      const auto& a = r.tracks[0][i];
      const auto& b = r.tracks[1][i];
      CHECK(std::abs(a.energy - std::conj(b.energy)) < 1e-8 * std::abs(a.energy));
      CHECK(std::abs(a.winding - b.winding) < 1e-3);
    }
  }
}

TEST_CASE("sweep determinism") {
  auto a = track_spectrum(linear_pt(), 0.3, 0.3, 2, 3);
  for (const auto& t : a.tracks) {
    CHECK(t[0].energy == t[1].energy);
    CHECK(t[0].winding == t[1].winding);
  }
  SweepOptions two;
  two.jobs = 2;
  auto b = track_spectrum(linear_pt(), 0.1, 0.6, 6, 3);
  auto c = track_spectrum(linear_pt(), 0.1, 0.6, 6, 3, two);
  CHECK(sweep_table_csv(b, SweepColumn::RealEnergy) == sweep_table_csv(c, SweepColumn::RealEnergy));
  CHECK(sweep_table_csv(b, SweepColumn::Winding) == sweep_table_csv(c, SweepColumn::Winding));
  CHECK_THROWS_AS(track_spectrum(linear_pt(), 0.1, 0.6, 1, 3), Error);
}

TEST_CASE("sweep tables") {
  auto r = track_spectrum(linear_pt(), 0.1, 0.2, 2, 2);
  const std::string csv = sweep_table_csv(r, SweepColumn::ImagEnergy);
  CHECK(csv.rfind("epsilon,mode1,mode2\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 3);
}

TEST_CASE("x sin x at large coupling: windings are not index ordered") {
  SpectralProblem p;
  p.potential = PotentialSpec::xsinx(20.0);
  p.domain = Grid1D(-kPi / 2, kPi / 2, 101);
  // Odd grid so that the parity nodes of odd modes fall on x = 0.
  auto s = solve_linear_spectrum(p, 301, 13);
  std::vector<double> w;
  for (const auto& pair : s.pairs) {
    try {
      w.push_back(std::abs(winding_of(pair.psi).winding));
    } catch (const Error&) {
      w.push_back(std::nan(""));
    }
  }
  REQUIRE(std::isfinite(w[8]));
  CHECK(w[8] < 0.5 * kPi);
  std::vector<double> finite;
  for (double v : w)
    if (std::isfinite(v)) finite.push_back(v);
  CHECK_FALSE(strictly_increasing_magnitude(finite));
}
