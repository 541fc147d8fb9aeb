#include <cmath>

#include "ptwind/spectral.hpp"

namespace ptwind {

namespace {
constexpr double kOverflowGuard = 1e150;

void guard(cd v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > kOverflowGuard)
    throw Error(ErrorKind::StepFailure, "solution exceeded the overflow guard");
}

// One RK4 step of (psi, dpsi) for psi'' = (V - E) psi over a complex step dz.
void rk4_step(const PotentialSpec& v, cd e, cd z, cd dz, cd& psi, cd& dpsi) {
  auto q = [&](cd w) { return eval_potential(v, w) - e; };
  const cd q0 = q(z), qm = q(z + 0.5 * dz), q1 = q(z + dz);
  cd k1p = dpsi, k1d = q0 * psi;
  cd k2p = dpsi + 0.5 * dz * k1d, k2d = qm * (psi + 0.5 * dz * k1p);
  cd k3p = dpsi + 0.5 * dz * k2d, k3d = qm * (psi + 0.5 * dz * k2p);
  cd k4p = dpsi + dz * k3d, k4d = q1 * (psi + dz * k3p);
  psi += dz / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  dpsi += dz / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
}

// RK4 on the pair and its E-derivative: u'' = (V - E) u - psi.
struct State {
  cd psi, dpsi, u, du;
};

State rk4_variational(const PotentialSpec& v, cd e, double x, double h, State s) {
  auto f = [&](double t, const State& y) {
    cd q = eval_potential(v, t) - e;
    return State{y.dpsi, q * y.psi, y.du, q * y.u - y.psi};
  };
  auto axpy = [](const State& y, double c, const State& k) {
    return State{y.psi + c * k.psi, y.dpsi + c * k.dpsi, y.u + c * k.u, y.du + c * k.du};
  };
  State k1 = f(x, s);
  State k2 = f(x + 0.5 * h, axpy(s, 0.5 * h, k1));
  State k3 = f(x + 0.5 * h, axpy(s, 0.5 * h, k2));
  State k4 = f(x + h, axpy(s, h, k3));
  const double c = h / 6.0;
  return State{s.psi + c * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi),
               s.dpsi + c * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi),
               s.u + c * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
               s.du + c * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du)};
}
}  // namespace

std::pair<cd, cd> transport_segment(const PotentialSpec& v, cd energy, cd z0, cd z1, cd psi0,
                                    cd dpsi0, int steps) {
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be positive");
  const cd dz = (z1 - z0) / static_cast<double>(steps);
  cd psi = psi0, dpsi = dpsi0;
  for (int s = 0; s < steps; ++s) {
    rk4_step(v, energy, z0 + static_cast<double>(s) * dz, dz, psi, dpsi);
    guard(psi);
    guard(dpsi);
  }
  return {psi, dpsi};
}

ComplexSamples integrate_along_contour(const SpectralProblem& problem, const Contour& contour,
                                       cd energy, cd psi0, cd dpsi0, int substeps) {
  problem.validate();
  if (!problem.is_linear())
    throw Error(ErrorKind::InvalidArgument, "contour integration needs a linear problem");
  const std::size_t n = contour.size();
  std::vector<cd> vals(n);
  vals[0] = psi0;
  cd psi = psi0, dpsi = dpsi0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    auto [p, d] = transport_segment(problem.potential, energy, contour.z(j), contour.z(j + 1), psi,
                                    dpsi, substeps);
    psi = p;
    dpsi = d;
    vals[j + 1] = psi;
  }
  return ComplexSamples::on_contour(contour, std::move(vals));
}

ShootingResult shoot_dirichlet(const PotentialSpec& v, double a, double b, cd guess,
                               std::size_t steps, int max_iter, double tol) {
  if (!(a < b) || steps < 2) throw Error(ErrorKind::InvalidArgument, "bad shooting interval");
  const double h = (b - a) / static_cast<double>(steps);
  ShootingResult r{guess, 0, 0.0};
  double prev_step = 1e300;
  for (int it = 1; it <= max_iter; ++it) {
    State s{0.0, 1.0, 0.0, 0.0};
    for (std::size_t k = 0; k < steps; ++k) {
      s = rk4_variational(v, r.energy, a + static_cast<double>(k) * h, h, s);
      guard(s.psi);
    }
    if (s.u == cd(0.0)) throw Error(ErrorKind::ConvergenceFailure, "flat shooting derivative");
    cd step = s.psi / s.u;
    r.energy -= step;
    r.iterations = it;
    r.mismatch = std::abs(step);
    if (std::abs(step) <= tol * std::max(1.0, std::abs(r.energy))) return r;
    // Past the round-off floor the Newton step stops shrinking.
    if (it > 3 && std::abs(step) >= prev_step && std::abs(step) < 1e-9 * std::abs(r.energy))
      return r;
    prev_step = std::abs(step);
  }
  throw Error(ErrorKind::ConvergenceFailure, "shooting Newton did not converge");
}

ComplexSamples shooting_eigenfunction(const PotentialSpec& v, double a, double b, cd energy,
                                      std::size_t steps) {
  const double h = (b - a) / static_cast<double>(steps);
  std::vector<cd> vals(steps + 1);
  cd psi = 0.0, dpsi = 1.0;
  vals[0] = psi;
  for (std::size_t k = 0; k < steps; ++k) {
    rk4_step(v, energy, a + static_cast<double>(k) * h, h, psi, dpsi);
    guard(psi);
    vals[k + 1] = psi;
  }
  ComplexSamples s = ComplexSamples::on_grid(Grid1D(a, b, steps + 1), std::move(vals));
  normalize_and_gauge(s);
  return s;
}

}  // namespace ptwind
