#include "ptwind/nls.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptwind/parallel.hpp"

namespace ptwind {

double unit_cell_power(const ComplexSamples& psi) { return l2_norm_squared(psi); }

namespace {

struct System {
  std::vector<cd> v;  // potential at the nodes
  double h = 0.0;
  cd twist;           // e^{i k pi}
  int sigma = 1;      // 0 switches the nonlinearity off
  double power = 0.0;
  std::size_t x0 = 0;
  std::size_t n() const { return v.size(); }
};

struct Iterate {
  std::vector<cd> psi;
  cd energy;
};

struct Outcome {
  bool converged = false;
  bool singular = false;
  double residual = 0.0;
};

System make_system(const PotentialSpec& pot, double k, int sigma, double power, std::size_t n) {
  System s;
  s.h = kPi / static_cast<double>(n);
  s.twist = std::exp(cd(0.0, k * kPi));
  s.sigma = sigma;
  s.power = power;
  s.v.resize(n);
  for (std::size_t j = 0; j < n; ++j) s.v[j] = eval_potential(pot, s.h * static_cast<double>(j));
  return s;
}

cd neighbour(const std::vector<cd>& p, const System& s, std::ptrdiff_t j) {
  const auto n = static_cast<std::ptrdiff_t>(p.size());
  if (j < 0) return std::conj(s.twist) * p[static_cast<std::size_t>(j + n)];
  if (j >= n) return s.twist * p[static_cast<std::size_t>(j - n)];
  return p[static_cast<std::size_t>(j)];
}

cd nonlinear(cd psi, int sigma) {
  return sigma == 0 ? cd(0.0) : std::pow(std::norm(psi), sigma) * psi;
}

std::vector<cd> stationary_residual(const Iterate& it, const System& s) {
  const std::size_t n = s.n();
  std::vector<cd> f(n);
  const double ih2 = 1.0 / (s.h * s.h);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<std::ptrdiff_t>(j);
    const cd lap = (neighbour(it.psi, s, jj - 1) - 2.0 * it.psi[j] + neighbour(it.psi, s, jj + 1)) * ih2;
    f[j] = -lap + s.v[j] * it.psi[j] + nonlinear(it.psi[j], s.sigma) - it.energy * it.psi[j];
  }
  return f;
}

double residual_norm(const Iterate& it, const System& s) {
  double m = 0.0;
  for (cd x : stationary_residual(it, s)) m = std::max(m, std::abs(x));
  return m;
}

double residual_scale(const Iterate& it) {
  double pm = 0.0;
  for (cd x : it.psi) pm = std::max(pm, std::abs(x));
  return std::max(1.0, std::abs(it.energy)) * std::max(pm, 1e-300);
}

Outcome newton(Iterate& it, const System& s, const NlsOptions& opts) {
  const std::size_t n = s.n();
  const auto dim = static_cast<Eigen::Index>(2 * n + 2);
  const double ih2 = 1.0 / (s.h * s.h);
  Outcome out;
  const double start = residual_norm(it, s);
  for (int iter = 0; iter <= opts.max_newton; ++iter) {
    const std::vector<cd> f = stationary_residual(it, s);
    double pw = 0.0;
    for (cd x : it.psi) pw += std::norm(x);
    pw *= s.h;
    double fmax = 0.0;
    for (cd x : f) fmax = std::max(fmax, std::abs(x));
    out.residual = fmax;
    const double constraint = std::abs(pw - s.power) + std::abs(it.psi[s.x0].imag());
    if (fmax < opts.tol * residual_scale(it) && constraint < 1e-12 * std::max(1.0, s.power)) {
      out.converged = true;
      return out;
    }
    if (!std::isfinite(fmax) || fmax > 1e6 * std::max(start, 1e-300) + 1e6) return out;
    if (iter == opts.max_newton) return out;

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs(dim);
    const auto N = static_cast<Eigen::Index>(n);
    // Complex coefficient c on psi_l in equation j, split into real blocks.
    auto put = [&](std::size_t j, std::size_t l, cd c) {
      const auto r = static_cast<Eigen::Index>(j), q = static_cast<Eigen::Index>(l);
      jac(r, q) += c.real();
      jac(r, q + N) += -c.imag();
      jac(r + N, q) += c.imag();
      jac(r + N, q + N) += c.real();
    };
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t lm = (j + n - 1) % n, lp = (j + 1) % n;
      put(j, j, 2.0 * ih2 + s.v[j] - it.energy);
      put(j, lm, -ih2 * (j == 0 ? std::conj(s.twist) : cd(1.0)));
      put(j, lp, -ih2 * (j + 1 == n ? s.twist : cd(1.0)));
      if (s.sigma > 0) {
        const cd p = it.psi[j];
        const double r2 = std::norm(p);
        const double rs = std::pow(r2, s.sigma);
        const double drs = s.sigma * std::pow(r2, s.sigma - 1);
        const cd da = rs + 2.0 * drs * p.real() * p;
        const cd db = cd(0.0, rs) + 2.0 * drs * p.imag() * p;
        const auto r = static_cast<Eigen::Index>(j);
        jac(r, r) += da.real();
        jac(r + N, r) += da.imag();
        jac(r, r + N) += db.real();
        jac(r + N, r + N) += db.imag();
      }
      const auto r = static_cast<Eigen::Index>(j);
      jac(r, 2 * N) = -it.psi[j].real();
      jac(r + N, 2 * N) = -it.psi[j].imag();
      jac(r, 2 * N + 1) = it.psi[j].imag();
      jac(r + N, 2 * N + 1) = -it.psi[j].real();
      rhs(r) = -f[j].real();
      rhs(r + N) = -f[j].imag();
      jac(2 * N, r) = 2.0 * s.h * it.psi[j].real();
      jac(2 * N, r + N) = 2.0 * s.h * it.psi[j].imag();
    }
    rhs(2 * N) = -(pw - s.power);
    jac(2 * N + 1, static_cast<Eigen::Index>(s.x0) + N) = 1.0;
    rhs(2 * N + 1) = -it.psi[s.x0].imag();

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    if (!(lu.rcond() > opts.rcond_floor)) {
      out.singular = true;
      return out;
    }
    const Eigen::VectorXd dz = lu.solve(rhs);
    for (std::size_t j = 0; j < n; ++j)
      it.psi[j] += cd(dz(static_cast<Eigen::Index>(j)), dz(static_cast<Eigen::Index>(j) + N));
    it.energy += cd(dz(2 * N), dz(2 * N + 1));
  }
  return out;
}

NonlinearState package(const Iterate& it, const System& s, double eps, double k, int sigma,
                       double reported_power, std::vector<double> path) {
  Iterate g = it;
  // The gauge row fixes Im psi(x0) = 0; pick the positive member.
  if (g.psi[s.x0].real() < 0.0)
    for (cd& x : g.psi) x = -x;
  const std::size_t n = s.n();
  Grid1D grid(0.0, kPi, n + 1);
  std::vector<cd> vals(g.psi);
  vals.push_back(s.twist * g.psi[0]);
  NonlinearState st;
  st.energy = g.energy;
  st.psi = ComplexSamples::on_grid(grid, std::move(vals));
  st.power = reported_power;
  st.residual = residual_norm(g, s);
  st.epsilon = eps;
  st.k = k;
  st.sigma = sigma;
  st.path = std::move(path);
  return st;
}

Iterate iterate_from(const NonlinearState& st) {
  Iterate it;
  it.psi.assign(st.psi.values.begin(), st.psi.values.end() - 1);
  it.energy = st.energy;
  return it;
}

std::size_t argmax_abs(const std::vector<cd>& p) {
  std::size_t m = 0;
  for (std::size_t j = 1; j < p.size(); ++j)
    if (std::abs(p[j]) > std::abs(p[m])) m = j;
  return m;
}

void scale_to_power(std::vector<cd>& p, double h, double power) {
  double pw = 0.0;
  for (cd x : p) pw += std::norm(x);
  pw *= h;
  const double f = std::sqrt(power / pw);
  for (cd& x : p) x *= f;
}

bool same_branch(const Iterate& a, const Iterate& b, double min_overlap) {
  cd ab = 0.0;
  double aa = 0.0, bb = 0.0;
  for (std::size_t j = 0; j < a.psi.size(); ++j) {
    ab += std::conj(a.psi[j]) * b.psi[j];
    aa += std::norm(a.psi[j]);
    bb += std::norm(b.psi[j]);
  }
  return std::abs(ab) >= min_overlap * std::sqrt(aa * bb);
}

void check_sigma(int sigma) {
  if (sigma != 1 && sigma != 2)
    throw Error(ErrorKind::InvalidArgument, "sigma must be 1 (cubic) or 2 (quintic)");
}

}  // namespace

NonlinearState solve_stationary_state(const PotentialSpec& potential, double k, int sigma,
                                      double power, const BandPoint& seed,
                                      const NlsOptions& opts) {
  check_sigma(sigma);
  if (!(power >= 0.0)) throw Error(ErrorKind::InvalidArgument, "power must be nonnegative");
  if (!potential.is_periodic())
    throw Error(ErrorKind::UnsupportedBoundary, "stationary states need a periodic potential");
  if (seed.coefficients.empty()) throw Error(ErrorKind::InvalidArgument, "seed has no coefficients");
  const std::size_t n = opts.grid_points;
  if (n < 16) throw Error(ErrorKind::InvalidArgument, "need at least 16 grid points");

  const double h = kPi / static_cast<double>(n);
  Iterate it;
  it.energy = seed.energy;
  it.psi.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = h * static_cast<double>(j);
    cd s = 0.0;
    for (std::size_t m = 0; m < seed.coefficients.size(); ++m)
      s += seed.coefficients[m] *
           std::exp(cd(0.0, (k + 2.0 * (seed.first_wave + static_cast<int>(m))) * x));
    it.psi[j] = s;
  }
  const std::size_t x0 = argmax_abs(it.psi);
  const cd rot = std::conj(it.psi[x0]) / std::abs(it.psi[x0]);
  for (cd& x : it.psi) x *= rot;

  if (power == 0.0) {
    System s = make_system(potential, k, 0, 1.0, n);
    s.x0 = x0;
    scale_to_power(it.psi, h, 1.0);
    const Outcome o = newton(it, s, opts);
    if (!o.converged)
      throw NewtonFailure("linear limit did not converge", package(it, s, potential.epsilon, k,
                                                                   sigma, 0.0, {0.0}));
    return package(it, s, potential.epsilon, k, sigma, 0.0, {0.0});
  }

  double p = std::min(opts.p_start, power);
  scale_to_power(it.psi, h, p);
  std::vector<double> path;
  System s = make_system(potential, k, sigma, p, n);
  s.x0 = x0;
  Outcome o = newton(it, s, opts);
  if (!o.converged) {
    if (o.singular)
      throw Error(ErrorKind::TurningPointSuspected, "singular Newton matrix at the first power");
    throw NewtonFailure("no convergence at the starting power",
                        package(it, s, potential.epsilon, k, sigma, p, path));
  }
  path.push_back(p);
  double step = opts.growth;
  int halvings = 0;
  while (p < power) {
    const double target = std::min(power, p * step);
    Iterate trial = it;
    scale_to_power(trial.psi, h, target);
    s.power = target;
    o = newton(trial, s, opts);
    if (o.converged && same_branch(it, trial, opts.min_overlap)) {
      it = trial;
      p = target;
      path.push_back(p);
      continue;
    }
    if (++halvings > opts.max_halvings) {
      s.power = p;
      if (o.singular)
        throw Error(ErrorKind::TurningPointSuspected, "Newton matrix near-singular in power");
      throw NewtonFailure("power continuation stalled",
                          package(it, s, potential.epsilon, k, sigma, p, path));
    }
    step = std::sqrt(step);
  }
  s.power = power;
  return package(it, s, potential.epsilon, k, sigma, power, path);
}

std::vector<NonlinearState> continue_in_epsilon(const PotentialSpec& potential,
                                                const NonlinearState& start,
                                                const std::vector<double>& epsilons,
                                                const NlsOptions& opts) {
  check_sigma(start.sigma);
  const std::size_t n = start.psi.size() - 1;
  Iterate it = iterate_from(start);
  const std::size_t x0 = argmax_abs(it.psi);
  double eps = start.epsilon;
  std::vector<NonlinearState> out;
  std::vector<double> path{eps};
  for (double target : epsilons) {
    double step = target - eps;
    int halvings = 0;
    while (eps != target) {
      const double next = std::abs(target - eps) <= std::abs(step) ? target : eps + step;
      System s = make_system(potential.with_epsilon(next), start.k, start.sigma, start.power, n);
      s.x0 = x0;
      Iterate trial = it;
      const Outcome o = newton(trial, s, opts);
      if (o.converged && same_branch(it, trial, opts.min_overlap)) {
        it = trial;
        eps = next;
        path.push_back(eps);
        continue;
      }
      if (++halvings > opts.max_halvings) {
        if (o.singular || o.converged)
          throw Error(ErrorKind::TurningPointSuspected,
                      "branch ends: near-singular Newton matrix or jump to another state");
        System last = make_system(potential.with_epsilon(eps), start.k, start.sigma, start.power, n);
        last.x0 = x0;
        throw NewtonFailure("epsilon continuation stalled",
                            package(it, last, eps, start.k, start.sigma, start.power, path));
      }
      step *= 0.5;
    }
    System s = make_system(potential.with_epsilon(eps), start.k, start.sigma, start.power, n);
    s.x0 = x0;
    out.push_back(package(it, s, eps, start.k, start.sigma, start.power, path));
  }
  return out;
}

std::vector<std::vector<NonlinearState>> nonlinear_states(const PotentialSpec& potential, double k,
                                                          int sigma, double power,
                                                          const std::vector<double>& epsilons,
                                                          std::size_t n_states,
                                                          const NlsOptions& opts, int jobs) {
  if (potential.family != Family::PeriodicPT)
    throw Error(ErrorKind::InvalidArgument, "plane-wave seeds exist for the periodic family only");
  std::vector<std::vector<NonlinearState>> out(epsilons.size());
  parallel_for(epsilons.size(), jobs, [&](std::size_t i) {
    const PotentialSpec v = potential.with_epsilon(epsilons[i]);
    const auto bands = bloch_bands(epsilons[i], k, n_states, 41);
    std::vector<NonlinearState> row;
    for (const auto& b : bands) row.push_back(solve_stationary_state(v, k, sigma, power, b, opts));
    std::vector<cd> keys;
    for (const auto& st : row) keys.push_back(st.energy);
    sort_energies(keys);
    std::vector<NonlinearState> sorted;
    for (cd key : keys)
      for (auto& st : row)
        if (st.energy == key && st.psi.size() > 0) {
          sorted.push_back(std::move(st));
          st.psi = ComplexSamples{};
          break;
        }
    out[i] = std::move(sorted);
  });
  return out;
}

}  // namespace ptwind
