#include <lapacke.h>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptwind/spectral.hpp"

namespace ptwind {

std::vector<cd> Spectrum::energies() const {
  std::vector<cd> e;
  for (const auto& p : pairs) e.push_back(p.energy);
  return e;
}

void sort_energies(std::vector<cd>& e) {
  double scale = 1.0;
  for (auto v : e) scale = std::max(scale, std::abs(v));
  const double tie = 1e-9 * scale;
  // Stable two-pass sort: Re first, then fix up near-equal runs by Im.
  std::stable_sort(e.begin(), e.end(), [](cd a, cd b) { return a.real() < b.real(); });
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t j = i + 1;
    while (j < e.size() && e[j].real() - e[j - 1].real() <= tie) ++j;
    std::stable_sort(e.begin() + i, e.begin() + j, [](cd a, cd b) { return a.imag() < b.imag(); });
    i = j;
  }
}

std::vector<cd> dense_eigenvalues(const Eigen::MatrixXcd& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXcd h = a;
  auto* data = reinterpret_cast<lapack_complex_double*>(h.data());
  bool hessenberg = true;
  for (Eigen::Index j = 0; j < a.cols() && hessenberg; ++j)
    for (Eigen::Index i = j + 2; i < a.rows(); ++i)
      if (a(i, j) != cd(0.0)) {
        hessenberg = false;
        break;
      }
  lapack_int ilo = 1, ihi = n;
  if (!hessenberg) {
    lapack_int info = LAPACKE_zgebal(LAPACK_COL_MAJOR, 'B', n, data, n, &ilo, &ihi,
                                     std::vector<double>(n).data());
    std::vector<lapack_complex_double> tau(std::max<lapack_int>(1, n - 1));
    if (info == 0) info = LAPACKE_zgehrd(LAPACK_COL_MAJOR, n, ilo, ihi, data, n, tau.data());
    if (info != 0) throw Error(ErrorKind::ConvergenceFailure, "Hessenberg reduction failed");
  }
  std::vector<cd> e(n);
  lapack_int info = LAPACKE_zhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, ilo, ihi, data, n,
                                   reinterpret_cast<lapack_complex_double*>(e.data()), nullptr, n);
  if (info != 0) throw Error(ErrorKind::ConvergenceFailure, "shifted QR iteration did not converge");
  sort_energies(e);
  return e;
}

double l2_norm_squared(const ComplexSamples& s) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    double dx = std::abs(s.points[j + 1] - s.points[j]);
    acc += 0.5 * dx * (std::norm(s.values[j]) + std::norm(s.values[j + 1]));
  }
  return acc;
}

namespace {
void gauge(std::vector<cd>& v) {
  std::size_t m = 0;
  for (std::size_t j = 1; j < v.size(); ++j)
    if (std::abs(v[j]) > std::abs(v[m])) m = j;
  if (v[m] == cd(0.0)) return;
  cd rot = std::conj(v[m]) / std::abs(v[m]);
  for (auto& x : v) x *= rot;
  v[m] = std::abs(v[m]);
}

Eigen::VectorXcd start_vector(Eigen::Index n) {
  Eigen::VectorXcd x(n);
  for (Eigen::Index j = 0; j < n; ++j)
    x(j) = cd(1.0 + 0.3 * std::sin(0.7 * static_cast<double>(j)),
              0.2 * std::cos(1.3 * static_cast<double>(j)));
  return x / x.norm();
}

bool is_symmetric(const Eigen::SparseMatrix<cd>& a) {
  Eigen::SparseMatrix<cd> t = a.transpose();
  return (a - t).norm() <= 1e-14 * a.norm();
}

Eigen::SparseMatrix<cd> shifted(const Eigen::SparseMatrix<cd>& a, cd sigma) {
  Eigen::SparseMatrix<cd> id(a.rows(), a.cols());
  id.setIdentity();
  return a - sigma * id;
}

// LU of (A - sigma I); nudges sigma off an exact eigenvalue when the
// factorization hits a zero pivot.
void factor(Eigen::SparseLU<Eigen::SparseMatrix<cd>>& lu, const Eigen::SparseMatrix<cd>& a,
            cd sigma) {
  cd nudge = 1e-13 * std::max(1.0, std::abs(sigma)) * cd(1.0, 0.5);
  for (int attempt = 0; attempt < 6; ++attempt) {
    lu.compute(shifted(a, sigma));
    if (lu.info() == Eigen::Success) return;
    sigma += nudge;
    nudge *= 10.0;
  }
  throw Error(ErrorKind::ConvergenceFailure, "shifted factorization failed");
}
}  // namespace

void normalize_and_gauge(ComplexSamples& s) {
  double n2 = l2_norm_squared(s);
  if (!(n2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "cannot normalize a zero function");
  double inv = 1.0 / std::sqrt(n2);
  for (auto& v : s.values) v *= inv;
  gauge(s.values);
}

namespace {
constexpr int kWarmup = 4;
constexpr int kMaxWarmup = 40;
}

Eigen::VectorXcd inverse_iteration(const Eigen::SparseMatrix<cd>& a, cd& energy, int max_iter,
                                   double tol, bool rayleigh) {
  const Eigen::Index n = a.rows();
  const bool sym = is_symmetric(a);
  Eigen::SparseMatrix<cd> at = a.transpose();
  Eigen::VectorXcd x = start_vector(n);
  Eigen::VectorXcd y = x;
  Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu, lut;
  const double scale = std::max(1.0, std::abs(energy));
  cd sigma = energy;
  bool factored = false;
  cd factored_at = sigma;
  cd last_e = sigma;
  bool locked = false;
  double best = 1e300;
  int stale = 0;
  Eigen::VectorXcd best_x = x;
  cd best_e = energy;
  for (int it = 0; it < max_iter; ++it) {
    // A few fixed-shift sweeps first: a raw start vector would otherwise let
    // the Rayleigh quotient lock onto whichever mode dominates it.
    if (!factored || sigma != factored_at) {
      factor(lu, a, sigma);
      if (!sym && rayleigh) factor(lut, at, sigma);
      factored = true;
      factored_at = sigma;
    }
    x = lu.solve(x);
    x /= x.norm();
    cd e = sigma;
    if (rayleigh) {
      if (!sym) {
        y = lut.solve(y);
        y /= y.norm();
      } else {
        y = x;
      }
      cd den = y.transpose() * x;
      if (std::abs(den) > 1e-8) e = cd(y.transpose() * (a * x)) / den;
      else e = x.dot(a * x);
    }
    double r = (a * x - e * x).norm();
    if (r < 0.5 * best) stale = 0;
    else if (locked && ++stale >= 4) break;
    if (r < best) {
      best = r;
      best_x = x;
      best_e = e;
    }
    if (r <= tol * scale) break;
    if (rayleigh) {
      // Stay on the fixed shift until the Rayleigh quotient settles; strongly
      // non-normal operators show long transients before the target mode wins.
      bool settled = it + 1 >= kWarmup && std::abs(e - last_e) <= 1e-6 * scale;
      if (settled || it + 1 >= kMaxWarmup) locked = true;
      if (locked) sigma = e;
      last_e = e;
    }
  }
  energy = best_e;
  return best_x;
}

namespace {
Spectrum solve_fixed_box(const SpectralProblem& p, std::size_t n, std::size_t n_modes,
                         const SolveOptions& opts) {
  if (n_modes == 0 || n_modes > n)
    throw Error(ErrorKind::InvalidArgument, "n_modes must lie in [1, n]");
  const Grid1D grid = discretization_grid(p, n);
  const Eigen::SparseMatrix<cd> a = discretize_sparse(p, n);

  std::vector<cd> guesses;
  bool refine = false;
  if (n <= opts.dense_limit) {
    guesses = dense_eigenvalues(discretize(p, n));
  } else {
    guesses = dense_eigenvalues(discretize(p, opts.dense_limit));
    refine = true;
  }
  const std::size_t n_try = std::min(guesses.size(), refine ? n_modes + 4 : n_modes);
  guesses.resize(n_try);

  std::vector<std::pair<cd, Eigen::VectorXcd>> found;
  const double tight = 1e-13;
  for (cd e : guesses) {
    Eigen::VectorXcd v = inverse_iteration(a, e, opts.max_inverse_iterations, tight, refine);
    found.emplace_back(e, std::move(v));
  }
  if (refine) {
    // Two guesses collapsing onto one eigenvalue means the coarse solve was
    // too coarse; fall back to the full dense solve.
    bool clash = false;
    for (std::size_t i = 0; i < found.size() && !clash; ++i)
      for (std::size_t j = i + 1; j < found.size() && !clash; ++j)
        if (std::abs(found[i].first - found[j].first) <=
            1e-7 * std::max(1.0, std::abs(found[i].first)))
          clash = true;
    if (clash) {
      SolveOptions dense = opts;
      dense.dense_limit = n;
      return solve_fixed_box(p, n, n_modes, dense);
    }
    std::vector<cd> keys;
    for (auto& f : found) keys.push_back(f.first);
    sort_energies(keys);
    std::vector<std::pair<cd, Eigen::VectorXcd>> sorted;
    for (cd k : keys)
      for (auto& f : found)
        if (f.first == k && f.second.size() > 0) {
          sorted.emplace_back(f.first, std::move(f.second));
          f.second.resize(0);
          break;
        }
    found = std::move(sorted);
  }
  found.resize(n_modes);

  double emax = 0.0;
  for (auto& f : found) emax = std::max(emax, std::abs(f.first));
  const double bound = opts.residual_tol * std::max(emax, 1e-300);

  Spectrum s;
  for (std::size_t i = 0; i < found.size(); ++i) {
    const auto& [e, v] = found[i];
    double r = (a * v - e * v).norm() / v.norm();
    if (!(r < bound)) {
      std::ostringstream msg;
      msg << "eigenpair " << i + 1 << " residual " << r << " exceeds " << bound;
      throw Error(ErrorKind::ConvergenceFailure, msg.str(), i);
    }
    std::vector<cd> vals(v.data(), v.data() + v.size());
    // Discrete norm h * sum |psi|^2: boundary zeros (Dirichlet) and periodic
    // wrap (Bloch) both make this the trapezoid over the whole domain.
    double n2 = 0.0;
    for (auto c : vals) n2 += std::norm(c);
    n2 *= grid.h();
    for (auto& c : vals) c /= std::sqrt(n2);
    gauge(vals);
    EigenPair ep;
    ep.energy = e;
    ep.index = i + 1;
    ep.residual = r;
    ep.psi = ComplexSamples::on_grid(grid, std::move(vals));
    s.pairs.push_back(std::move(ep));
  }
  return s;
}

double boundary_magnitude(const Spectrum& s) {
  double m = 0.0;
  for (const auto& p : s.pairs)
    m = std::max({m, std::abs(p.psi.values.front()), std::abs(p.psi.values.back())});
  return m;
}
}  // namespace

Spectrum solve_linear_spectrum(const SpectralProblem& problem, std::size_t n, std::size_t n_modes,
                               const SolveOptions& opts) {
  problem.validate();
  if (!problem.is_linear())
    throw Error(ErrorKind::InvalidArgument, "solve_linear_spectrum needs a linear problem");
  if (problem.potential.family != Family::ShiftedHO ||
      problem.boundary.kind != BoundaryKind::Dirichlet)
    return solve_fixed_box(problem, n, n_modes, opts);

  // Truncated infinite domain: grow the box at fixed spacing.
  SpectralProblem p = problem;
  std::size_t m = n;
  for (int g = 0;; ++g) {
    Spectrum s = solve_fixed_box(p, m, n_modes, opts);
    if (boundary_magnitude(s) < opts.boundary_tol) return s;
    if (g >= opts.max_box_growth)
      throw Error(ErrorKind::ConvergenceFailure, "box growth limit reached before decay");
    const double c = 0.5 * (p.domain.x_min() + p.domain.x_max());
    const double half = 0.75 * (p.domain.x_max() - p.domain.x_min());
    p.domain = Grid1D(c - half, c + half, p.domain.size());
    m = static_cast<std::size_t>(std::llround(1.5 * static_cast<double>(m + 1))) - 1;
  }
}

}  // namespace ptwind
