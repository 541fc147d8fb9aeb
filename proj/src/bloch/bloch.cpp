#include "ptwind/bloch.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ptwind {

namespace {

// Wavenumbers k + 2m with m in [first, first + n), centred so that
// |k + 2m| is smallest in the middle.
int first_wave(std::size_t n_waves) { return -static_cast<int>(n_waves / 2); }

// V = 2 + (1 + 2 eps) e^{2ix} + (1 - 2 eps) e^{-2ix}: e^{2ix} raises m.
Eigen::MatrixXcd fourier_matrix(double eps, double k, std::size_t n_waves) {
  const auto n = static_cast<Eigen::Index>(n_waves);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  const int m0 = first_wave(n_waves);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double q = k + 2.0 * (m0 + static_cast<int>(i));
    h(i, i) = q * q + 2.0;
    if (i > 0) {
      h(i, i - 1) = 1.0 + 2.0 * eps;
      h(i - 1, i) = 1.0 - 2.0 * eps;
    }
  }
  return h;
}

void check_args(double k, std::size_t n_waves) {
  if (!(k >= -1.0 && k <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "Bloch wavenumber outside [-1, 1]");
  if (n_waves < 8) throw Error(ErrorKind::InvalidArgument, "need at least 8 plane waves");
}

cd fourier_value(const std::vector<cd>& c, int m0, double shift, double x) {
  cd s = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j)
    s += c[j] * std::exp(cd(0.0, (shift + 2.0 * (m0 + static_cast<int>(j))) * x));
  return s;
}

double safe_adaptive(const std::function<cd(double)>& f) {
  try {
    return adaptive_winding(f, 0.0, kPi).winding;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NodeEncountered || e.kind() == ErrorKind::AliasingSuspected)
      return std::numeric_limits<double>::quiet_NaN();
    throw;
  }
}

}  // namespace

std::vector<cd> bloch_energies(double epsilon, double k, std::size_t n_waves) {
  check_args(k, n_waves);
  return dense_eigenvalues(fourier_matrix(epsilon, k, n_waves));
}

std::vector<BandPoint> bloch_bands(double epsilon, double k, std::size_t n_modes,
                                   std::size_t n_waves, const BlochOptions& opts) {
  check_args(k, n_waves);
  if (n_modes == 0 || n_modes > n_waves / 2)
    throw Error(ErrorKind::InvalidArgument, "n_modes must lie in [1, n_waves / 2]");
  if (opts.samples < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 samples");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(fourier_matrix(epsilon, k, n_waves), true);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "plane-wave eigensolver failed");
  const Eigen::VectorXcd& w = es.eigenvalues();

  std::vector<cd> sorted(w.data(), w.data() + w.size());
  sort_energies(sorted);
  std::vector<bool> used(static_cast<std::size_t>(w.size()), false);

  const int m0 = first_wave(n_waves);
  const Grid1D grid(0.0, kPi, opts.samples);
  std::vector<BandPoint> out;
  for (std::size_t b = 0; b < n_modes; ++b) {
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (!used[static_cast<std::size_t>(i)] && w(i) == sorted[b]) {
        col = i;
        used[static_cast<std::size_t>(i)] = true;
        break;
      }
    const Eigen::VectorXcd v = es.eigenvectors().col(col);
    std::vector<cd> c(v.data(), v.data() + v.size());

    double cmax = 0.0;
    for (cd x : c) cmax = std::max(cmax, std::abs(x));
    if (std::abs(c.front()) > opts.tail_tol * cmax || std::abs(c.back()) > opts.tail_tol * cmax) {
      std::ostringstream msg;
      msg << "band " << b + 1 << " not resolved by " << n_waves << " plane waves";
      throw Error(ErrorKind::ConvergenceFailure, msg.str(), b);
    }

    // Unit norm over the period: integral |u|^2 = pi * sum |c|^2.
    double n2 = 0.0;
    for (cd x : c) n2 += std::norm(x);
    for (cd& x : c) x /= std::sqrt(kPi * n2);

    std::vector<cd> u(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) u[j] = fourier_value(c, m0, 0.0, grid.x(j));
    std::size_t jmax = 0;
    for (std::size_t j = 1; j < u.size(); ++j)
      if (std::abs(u[j]) > std::abs(u[jmax])) jmax = j;
    const cd phase = std::abs(u[jmax]) > 0.0 ? std::conj(u[jmax]) / std::abs(u[jmax]) : cd(1.0);
    for (cd& x : u) x *= phase;
    for (cd& x : c) x *= phase;

    BandPoint p;
    p.k = k;
    p.band_index = b + 1;
    p.energy = sorted[b];
    p.u = ComplexSamples::on_grid(grid, std::move(u));
    p.winding = safe_adaptive([&](double x) { return fourier_value(c, m0, k, x); });
    p.winding_u = safe_adaptive([&](double x) { return fourier_value(c, m0, 0.0, x); });
    p.coefficients = std::move(c);
    p.first_wave = m0;
    out.push_back(std::move(p));
  }
  return out;
}

double band_edge_breaking(double eps_lo, double eps_hi, std::size_t n_scan, double k_edge,
                          std::size_t n_modes, std::size_t n_waves, double im_tol) {
  if (n_scan < 100) throw Error(ErrorKind::InvalidArgument, "band-edge scan needs >= 100 points");
  if (!(eps_hi > eps_lo)) throw Error(ErrorKind::InvalidArgument, "empty epsilon range");
  auto broken = [&](double eps) {
    std::vector<cd> e = bloch_energies(eps, k_edge, n_waves);
    e.resize(std::min(e.size(), n_modes));
    double scale = 0.0;
    for (cd v : e) scale = std::max(scale, std::abs(v));
    for (cd v : e)
      if (std::abs(v.imag()) > im_tol * scale) return true;
    return false;
  };
  double prev = eps_lo;
  if (broken(eps_lo)) return eps_lo;
  for (std::size_t i = 1; i < n_scan; ++i) {
    const double eps = eps_lo + (eps_hi - eps_lo) * static_cast<double>(i) /
                                    static_cast<double>(n_scan - 1);
    if (broken(eps)) {
      double lo = prev, hi = eps;
      while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (broken(mid) ? hi : lo) = mid;
      }
      return hi;
    }
    prev = eps;
  }
  throw Error(ErrorKind::NoneFound, "band-edge energies stay real over the scan");
}

namespace {
ComplexSamples bessel_on_grid(double order, double modulus, double arg0, const Grid1D& grid) {
  std::vector<cd> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    if (modulus == 0.0) {
      v[j] = bessel_j(order, 0.0);
      continue;
    }
    const cd z = std::polar(modulus, arg0 + x);
    const cd log_half = cd(std::log(modulus / 2.0), arg0 + x);
    v[j] = bessel_j(order, z, log_half);
  }
  return ComplexSamples::on_grid(grid, std::move(v));
}
}  // namespace

ComplexSamples bessel_mode(double k, double epsilon, const Grid1D& grid) {
  if (epsilon < 0.0) throw Error(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
  return bessel_on_grid(k, std::sqrt(epsilon / 2.0), kPi / 2.0, grid);
}

ComplexSamples band_edge_exact_mode(double nu, const Grid1D& grid) {
  return bessel_on_grid(nu, std::sqrt(2.0), 0.0, grid);
}

std::string band_csv(const std::vector<BandPoint>& bands) {
  std::ostringstream os;
  os << "k,band,re_e,im_e,winding\n";
  char buf[160];
  for (const auto& b : bands) {
    std::snprintf(buf, sizeof buf, "%.16e,%zu,%.16e,%.16e,%.16e\n", b.k, b.band_index,
                  b.energy.real(), b.energy.imag(), b.winding);
    os << buf;
  }
  return os.str();
}

}  // namespace ptwind
