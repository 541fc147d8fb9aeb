#include "ptwind/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ptwind/parallel.hpp"

namespace ptwind {

namespace {

// Dormand-Prince 5(4) tableau and Hairer's continuous extension.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

cd dense(const IvpStep& s, double x) {
  const double t = (x - s.x0) / s.h, u = 1.0 - t;
  return s.r[0] + t * (s.r[1] + u * (s.r[2] + t * (s.r[3] + u * s.r[4])));
}

// Integrates from 0 to x_end (either sign), appending accepted steps.
void sweep(const CosineIvp& p, double x_end, const IvpOptions& opts, std::vector<IvpStep>& out,
           double& max_err) {
  if (x_end == 0.0) return;
  const double dir = x_end > 0.0 ? 1.0 : -1.0;
  double x = 0.0;
  cd y = p.start;
  cd k1 = cosine_rhs(p, x, y);
  double h = dir * std::min(1e-3, opts.max_step);
  while (dir * (x_end - x) > 0.0) {
    if (dir * (x + h - x_end) > 0.0) h = x_end - x;
    const cd k2 = cosine_rhs(p, x + c2 * h, y + h * a21 * k1);
    const cd k3 = cosine_rhs(p, x + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const cd k4 = cosine_rhs(p, x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const cd k5 = cosine_rhs(p, x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const cd k6 =
        cosine_rhs(p, x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const cd y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const cd k7 = cosine_rhs(p, x + h, y1);
    const cd e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double sc = opts.atol + opts.rtol * std::max(std::abs(y), std::abs(y1));
    double err = std::abs(e) / sc;
    if (!std::isfinite(err) || !std::isfinite(std::abs(y1))) err = 1e10;

    if (err <= 1.0) {
      IvpStep s;
      s.x0 = x;
      s.h = h;
      const cd diff = y1 - y;
      const cd bspl = h * k1 - diff;
      s.r[0] = y;
      s.r[1] = diff;
      s.r[2] = bspl;
      s.r[3] = diff - h * k7 - bspl;
      s.r[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      out.push_back(s);
      max_err = std::max(max_err, err);
      // Land exactly on the end point.
      x = (dir * (x + h - x_end) >= 0.0) ? x_end : x + h;
      y = y1;
      k1 = k7;
    }
    const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = dir * std::min(std::abs(h) * (err <= 1.0 ? fac : std::min(fac, 1.0)), opts.max_step);
    if (std::abs(h) < opts.min_step && dir * (x_end - x) > 0.0) {
      std::ostringstream msg;
      msg << "step size underflow at x = " << x;
      throw Error(ErrorKind::StepUnderflow, msg.str());
    }
  }
}

const IvpStep& locate(const std::vector<IvpStep>& steps, double x) {
  // Steps run outward; find the first whose far end reaches |x|.
  const double ax = std::abs(x);
  auto it = std::lower_bound(steps.begin(), steps.end(), ax, [](const IvpStep& s, double v) {
    return std::abs(s.x0 + s.h) < v;
  });
  if (it == steps.end()) --it;
  return *it;
}

}  // namespace

cd cosine_rhs(const CosineIvp& p, double x, cd y) {
  return std::cos(kPi * (x - p.shift) * (y - p.level));
}

cd Trajectory::at(double x) const {
  if (x >= 0.0) {
    if (forward.empty()) return problem.start;
    return dense(locate(forward, x), x);
  }
  if (backward.empty()) return problem.start;
  return dense(locate(backward, x), x);
}

cd Trajectory::slope_at(double x) const { return cosine_rhs(problem, x, at(x)); }

Trajectory integrate_cosine(const CosineIvp& problem, double x_lo, double x_hi,
                            const IvpOptions& opts) {
  if (!(x_lo <= 0.0 && x_hi >= 0.0 && x_lo < x_hi))
    throw Error(ErrorKind::InvalidArgument, "window must contain the origin");
  if (!(opts.rtol > 0.0 && opts.atol > 0.0) || opts.samples < 2)
    throw Error(ErrorKind::InvalidArgument, "bad integrator options");
  Trajectory t;
  t.problem = problem;
  sweep(problem, x_hi, opts, t.forward, t.max_error);
  sweep(problem, x_lo, opts, t.backward, t.max_error);
  t.steps = t.forward.size() + t.backward.size();
  t.grid = Grid1D(x_lo, x_hi, opts.samples);
  t.y.resize(opts.samples);
  t.slope.resize(opts.samples);
  for (std::size_t j = 0; j < opts.samples; ++j) {
    const double x = t.grid.x(j);
    t.y[j] = x == 0.0 ? problem.start : t.at(x);
    t.slope[j] = cosine_rhs(problem, x, t.y[j]);
  }
  return t;
}

Trajectory integrate_cosine_ivp(cd a, double b, double x_max, double tol) {
  if (!(x_max > 0.0) || !(tol > 0.0))
    throw Error(ErrorKind::InvalidArgument, "need x_max > 0 and tol > 0");
  IvpOptions o;
  o.rtol = o.atol = tol;
  const CosineIvp p = b == 0.0 ? CosineIvp{a, 0.0, 0.0} : CosineIvp{0.0, a, b};
  return integrate_cosine(p, 0.0, x_max, o);
}

namespace {
std::size_t count_sign_changes(const std::vector<double>& v, double band) {
  std::size_t count = 0;
  int state = 0;
  for (double d : v) {
    int s = 0;
    if (d > band) s = 1;
    else if (d < -band) s = -1;
    else continue;
    if (state != 0 && s != state) ++count;
    state = s;
  }
  return count;
}
}  // namespace

std::size_t count_extrema(const Trajectory& traj, double band) {
  std::vector<double> v(traj.slope.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = traj.slope[j].real();
  return count_sign_changes(v, band);
}

std::size_t count_extrema(const std::vector<double>& y, double band) {
  if (y.size() < 3) return 0;
  std::vector<double> d(y.size() - 1);
  double m = 0.0;
  for (std::size_t j = 0; j + 1 < y.size(); ++j) {
    d[j] = y[j + 1] - y[j];
    m = std::max(m, std::abs(d[j]));
  }
  return count_sign_changes(d, band * m);
}

WindingReport ivp_winding(const Trajectory& traj) {
  return adaptive_winding([&](double x) { return traj.slope_at(x); }, traj.grid.x_min(),
                          traj.grid.x_max());
}

WindingReport ivp_winding(const Trajectory& traj, const Trajectory& reference) {
  if (!(traj.grid == reference.grid))
    throw Error(ErrorKind::InvalidArgument, "trajectories on different grids");
  std::vector<cd> d(traj.y.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = traj.y[j] - reference.y[j];
  return winding_of(ComplexSamples::on_grid(traj.grid, std::move(d)));
}

int winding_class(double w, double slack) {
  if (!std::isfinite(w)) return 0;
  const double q = w / kPi;
  // Nearest odd integer.
  const double k = 2.0 * std::floor(q / 2.0) + 1.0;
  return std::abs(q - k) <= slack ? static_cast<int>(k) : 0;
}

WindingMap classify_region(double re_lo, double re_hi, double im_lo, double im_hi, std::size_t n_re,
                           std::size_t n_im, double x_max, const IvpOptions& opts, int jobs) {
  if (n_re < 2 || n_im < 2) throw Error(ErrorKind::InvalidArgument, "map needs at least 2x2 cells");
  if (!(x_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "x_max must be positive");
  WindingMap m;
  m.x_max = x_max;
  const Grid1D gr(re_lo, re_hi, n_re), gi(im_lo, im_hi, n_im);
  m.re = gr.points();
  m.im = gi.points();
  const std::size_t cells = n_re * n_im;
  m.winding.assign(cells, std::numeric_limits<double>::quiet_NaN());
  m.cls.assign(cells, 0);
  m.status.assign(cells, "ok");
  parallel_for(cells, jobs, [&](std::size_t c) {
    const cd a(m.re[c % n_re], m.im[c / n_re]);
    // Real initial values give real slopes that touch zero; no winding.
    if (std::abs(a.imag()) <= 1e-12 * std::max(1.0, std::abs(im_hi - im_lo))) {
      m.status[c] = "real-axis";
      return;
    }
    try {
      const Trajectory t = integrate_cosine(CosineIvp{a, 0.0, 0.0}, 0.0, x_max, opts);
      m.winding[c] = ivp_winding(t).winding;
      m.cls[c] = winding_class(m.winding[c]);
      if (m.cls[c] == 0) m.status[c] = "near-separatrix";
    } catch (const Error& e) {
      m.status[c] = to_string(e.kind());
    }
  });
  return m;
}

double class_change_fraction(const WindingMap& a, const WindingMap& b) {
  if (a.re != b.re || a.im != b.im) throw Error(ErrorKind::InvalidArgument, "maps on different grids");
  std::size_t changed = 0;
  for (std::size_t c = 0; c < a.cls.size(); ++c) changed += a.cls[c] != b.cls[c];
  return static_cast<double>(changed) / static_cast<double>(a.cls.size());
}

std::string winding_map_csv(const WindingMap& map) {
  std::ostringstream os;
  os << "re_a,im_a,winding,class,status\n";
  char buf[160];
  for (std::size_t i = 0; i < map.im.size(); ++i)
    for (std::size_t r = 0; r < map.re.size(); ++r) {
      const std::size_t c = map.index(r, i);
      std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,", map.re[r], map.im[i], map.winding[c]);
      os << buf;
      if (map.cls[c] == 0) os << "flagged";
      else os << map.cls[c];
      os << ',' << map.status[c] << '\n';
    }
  return os.str();
}

std::vector<ShiftedMember> shifted_family(double a, int n_lo, int n_hi, double x_lo, double x_hi,
                                          const ShiftedFamilyOptions& opts) {
  if (a == 0.0) throw Error(ErrorKind::InvalidArgument, "shifted family needs a != 0");
  if (n_hi < n_lo) throw Error(ErrorKind::InvalidArgument, "empty n range");
  std::vector<ShiftedMember> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    ShiftedMember m;
    m.n = n;
    m.b = 2.0 * n / a;
    m.real = integrate_cosine(CosineIvp{0.0, a, m.b}, x_lo, x_hi, opts.ivp);
    m.slope_defect = std::abs(cosine_rhs(m.real.problem, 0.0, 0.0) - 1.0);
    m.extrema = count_extrema(m.real);
    m.perturbed =
        integrate_cosine(CosineIvp{0.0, a, cd(m.b, opts.perturbation)}, x_lo, x_hi, opts.ivp);
    m.winding = ivp_winding(m.perturbed).winding;
    out.push_back(std::move(m));
  }
  return out;
}

PairTrajectories pairing_trajectories(double a, double x_lo, double x_hi, const IvpOptions& opts) {
  if (a == 0.0) throw Error(ErrorKind::InvalidArgument, "pairing needs a != 0");
  return {integrate_cosine(CosineIvp{0.0, a, 2.0 / a}, x_lo, x_hi, opts),
          integrate_cosine(CosineIvp{0.0, a, -2.0 / a}, x_lo, x_hi, opts)};
}

namespace {
double shifted_misfit(const Trajectory& p, const Trajectory& m, double s, double lo, double hi) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < p.grid.size(); ++j) {
    const double x = p.grid.x(j);
    if (x - s < lo || x - s > hi) continue;
    num += std::norm(p.y[j] - m.at(x - s));
    den += std::norm(p.y[j] - p.problem.level);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}
// Same misfit for a shift of k whole samples, without dense evaluation.
double index_misfit(const Trajectory& p, const Trajectory& m, long k) {
  double num = 0.0, den = 0.0;
  const auto n = static_cast<long>(p.grid.size());
  for (long j = std::max(0L, k); j < std::min(n, n + k); ++j) {
    num += std::norm(p.y[static_cast<std::size_t>(j)] - m.y[static_cast<std::size_t>(j - k)]);
    den += std::norm(p.y[static_cast<std::size_t>(j)] - p.problem.level);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}
}  // namespace

PairingResult pairing_offset(const Trajectory& plus, const Trajectory& minus, double max_shift) {
  if (!(plus.grid == minus.grid))
    throw Error(ErrorKind::InvalidArgument, "trajectories on different grids");
  const double lo = plus.grid.x_min(), hi = plus.grid.x_max(), w = hi - lo, h = plus.grid.h();
  if (max_shift < 0.0) max_shift = 0.25 * w;
  if (max_shift > 0.5 * w || plus.grid.size() < 16)
    throw Error(ErrorKind::WindowTooSmall, "window too small for the requested shift range");
  const auto steps = static_cast<long>(std::floor(max_shift / h));
  double best_s = 0.0, best = index_misfit(plus, minus, 0);
  for (long k = -steps; k <= steps; ++k) {
    const double s = static_cast<double>(k) * h;
    const double f = index_misfit(plus, minus, k);
    if (f < best) {
      best = f;
      best_s = s;
    }
  }
  // Golden-section polish inside one grid cell either side.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::max(best_s - h, -max_shift), b = std::min(best_s + h, max_shift);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = shifted_misfit(plus, minus, x1, lo, hi), f2 = shifted_misfit(plus, minus, x2, lo, hi);
  for (int it = 0; it < 60 && b - a > 1e-12 * std::max(1.0, w); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = shifted_misfit(plus, minus, x1, lo, hi);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = shifted_misfit(plus, minus, x2, lo, hi);
    }
  }
  const double s = f1 < f2 ? x1 : x2;
  const double f = std::min(f1, f2);
  if (f < best) {
    best = f;
    best_s = s;
  }
  return {best_s, best};
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "x,re_y,im_y\n";
  char buf[128];
  for (std::size_t j = 0; j < traj.y.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e\n", traj.grid.x(j), traj.y[j].real(),
                  traj.y[j].imag());
    os << buf;
  }
  return os.str();
}

}  // namespace ptwind
