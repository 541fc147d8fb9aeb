#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ptwind/phase.hpp"

namespace ptwind {

namespace {
double principal_increment(cd from, cd to) { return std::arg(to * std::conj(from)); }
}  // namespace

PhaseProfile unwrap_phase(const ComplexSamples& psi, const PhaseOptions& opts) {
  if (!(opts.node_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "node_tol must be positive");
  const std::size_t n = psi.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty samples");
  PhaseProfile p;
  p.points = psi.points;
  p.theta.resize(n);
  p.magnitude.resize(n);
  double peak = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    p.magnitude[j] = std::abs(psi.values[j]);
    peak = std::max(peak, p.magnitude[j]);
  }
  const double tol = opts.relative_tol ? opts.node_tol * peak : opts.node_tol;
  for (std::size_t j = 0; j < n; ++j)
    if (!(p.magnitude[j] >= tol) || p.magnitude[j] == 0.0)
      throw Error(ErrorKind::NodeEncountered, "phase undefined at a node", j);
  p.theta[0] = std::arg(psi.values[0]);
  for (std::size_t j = 1; j < n; ++j) {
    double d = principal_increment(psi.values[j - 1], psi.values[j]);
    if (std::abs(d) > opts.alias_limit)
      throw Error(ErrorKind::AliasingSuspected, "phase step too large; refine the grid", j);
    p.theta[j] = p.theta[j - 1] + d;
  }
  return p;
}

WindingReport winding_number(const PhaseProfile& profile) {
  WindingReport r;
  r.winding = profile.theta.back() - profile.theta.front();
  r.min_magnitude = *std::min_element(profile.magnitude.begin(), profile.magnitude.end());
  for (std::size_t j = 1; j < profile.theta.size(); ++j)
    r.aliasing_margin = std::max(r.aliasing_margin, std::abs(profile.theta[j] - profile.theta[j - 1]));
  return r;
}

WindingReport adaptive_winding(const std::function<cd(double)>& f, double a, double b,
                               const AdaptiveWindingOptions& opts) {
  if (!(a < b) || opts.n_initial < 2) throw Error(ErrorKind::InvalidArgument, "bad interval");
  const std::size_t n = opts.n_initial;
  std::vector<double> xs(n);
  std::vector<cd> vs(n);
  double peak = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    xs[j] = (j + 1 == n) ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(n - 1);
    vs[j] = f(xs[j]);
    peak = std::max(peak, std::abs(vs[j]));
  }
  const double tol = opts.phase.relative_tol ? opts.phase.node_tol * peak : opts.phase.node_tol;
  WindingReport r;
  r.min_magnitude = peak;
  auto check = [&](cd v, std::size_t idx) {
    double m = std::abs(v);
    if (!(m >= tol) || m == 0.0) throw Error(ErrorKind::NodeEncountered, "node on path", idx);
    r.min_magnitude = std::min(r.min_magnitude, m);
  };
  for (std::size_t j = 0; j < n; ++j) check(vs[j], j);

  // Explicit stack keeps the bisection order deterministic and bounded.
  struct Span {
    double x0, x1;
    cd v0, v1;
  };
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    std::vector<Span> stack{{xs[j], xs[j + 1], vs[j], vs[j + 1]}};
    while (!stack.empty()) {
      Span s = stack.back();
      stack.pop_back();
      double d = principal_increment(s.v0, s.v1);
      if (std::abs(d) > opts.split_above && s.x1 - s.x0 > opts.min_width) {
        double xm = 0.5 * (s.x0 + s.x1);
        cd vm = f(xm);
        check(vm, j);
        // Right half pushed first so the left half is consumed first.
        stack.push_back({xm, s.x1, vm, s.v1});
        stack.push_back({s.x0, xm, s.v0, vm});
        continue;
      }
      if (std::abs(d) > opts.phase.alias_limit)
        throw Error(ErrorKind::AliasingSuspected, "phase jump unresolved at minimum width", j);
      total += d;
      r.aliasing_margin = std::max(r.aliasing_margin, std::abs(d));
    }
  }
  r.winding = total;
  return r;
}

std::vector<double> find_real_nodes(const std::vector<double>& x, const std::vector<double>& v,
                                    double tol) {
  if (x.size() != v.size()) throw Error(ErrorKind::InvalidArgument, "size mismatch");
  std::vector<double> nodes;
  std::ptrdiff_t last = -1;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (std::abs(v[j]) <= tol) continue;
    if (last >= 0 && (v[last] > 0.0) != (v[j] > 0.0)) {
      double xa = x[last], xb = x[j], va = v[last], vb = v[j];
      nodes.push_back(xa + (xb - xa) * va / (va - vb));
    }
    last = static_cast<std::ptrdiff_t>(j);
  }
  return nodes;
}

bool check_interlacing(const std::vector<double>& lo, const std::vector<double>& hi) {
  for (std::size_t i = 0; i + 1 < hi.size(); ++i) {
    auto inside = std::count_if(lo.begin(), lo.end(),
                                [&](double t) { return t > hi[i] && t < hi[i + 1]; });
    if (inside != 1) return false;
  }
  return true;
}

WindingReport relative_winding(const ComplexSamples& a, const ComplexSamples& b,
                               const PhaseOptions& opts) {
  if (!(a.grid == b.grid) || a.size() != b.size())
    throw Error(ErrorKind::InvalidArgument, "relative winding needs identical grids");
  ComplexSamples d = a;
  for (std::size_t j = 0; j < d.size(); ++j) d.values[j] = a.values[j] - b.values[j];
  // An exact crossing makes the difference vanish; report it as a node even
  // under a relative tolerance.
  for (std::size_t j = 0; j < d.size(); ++j)
    if (d.values[j] == cd(0.0)) throw Error(ErrorKind::NodeEncountered, "curves intersect", j);
  return winding_of(d, opts);
}

std::string phase_csv(const PhaseProfile& p) {
  std::string out = "x,theta\n";
  char buf[96];
  for (std::size_t j = 0; j < p.theta.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.16e,%.16e\n", p.points[j].real(), p.theta[j]);
    out += buf;
  }
  return out;
}

}  // namespace ptwind
