#include "ptwind/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "ptwind/parallel.hpp"

namespace ptwind {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i)
    e[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) e.back() = hi;
  return e;
}

struct Sample {
  std::vector<cd> energy;
  std::vector<double> winding;
  std::vector<Eigen::VectorXcd> vec;
};

std::vector<cd> to_std(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

double safe_winding(const ComplexSamples& psi) {
  try {
    return winding_of(psi).winding;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NodeEncountered || e.kind() == ErrorKind::AliasingSuspected)
      return std::numeric_limits<double>::quiet_NaN();
    throw;
  }
}

double overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

// Box growth (ShiftedHO) can change the grid between samples; eigenvalue
// proximity stands in for the overlap then.
double match_score(const Eigen::VectorXcd& a, cd ea, const Eigen::VectorXcd& b, cd eb) {
  if (a.size() == b.size()) return overlap(a, b);
  return 1.0 / (1.0 + std::abs(ea - eb) / std::max(1.0, std::abs(ea)));
}

}  // namespace

SweepResult track_spectrum(const SpectralProblem& family, double eps_lo, double eps_hi,
                           std::size_t steps, std::size_t n_modes, const SweepOptions& opts) {
  if (steps < 2) throw Error(ErrorKind::InvalidArgument, "track_spectrum needs steps >= 2");
  if (!(eps_hi >= eps_lo)) throw Error(ErrorKind::InvalidArgument, "empty epsilon range");
  if (n_modes == 0) throw Error(ErrorKind::InvalidArgument, "n_modes must be positive");

  SweepResult r;
  r.epsilons = linspace(eps_lo, eps_hi, steps);
  const std::size_t n_solve = std::min(n_modes + 2, opts.grid_points);
  if (n_solve < n_modes) throw Error(ErrorKind::InvalidArgument, "grid too small for n_modes");

  std::vector<std::optional<Sample>> samples(steps);
  parallel_for(steps, opts.jobs, [&](std::size_t i) {
    Spectrum s;
    try {
      s = solve_linear_spectrum(family.with_epsilon(r.epsilons[i]), opts.grid_points, n_solve,
                                opts.solve);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConvergenceFailure) return;
      throw;
    }
    Sample out;
    for (const auto& p : s.pairs) {
      out.energy.push_back(p.energy);
      out.winding.push_back(safe_winding(p.psi));
      out.vec.push_back(Eigen::Map<const Eigen::VectorXcd>(
          p.psi.values.data(), static_cast<Eigen::Index>(p.psi.values.size())));
    }
    samples[i] = std::move(out);
  });

  std::size_t first = 0;
  while (first < steps && !samples[first]) ++first;
  if (first == steps)
    throw Error(ErrorKind::ConvergenceFailure, "no epsilon sample converged");

  r.tracks.assign(n_modes, std::vector<TrackPoint>(steps));
  std::vector<Eigen::VectorXcd> last(n_modes);
  std::vector<cd> last_e(n_modes);
  for (std::size_t t = 0; t < n_modes; ++t) {
    r.tracks[t][first] = {samples[first]->energy[t], samples[first]->winding[t], 1.0, false, {}};
    if (opts.keep_eigenfunctions) r.tracks[t][first].psi = to_std(samples[first]->vec[t]);
    last[t] = samples[first]->vec[t];
    last_e[t] = samples[first]->energy[t];
  }

  for (std::size_t i = first + 1; i < steps; ++i) {
    if (!samples[i]) continue;
    const Sample& s = *samples[i];
    const std::size_t m = s.energy.size();
    struct Cand {
      double score;
      std::size_t t, j;
    };
    std::vector<Cand> cands;
    bool ambiguous = false;
    for (std::size_t t = 0; t < n_modes; ++t) {
      double best = -1.0, second = -1.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double o = match_score(last[t], last_e[t], s.vec[j], s.energy[j]);
        cands.push_back({o, t, j});
        if (o > best) {
          second = best;
          best = o;
        } else if (o > second) {
          second = o;
        }
      }
      if (best - second < opts.ambiguity_tol) ambiguous = true;
    }
    if (ambiguous) r.ambiguous_samples.push_back(i);
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) { return a.score > b.score; });
    std::vector<bool> track_done(n_modes, false), mode_used(m, false);
    for (const Cand& c : cands) {
      if (track_done[c.t] || mode_used[c.j]) continue;
      track_done[c.t] = mode_used[c.j] = true;
      r.tracks[c.t][i] = {s.energy[c.j], s.winding[c.j], c.score, false, {}};
      if (opts.keep_eigenfunctions) r.tracks[c.t][i].psi = to_std(s.vec[c.j]);
      last[c.t] = s.vec[c.j];
      last_e[c.t] = s.energy[c.j];
    }
  }

  // Fill failed samples from the nearest converged neighbours.
  for (std::size_t i = 0; i < steps; ++i) {
    if (samples[i]) continue;
    std::size_t lo = i, hi = i;
    while (lo > 0 && !samples[lo]) --lo;
    while (hi + 1 < steps && !samples[hi]) ++hi;
    const bool has_lo = static_cast<bool>(samples[lo]), has_hi = static_cast<bool>(samples[hi]);
    for (auto& track : r.tracks) {
      TrackPoint p;
      if (has_lo && has_hi) {
        const double w = (r.epsilons[i] - r.epsilons[lo]) / (r.epsilons[hi] - r.epsilons[lo]);
        p.energy = (1.0 - w) * track[lo].energy + w * track[hi].energy;
        p.winding = (1.0 - w) * track[lo].winding + w * track[hi].winding;
      } else {
        p = track[has_lo ? lo : hi];
      }
      p.overlap = std::numeric_limits<double>::quiet_NaN();
      p.interpolated = true;
      p.psi.clear();
      track[i] = p;
    }
  }
  return r;
}

namespace {

struct Scan {
  std::vector<bool> split;
  std::vector<double> gap;
  double scale = 0.0;
};

Scan scan_at(const SpectralProblem& family, double eps, const ExceptionalPointOptions& opts) {
  std::vector<cd> e = dense_eigenvalues(discretize(family.with_epsilon(eps), opts.grid_points));
  e.resize(std::min(e.size(), opts.n_modes));
  Scan s;
  for (cd v : e) s.scale = std::max(s.scale, std::abs(v));
  const double floor = opts.im_tol * std::max(s.scale, 1e-300);
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    const cd d = e[i] - e[i + 1];
    const double split_im = std::abs(d.imag());
    // Conjugate pair: equal real parts and opposite imaginary parts, both
    // small against the split itself.
    const bool conj = std::abs(d.real()) <= 0.1 * split_im &&
                      std::abs(e[i].imag() + e[i + 1].imag()) <= 0.1 * split_im;
    s.split.push_back(split_im > 2.0 * floor && conj);
    s.gap.push_back(std::abs(d));
  }
  return s;
}

ExceptionalPoint refine(const SpectralProblem& family, double lo, double hi, std::size_t pair,
                        bool split_at_hi, const ExceptionalPointOptions& opts) {
  while (hi - lo > opts.bracket) {
    const double mid = 0.5 * (lo + hi);
    const Scan s = scan_at(family, mid, opts);
    const bool at_mid = pair < s.split.size() && s.split[pair];
    if (at_mid == split_at_hi)
      hi = mid;
    else
      lo = mid;
  }
  ExceptionalPoint ep;
  ep.eps_below = lo;
  ep.eps_above = hi;
  ep.epsilon_star = 0.5 * (lo + hi);
  ep.mode_pair[0] = pair;
  ep.mode_pair[1] = pair + 1;
  const Scan s = scan_at(family, ep.epsilon_star, opts);
  ep.gap_at_star = pair < s.gap.size() ? s.gap[pair] : 0.0;
  return ep;
}

void transitions(const SpectralProblem& family, const std::vector<double>& eps,
                 const std::vector<Scan>& scans, const ExceptionalPointOptions& opts,
                 std::vector<ExceptionalPoint>& out) {
  for (std::size_t k = 0; k + 1 < scans.size(); ++k) {
    const std::size_t pairs = std::min(scans[k].split.size(), scans[k + 1].split.size());
    for (std::size_t i = 0; i < pairs; ++i)
      if (scans[k].split[i] != scans[k + 1].split[i])
        out.push_back(refine(family, eps[k], eps[k + 1], i, scans[k + 1].split[i], opts));
  }
}

}  // namespace

std::vector<ExceptionalPoint> detect_exceptional_points(const SpectralProblem& family,
                                                        double eps_lo, double eps_hi,
                                                        std::size_t coarse_steps, double gap_tol,
                                                        const ExceptionalPointOptions& opts) {
  if (!(gap_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "gap_tol must be positive");
  if (coarse_steps < 2) throw Error(ErrorKind::InvalidArgument, "coarse_steps must be >= 2");
  if (!(eps_hi > eps_lo)) throw Error(ErrorKind::InvalidArgument, "empty epsilon range");
  if (opts.n_modes < 2) throw Error(ErrorKind::InvalidArgument, "need at least two modes");

  const std::vector<double> eps = linspace(eps_lo, eps_hi, coarse_steps);
  std::vector<Scan> scans(coarse_steps);
  parallel_for(coarse_steps, opts.jobs,
               [&](std::size_t k) { scans[k] = scan_at(family, eps[k], opts); });

  std::vector<ExceptionalPoint> out;
  transitions(family, eps, scans, opts, out);

  // Shallow gap minima with no split change at the coarse resolution.
  for (std::size_t k = 1; k + 1 < coarse_steps; ++k) {
    const std::size_t pairs = scans[k].gap.size();
    for (std::size_t i = 0; i < pairs; ++i) {
      const double g = scans[k].gap[i];
      if (!(g < scans[k - 1].gap[i] && g <= scans[k + 1].gap[i])) continue;
      if (!(g < gap_tol * scans[k].scale)) continue;
      if (scans[k - 1].split[i] != scans[k].split[i] || scans[k].split[i] != scans[k + 1].split[i])
        continue;
      const std::vector<double> fine = linspace(eps[k - 1], eps[k + 1], 21);
      std::vector<Scan> fs(fine.size());
      parallel_for(fine.size(), opts.jobs,
                   [&](std::size_t j) { fs[j] = scan_at(family, fine[j], opts); });
      transitions(family, fine, fs, opts, out);
    }
  }

  std::sort(out.begin(), out.end(), [](const ExceptionalPoint& a, const ExceptionalPoint& b) {
    return a.epsilon_star < b.epsilon_star ||
           (a.epsilon_star == b.epsilon_star && a.mode_pair[0] < b.mode_pair[0]);
  });
  std::vector<ExceptionalPoint> unique;
  for (const auto& ep : out) {
    if (!unique.empty() && unique.back().mode_pair[0] == ep.mode_pair[0] &&
        std::abs(unique.back().epsilon_star - ep.epsilon_star) <= 10.0 * opts.bracket)
      continue;
    unique.push_back(ep);
  }
  return unique;
}

int degree_of_symmetry_breaking(const std::vector<cd>& energies, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  int count = 0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (std::abs(energies[i].imag()) > tol) {
      ++count;
      continue;
    }
    for (std::size_t j = 0; j < energies.size(); ++j)
      if (j != i && std::abs(energies[j].imag()) <= tol &&
          std::abs(energies[j].real() - energies[i].real()) <= tol) {
        ++count;
        break;
      }
  }
  return count;
}

int degree_of_symmetry_breaking(const Spectrum& spectrum, double tol) {
  return degree_of_symmetry_breaking(spectrum.energies(), tol);
}

Conjugacy check_pt_conjugacy(const ComplexSamples& psi1, const ComplexSamples& psi2, double tol,
                             double x0) {
  const std::size_t n = psi1.size();
  if (n == 0 || psi2.size() != n || psi1.points.size() != n || psi2.points.size() != n)
    throw Error(ErrorKind::InvalidArgument, "sample sets differ in length");
  double xmax = std::abs(x0);
  for (std::size_t j = 0; j < n; ++j) xmax = std::max(xmax, std::abs(psi1.points[j]));
  const double slack = 1e-12 * std::max(1.0, xmax);
  for (std::size_t j = 0; j < n; ++j) {
    const cd a = psi1.points[j], b = psi2.points[j], m = psi1.points[n - 1 - j];
    if (std::abs(a.imag()) > slack || std::abs(a - b) > slack)
      throw Error(ErrorKind::AsymmetricGrid, "samples are not on one real grid", j);
    if (std::abs(a.real() + m.real() - 2.0 * x0) > slack)
      throw Error(ErrorKind::AsymmetricGrid, "grid is not mirrored about the centre", j);
  }
  cd num = 0.0;
  double den = 0.0, norm1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cd ref = std::conj(psi2.values[n - 1 - j]);
    num += std::conj(ref) * psi1.values[j];
    den += std::norm(ref);
    norm1 += std::norm(psi1.values[j]);
  }
  Conjugacy out;
  out.c = den > 0.0 ? num / den : cd(0.0);
  double res = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    res += std::norm(psi1.values[j] - out.c * std::conj(psi2.values[n - 1 - j]));
  out.residual = norm1 > 0.0 ? std::sqrt(res / norm1) : std::sqrt(res);
  out.holds = out.residual < tol;
  return out;
}

std::string sweep_table_csv(const SweepResult& r, SweepColumn column) {
  std::ostringstream os;
  os << "epsilon";
  for (std::size_t t = 0; t < r.tracks.size(); ++t) os << ",mode" << t + 1;
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.16e", r.epsilons[i]);
    os << buf;
    for (const auto& track : r.tracks) {
      const TrackPoint& p = track[i];
      const double v = column == SweepColumn::RealEnergy   ? p.energy.real()
                       : column == SweepColumn::ImagEnergy ? p.energy.imag()
                                                           : p.winding;
      std::snprintf(buf, sizeof buf, "%.16e", v);
      os << ',' << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace ptwind
