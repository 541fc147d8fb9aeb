#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ptwind/bloch.hpp"
#include "ptwind/ivp.hpp"
#include "ptwind/multidim.hpp"
#include "ptwind/nls.hpp"
#include "ptwind/parallel.hpp"
#include "ptwind/sweep.hpp"

namespace ptwind::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

std::size_t count_param(const Params& p, const std::string& name, long min) {
  const long v = p.integer(name);
  if (v < min) invalid(flag_name(name) + ": must be at least " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

// Serializes NaN as null so the summary stays valid JSON.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string row(std::initializer_list<double> vals) {
  std::string s;
  for (double v : vals) {
    if (!s.empty()) s += ',';
    s += fmt(v);
  }
  return s;
}

// "3", "1:6" (inclusive) or "1,3,5"; 1-based.
std::vector<std::size_t> parse_modes(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  auto one = [&](const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || v < 1) invalid(what + ": modes are positive integers");
    return static_cast<std::size_t>(v);
  };
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::size_t lo = one(text.substr(0, colon)), hi = one(text.substr(colon + 1));
    if (hi < lo) invalid(what + ": empty mode range");
    for (std::size_t m = lo; m <= hi; ++m) out.push_back(m);
    return out;
  }
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(one(item));
  if (out.empty()) invalid(what + ": no modes");
  return out;
}

PotentialSpec potential_from(const Params& p) {
  const Family f = family_from_name(p.str("potential"));
  if (f == Family::Custom) invalid("--potential: custom potentials are available through the library only");
  PotentialSpec v = PotentialSpec::make(f, p.num("epsilon"));
  v.half_width = p.num("half_width");
  return v;
}

std::pair<double, double> default_domain(const PotentialSpec& v) {
  switch (v.family) {
    case Family::SquareWell:
    case Family::PeriodicPT: return {0.0, kPi};
    case Family::ShiftedHO: return {-6.0, 6.0};
    case Family::CubicPT: return {-v.half_width, v.half_width};
    default: return {-kPi / 2, kPi / 2};
  }
}

std::pair<double, double> domain_from(const Params& p, const PotentialSpec& v) {
  const std::string d = p.str("domain");
  if (d == "auto") return default_domain(v);
  const Range r = parse_range(d, "--domain", false);
  if (r.count != 0) invalid("--domain: expected lo:hi");
  return {r.lo, r.hi};
}

SpectralProblem problem_from(const Params& p) {
  SpectralProblem prob;
  prob.potential = potential_from(p);
  const auto [a, b] = domain_from(p, prob.potential);
  prob.domain = Grid1D(a, b, 101);
  const std::string bc = p.str("boundary");
  if (bc == "dirichlet") prob.boundary = Boundary::dirichlet();
  else if (bc == "bloch") prob.boundary = Boundary::bloch(p.num("k"));
  else invalid("--boundary: expected dirichlet or bloch");
  prob.validate();
  return prob;
}

std::vector<ParamSpec> problem_params(const std::string& potential, double eps) {
  return {{"potential", potential, "square-well | shifted-ho | cubic-pt | linear-pt | periodic-pt | xsinx"},
          {"epsilon", eps, "coupling of the potential"},
          {"half_width", 1.0, "cubic-pt box half-width L"},
          {"domain", "auto", "lo:hi (pi multiples allowed) or auto for the family default"},
          {"boundary", "dirichlet", "dirichlet | bloch"},
          {"k", 0.0, "Bloch wavenumber in [-1, 1)"}};
}

template <class... Lists>
std::vector<ParamSpec> join(std::vector<ParamSpec> a, Lists... more) {
  (a.insert(a.end(), more.begin(), more.end()), ...);
  return a;
}

double winding_or_nan(const ComplexSamples& s, std::string& status, const PhaseOptions& o = {}) {
  try {
    status = "ok";
    return winding_of(s, o).winding;
  } catch (const Error& e) {
    status = to_string(e.kind());
    return kNaN;
  }
}

double max_abs(const std::vector<cd>& v) {
  double m = 0.0;
  for (cd x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string curve_csv(const ComplexSamples& s) {
  std::string out = "x,re,im\n";
  for (std::size_t j = 0; j < s.size(); ++j)
    out += row({s.points[j].real(), s.values[j].real(), s.values[j].imag()}) + '\n';
  return out;
}

// ---------------------------------------------------------------- spectrum

Output run_spectrum(const Params& p, int) {
  const SpectralProblem prob = problem_from(p);
  const std::size_t n = count_param(p, "grid", 16), modes = count_param(p, "modes", 1);
  const Spectrum s = solve_linear_spectrum(prob, n, modes);
  Output out;
  std::string table = "mode,re_e,im_e,winding,residual,status\n";
  json energies = json::array(), windings = json::array();
  double scale = 0.0;
  for (const auto& e : s.pairs) scale = std::max(scale, std::abs(e.energy));
  bool all_real = true;
  std::vector<std::vector<double>> nodes;
  for (const auto& e : s.pairs) {
    std::string status;
    const double w = winding_or_nan(e.psi, status);
    table += std::to_string(e.index + 1) + ',' + row({e.energy.real(), e.energy.imag(), w, e.residual}) + ',' +
             status + '\n';
    energies.push_back({e.energy.real(), e.energy.imag()});
    windings.push_back(num(w));
    std::vector<double> x, re;
    double imag = 0.0;
    for (std::size_t j = 0; j < e.psi.size(); ++j) {
      x.push_back(e.psi.points[j].real());
      re.push_back(e.psi.values[j].real());
      imag = std::max(imag, std::abs(e.psi.values[j].imag()));
    }
    all_real = all_real && imag < 1e-8 * max_abs(e.psi.values);
    nodes.push_back(find_real_nodes(x, re, 1e-8 * max_abs(e.psi.values)));
  }
  out.add("spectrum.csv", table);

  std::string psi = "x";
  for (const auto& e : s.pairs) psi += ",re_psi" + std::to_string(e.index + 1) + ",im_psi" + std::to_string(e.index + 1);
  psi += '\n';
  const std::size_t rows = s.pairs.empty() ? 0 : s.pairs[0].psi.size();
  for (std::size_t j = 0; j < rows; ++j) {
    psi += fmt(s.pairs[0].psi.points[j].real());
    for (const auto& e : s.pairs) psi += ',' + fmt(e.psi.values[j].real()) + ',' + fmt(e.psi.values[j].imag());
    psi += '\n';
  }
  out.add("modes.csv", psi);

  out.summary["energies"] = energies;
  out.summary["windings"] = windings;
  out.summary["degree_of_symmetry_breaking"] = degree_of_symmetry_breaking(s, 1e-8 * std::max(1.0, scale));
  // Sturm data only makes sense for real eigenfunctions.
  if (all_real) {
    json counts = json::array();
    bool interlaced = true;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      counts.push_back(nodes[i].size());
      if (i > 0) interlaced = interlaced && check_interlacing(nodes[i - 1], nodes[i]);
    }
    out.summary["real_node_counts"] = counts;
    out.summary["interlacing"] = interlaced;
  }
  return out;
}

// ---------------------------------------------------------------- winding

double contour_height(const std::string& text) {
  if (text == "real") return 0.0;
  if (text.rfind("im=", 0) != 0) invalid("--contour: expected im=<height> or real");
  return parse_scalar(text.substr(3), "--contour");
}

Output run_winding(const Params& p, int) {
  const std::string method = p.str("method");
  const auto modes = parse_modes(p.str("mode"), "--mode");
  const std::size_t samples = count_param(p, "samples", 3);
  Output out;
  json list = json::array();
  auto record = [&](std::size_t m, cd energy, double w, const std::string& status) {
    list.push_back({{"mode", m},
                    {"re_e", num(energy.real())},
                    {"im_e", num(energy.imag())},
                    {"winding", num(w)},
                    {"winding_over_pi", num(w / kPi)},
                    {"status", status}});
  };

  if (method == "hermite") {
    const double eps = p.num("epsilon");
    const PotentialSpec v = potential_from(p);
    auto [a, b] = p.str("domain") == "auto" ? std::pair<double, double>{-3.0, 3.0} : domain_from(p, v);
    const Grid1D g(a, b, samples);
    for (std::size_t m : modes) {
      const unsigned n = static_cast<unsigned>(m);
      auto f = [&](double x) { return hermite_complex(n, cd(x, eps)); };
      double w = kNaN;
      std::string status = "ok";
      try {
        w = adaptive_winding(f, a, b).winding;
      } catch (const Error& e) {
        status = to_string(e.kind());
      }
      std::vector<cd> vals(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) vals[j] = f(g.x(j));
      out.add("hermite_n" + std::to_string(m) + ".csv", curve_csv(ComplexSamples::on_grid(g, vals)));
      record(m, kNaN, w, status);
    }
  } else if (method == "real" || method == "contour") {
    const SpectralProblem prob = problem_from(p);
    const std::size_t top = *std::max_element(modes.begin(), modes.end());
    const Spectrum s = solve_linear_spectrum(prob, count_param(p, "grid", 16), top);
    if (s.pairs.size() < top) throw Error(ErrorKind::ConvergenceFailure, "fewer modes than requested");
    for (std::size_t m : modes) {
      const EigenPair& e = s.pairs[m - 1];
      ComplexSamples psi = e.psi;
      cd energy = e.energy;
      if (method == "contour") {
        if (prob.boundary.kind != BoundaryKind::Dirichlet)
          throw Error(ErrorKind::UnsupportedBoundary, "contour windings need Dirichlet conditions");
        const double eta = contour_height(p.str("contour"));
        const double a = prob.domain.x_min(), b = prob.domain.x_max();
        const std::size_t steps = count_param(p, "steps", 16);
        energy = shoot_dirichlet(prob.potential, a, b, e.energy, steps).energy;
        const Grid1D t(a, b, samples);
        const Contour c = make_contour(t.points(), std::vector<double>(samples, 1.0), eta, t);
        cd psi0 = 0.0, dpsi0 = 1.0;
        if (eta != 0.0)
          std::tie(psi0, dpsi0) = transport_segment(prob.potential, energy, a, cd(a, eta), psi0, dpsi0, 200);
        psi = integrate_along_contour(prob, c, energy, psi0, dpsi0);
      }
      std::string status;
      const double w = winding_or_nan(psi, status);
      if (status == "ok") out.add("phase_mode" + std::to_string(m) + ".csv", phase_csv(unwrap_phase(psi)));
      out.add("curve_mode" + std::to_string(m) + ".csv", curve_csv(psi));
      record(m, energy, w, status);
    }
  } else {
    invalid("--method: expected contour, real or hermite");
  }
  out.summary["method"] = method;
  out.summary["modes"] = list;
  if (list.size() == 1) out.summary["winding"] = list[0]["winding"];
  return out;
}

// ---------------------------------------------------------------- sweep

Output run_sweep(const Params& p, int jobs) {
  SpectralProblem prob = problem_from(p);
  const Range r = parse_range(p.str("eps"), "--eps", true);
  if (r.count < 2) invalid("--eps: need at least two samples");
  const std::size_t modes = count_param(p, "modes", 1), grid = count_param(p, "grid", 16);
  prob = prob.with_epsilon(r.lo);
  SweepOptions so;
  so.grid_points = grid;
  so.jobs = jobs;
  so.keep_eigenfunctions = p.integer("phase_mode") > 0;
  const SweepResult s = track_spectrum(prob, r.lo, r.hi, static_cast<std::size_t>(r.count), modes, so);
  Output out;
  out.add("tracks_re.csv", sweep_table_csv(s, SweepColumn::RealEnergy));
  out.add("tracks_im.csv", sweep_table_csv(s, SweepColumn::ImagEnergy));
  out.add("tracks_winding.csv", sweep_table_csv(s, SweepColumn::Winding));

  json eps_list = json::array();
  if (p.flag("exceptional_points")) {
    ExceptionalPointOptions eo;
    eo.grid_points = grid;
    eo.n_modes = modes;
    eo.jobs = jobs;
    for (const auto& ep : detect_exceptional_points(prob, r.lo, r.hi, static_cast<std::size_t>(r.count),
                                                    p.num("gap_tol"), eo))
      eps_list.push_back({{"epsilon_star", ep.epsilon_star},
                          {"eps_below", ep.eps_below},
                          {"eps_above", ep.eps_above},
                          {"modes", {ep.mode_pair[0] + 1, ep.mode_pair[1] + 1}},
                          {"gap_at_star", ep.gap_at_star}});
    out.add("exceptional_points.json", eps_list.dump(2) + "\n");
  }

  // Principal phase of one tracked mode over (x, epsilon).
  const long pm = p.integer("phase_mode");
  if (pm > 0) {
    if (static_cast<std::size_t>(pm) > modes) invalid("--phase-mode: beyond the tracked modes");
    const auto& track = s.tracks[static_cast<std::size_t>(pm) - 1];
    const Grid1D g = discretization_grid(prob, grid);
    std::string csv = "epsilon\\x";
    for (std::size_t j = 0; j < g.size(); ++j) csv += ',' + fmt(g.x(j));
    csv += '\n';
    for (std::size_t i = 0; i < s.epsilons.size(); ++i) {
      csv += fmt(s.epsilons[i]);
      for (std::size_t j = 0; j < g.size(); ++j)
        csv += ',' + fmt(track[i].psi.empty() ? kNaN : std::arg(track[i].psi[j]));
      csv += '\n';
    }
    out.add("phase_mode" + std::to_string(pm) + ".csv", csv);
  }

  out.summary["samples"] = s.epsilons.size();
  out.summary["ambiguous_samples"] = s.ambiguous_samples;
  std::size_t interpolated = 0;
  for (const auto& t : s.tracks)
    for (const auto& q : t) interpolated += q.interpolated;
  out.summary["interpolated_points"] = interpolated;
  if (p.flag("exceptional_points")) out.summary["exceptional_points"] = eps_list;
  return out;
}

// ---------------------------------------------------------------- bloch

Output run_bloch(const Params& p, int jobs) {
  const double eps = p.num("epsilon");
  const auto ks = parse_list(p.str("k"), "--k");
  const std::size_t bands = count_param(p, "bands", 1), waves = count_param(p, "waves", 3);
  BlochOptions bo;
  bo.samples = count_param(p, "samples", 3);
  std::vector<std::vector<BandPoint>> per_k(ks.size());
  parallel_for(ks.size(), jobs, [&](std::size_t i) { per_k[i] = bloch_bands(eps, ks[i], bands, waves, bo); });
  std::vector<BandPoint> all;
  for (auto& v : per_k) all.insert(all.end(), v.begin(), v.end());
  Output out;
  out.add("bands.csv", band_csv(all));

  const double kp = p.num("profile_k");
  const auto prof = bloch_bands(eps, kp, bands, waves, bo);
  std::string csv = "x";
  for (const auto& b : prof) csv += ",theta_band" + std::to_string(b.band_index);
  csv += '\n';
  const ComplexSamples& u0 = prof.at(0).u;
  for (std::size_t j = 0; j < u0.size(); ++j) {
    const double x = u0.points[j].real();
    csv += fmt(x);
    for (const auto& b : prof) csv += ',' + fmt(std::arg(b.u.values[j] * std::exp(cd(0.0, kp * x))));
    csv += '\n';
  }
  out.add("profiles.csv", csv);

  json profile = json::array();
  for (const auto& b : prof)
    profile.push_back({{"band", b.band_index},
                       {"re_e", b.energy.real()},
                       {"im_e", b.energy.imag()},
                       {"winding", num(b.winding)},
                       {"winding_u", num(b.winding_u)}});
  out.summary["profile_k"] = kp;
  out.summary["profile_bands"] = profile;

  if (p.flag("edge")) {
    const Range r = parse_range(p.str("edge_scan"), "--edge-scan", true);
    try {
      out.summary["edge_breaking_epsilon"] =
          band_edge_breaking(r.lo, r.hi, static_cast<std::size_t>(r.count), 1.0, bands, waves);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoneFound) throw;
      out.summary["edge_breaking_epsilon"] = nullptr;
    }
  }
  std::string status;
  const double bw = winding_or_nan(bessel_mode(1.0, eps, Grid1D(0.0, kPi, 2001)), status);
  out.summary["bessel_k1_winding"] = num(bw);
  return out;
}

// ---------------------------------------------------------------- nls

Output run_nls(const Params& p, int jobs) {
  const auto eps = parse_list(p.str("eps"), "--eps");
  const long sigma = p.integer("sigma");
  if (sigma != 1 && sigma != 2) invalid("--sigma: 1 (cubic) or 2 (quintic)");
  const std::size_t n_states = count_param(p, "states", 1);
  NlsOptions o;
  o.grid_points = count_param(p, "grid", 16);
  const auto st = nonlinear_states(PotentialSpec::periodic(eps.front()), p.num("k"), static_cast<int>(sigma),
                                   p.num("power"), eps, n_states, o, jobs);
  Output out;
  std::string table = "epsilon,state,re_e,im_e,power,residual,winding,status\n";
  std::string phases = "epsilon,state,x,theta\n";
  json per_eps = json::array();
  for (std::size_t i = 0; i < st.size(); ++i) {
    json states = json::array();
    for (std::size_t j = 0; j < st[i].size(); ++j) {
      const auto& s = st[i][j];
      std::string status;
      const double w = winding_or_nan(s.psi, status);
      table += fmt(eps[i]) + ',' + std::to_string(j + 1) + ',' +
               row({s.energy.real(), s.energy.imag(), s.power, s.residual, w}) + ',' + status + '\n';
      for (std::size_t q = 0; q < s.psi.size(); ++q)
        phases += fmt(eps[i]) + ',' + std::to_string(j + 1) + ',' +
                  row({s.psi.points[q].real(), std::arg(s.psi.values[q])}) + '\n';
      states.push_back({{"re_e", s.energy.real()}, {"im_e", s.energy.imag()}, {"winding", num(w)}});
    }
    json entry = {{"epsilon", eps[i]}, {"states", states}};
    if (st[i].size() >= 2) {
      const Conjugacy c = check_pt_conjugacy(st[i][0].psi, st[i][1].psi, 1e-4, kPi / 2);
      entry["pair_1_2_conjugate"] = c.holds;
      entry["pair_1_2_residual"] = c.residual;
    }
    per_eps.push_back(entry);
  }
  out.add("states.csv", table);
  out.add("phases.csv", phases);
  out.summary["power"] = p.num("power");
  out.summary["by_epsilon"] = per_eps;
  return out;
}

// ---------------------------------------------------------------- ivp

cd complex_from(const std::string& text, const std::string& what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return parse_scalar(text, what);
  return {parse_scalar(text.substr(0, comma), what), parse_scalar(text.substr(comma + 1), what)};
}

std::string pair_csv(const Trajectory& plus, const Trajectory& minus) {
  std::string csv = "x,re_plus,im_plus,re_minus,im_minus\n";
  for (std::size_t j = 0; j < plus.grid.size(); ++j)
    csv += row({plus.grid.x(j), plus.y[j].real(), plus.y[j].imag(), minus.y[j].real(), minus.y[j].imag()}) + '\n';
  return csv;
}

Output run_ivp(const Params& p, int jobs) {
  const std::string kind = p.str("kind");
  const std::string window = p.str("window"), a_text = p.str("a");
  long samples = p.integer("samples");
  if (samples != 0 && samples < 3) invalid("--samples: at least 3, or 0 for the default");
  IvpOptions io;
  io.rtol = io.atol = p.num("tol");
  auto window_or = [&](double lo, double hi) {
    if (window == "auto") return std::pair<double, double>{lo, hi};
    const Range r = parse_range(window, "--window", false);
    return std::pair<double, double>{r.lo, r.hi};
  };
  Output out;
  if (kind == "single") {
    const cd a = a_text == "auto" ? cd(0.5, 0.1) : complex_from(a_text, "--a");
    const double b = p.num("b");
    const auto [lo, hi] = window_or(0.0, 20.0);
    io.samples = samples ? static_cast<std::size_t>(samples) : 4096;
    const CosineIvp prob = b == 0.0 ? CosineIvp{a, 0.0, 0.0} : CosineIvp{0.0, a, b};
    const Trajectory t = integrate_cosine(prob, lo, hi, io);
    out.add("trajectory.csv", trajectory_csv(t));
    double w = kNaN;
    std::string status = "ok";
    try {
      w = ivp_winding(t).winding;
    } catch (const Error& e) {
      status = to_string(e.kind());
    }
    out.summary = {{"a", {a.real(), a.imag()}},
                   {"b", b},
                   {"extrema", count_extrema(t)},
                   {"winding", num(w)},
                   {"winding_over_pi", num(w / kPi)},
                   {"class", winding_class(w)},
                   {"status", status},
                   {"steps", t.steps}};
  } else if (kind == "shifted") {
    const double a = a_text == "auto" ? 0.1 : parse_scalar(a_text, "--a");
    const auto [lo, hi] = window_or(-100.0, 300.0);
    ShiftedFamilyOptions so;
    so.ivp.rtol = so.ivp.atol = io.rtol;
    so.ivp.samples = samples ? static_cast<std::size_t>(samples) : 40001;
    so.perturbation = p.num("perturbation");
    const long n_lo = p.integer("n_lo"), n_hi = p.integer("n_hi");
    if (n_hi < n_lo) invalid("--n-hi: below --n-lo");
    const auto fam = shifted_family(a, static_cast<int>(n_lo), static_cast<int>(n_hi), lo, hi, so);
    json members = json::array();
    for (const auto& m : fam) {
      out.add("member_n" + std::to_string(m.n) + ".csv", trajectory_csv(m.real));
      members.push_back({{"n", m.n},
                         {"b", m.b},
                         {"extrema", m.extrema},
                         {"winding", m.winding},
                         {"winding_over_pi", m.winding / kPi},
                         {"slope_defect", m.slope_defect}});
    }
    out.summary = {{"a", a}, {"window", {lo, hi}}, {"members", members}};
  } else if (kind == "pairing") {
    const auto eps = parse_list(p.str("eps"), "--eps");
    const auto [lo, hi] = window_or(-20.0, 20.0);
    io.samples = samples ? static_cast<std::size_t>(samples) : 20001;
    std::vector<PairTrajectories> pairs(eps.size());
    std::vector<PairingResult> fits(eps.size());
    parallel_for(eps.size(), jobs, [&](std::size_t i) {
      pairs[i] = pairing_trajectories(eps[i], lo, hi, io);
      fits[i] = pairing_offset(pairs[i].plus, pairs[i].minus);
    });
    json list = json::array();
    for (std::size_t i = 0; i < eps.size(); ++i) {
      out.add("pair_" + std::to_string(i + 1) + ".csv", pair_csv(pairs[i].plus, pairs[i].minus));
      list.push_back({{"epsilon", eps[i]}, {"offset", fits[i].offset}, {"misfit", fits[i].misfit}});
    }
    out.summary = {{"window", {lo, hi}}, {"pairs", list}};
  } else {
    invalid("--kind: expected single, shifted or pairing");
  }
  return out;
}

Output run_ivp_map(const Params& p, int jobs) {
  const Range re = parse_range(p.str("re"), "--re", false), im = parse_range(p.str("im"), "--im", false);
  const auto [nr, ni] = parse_dims(p.str("grid"), "--grid");
  if (nr < 2 || ni < 2) invalid("--grid: at least 2x2");
  IvpOptions io;
  io.rtol = io.atol = p.num("tol");
  io.samples = count_param(p, "samples", 3);
  const WindingMap m = classify_region(re.lo, re.hi, im.lo, im.hi, static_cast<std::size_t>(nr),
                                       static_cast<std::size_t>(ni), p.num("x_max"), io, jobs);
  Output out;
  out.add("winding_map.csv", winding_map_csv(m));
  std::map<std::string, std::size_t> classes, statuses;
  for (std::size_t c = 0; c < m.cls.size(); ++c) {
    const int k = std::abs(m.cls[c]);
    ++classes[k == 0 ? std::string("flagged") : std::to_string(k) + "pi"];
    ++statuses[m.status[c]];
  }
  json cj = json::object(), sj = json::object();
  for (const auto& [k, v] : classes) cj[k] = v;
  for (const auto& [k, v] : statuses) sj[k] = v;
  out.summary = {{"cells", m.cls.size()}, {"x_max", m.x_max}, {"classes", cj}, {"status", sj}};
  return out;
}

// ---------------------------------------------------------------- field2d

Output run_field2d(const Params& p, int) {
  const FieldFamily fam = field_family_from_name(p.str("family"));
  const auto pairs = parse_index_pairs(p.str("pairs"), "--pairs");
  const Range d = parse_range(p.str("domain"), "--domain", false);
  const Grid1D g(d.lo, d.hi, count_param(p, "samples", 3));
  const double eps = p.num("eps");
  PhaseOptions po;
  po.node_tol = p.num("node_tol");
  po.relative_tol = p.flag("relative_tol");
  Output out;
  json list = json::array();
  for (auto [a1, a2] : pairs) {
    const Field2D f = separable_field(fam, a1, a2, g, g, eps, eps);
    const PhaseMap map = phase_field(f, po, false);
    const JumpLines jl = count_jump_lines(map);
    json entry = {{"a1", a1}, {"a2", a2}, {"jump_lines_across_x", jl.across_x}, {"jump_lines_across_y", jl.across_y}};
    if (p.flag("diagonal")) {
      try {
        const double w = diagonal_winding(f, po).winding;
        entry["diagonal_winding"] = w;
        entry["diagonal_winding_over_pi"] = w / kPi;
      } catch (const Error& e) {
        entry["diagonal_winding"] = nullptr;
        entry["diagonal_status"] = to_string(e.kind());
      }
    }
    list.push_back(entry);
    out.add("phase_" + std::to_string(a1) + "_" + std::to_string(a2) + ".csv", phase_map_csv(map));
  }
  out.summary = {{"family", field_family_name(fam)}, {"eps", eps}, {"fields", list}};
  return out;
}

// ---------------------------------------------------------------- wkb

Output run_wkb(const Params& p, int) {
  const SpectralProblem prob = problem_from(p);
  if (prob.boundary.kind != BoundaryKind::Dirichlet)
    throw Error(ErrorKind::UnsupportedBoundary, "WKB comparison needs Dirichlet conditions");
  const auto modes = parse_modes(p.str("modes"), "--modes");
  const std::size_t top = *std::max_element(modes.begin(), modes.end());
  const Spectrum s = solve_linear_spectrum(prob, count_param(p, "grid", 16), top);
  if (s.pairs.size() < top) throw Error(ErrorKind::ConvergenceFailure, "fewer modes than requested");
  const long steps = p.integer("shoot_steps");
  const double a = prob.domain.x_min(), b = prob.domain.x_max();
  std::string table = "mode,re_e,im_e,e_wkb,relative_error,winding_numeric,winding_wkb\n";
  json list = json::array();
  for (std::size_t m : modes) {
    const EigenPair& e = s.pairs[m - 1];
    cd energy = e.energy;
    if (steps > 0) energy = shoot_dirichlet(prob.potential, a, b, e.energy, static_cast<std::size_t>(steps)).energy;
    const double wkb = wkb_eigenvalue(static_cast<int>(m), prob);
    const double rel = std::abs(energy.real() - wkb) / wkb;
    // Near-real high modes pass within ~|V|/E of zero at every node, far
    // below what the finite-difference grid resolves; the winding is taken
    // from the shooting solution on a fine grid.
    // The exact Dirichlet zeros at both ends are dropped.
    const ComplexSamples shot = shooting_eigenfunction(prob.potential, a, b, energy, count_param(p, "profile_steps", 16));
    const std::size_t ns = shot.size();
    const ComplexSamples inner = ComplexSamples::on_grid(
        Grid1D(shot.grid.x(1), shot.grid.x(ns - 2), ns - 2),
        std::vector<cd>(shot.values.begin() + 1, shot.values.end() - 1));
    std::string status;
    const double w_fd = winding_or_nan(inner, status);
    double w_wkb = kNaN;
    try {
      const WkbFunction f(static_cast<int>(m), prob);
      const double inset = 1e-6 * (b - a);
      w_wkb = adaptive_winding([&](double x) { return f(x); }, a + inset, b - inset).winding;
    } catch (const Error&) {
    }
    table += std::to_string(m) + ',' + row({energy.real(), energy.imag(), wkb, rel, w_fd, w_wkb}) + '\n';
    list.push_back({{"mode", m},
                    {"re_e", energy.real()},
                    {"e_wkb", wkb},
                    {"relative_error", rel},
                    {"winding_numeric_over_pi", num(w_fd / kPi)},
                    {"winding_status", status},
                    {"winding_wkb_over_pi", num(w_wkb / kPi)}});
  }
  Output out;
  out.add("wkb.csv", table);
  out.summary["modes"] = list;
  return out;
}

std::vector<Command> build() {
  std::vector<Command> c;
  c.push_back({"spectrum", "eigenvalues, eigenfunctions and windings of one potential",
               join(problem_params("square-well", 0.0),
                    std::vector<ParamSpec>{{"grid", 400, "interior grid points"}, {"modes", 6, "number of modes"}}),
               run_spectrum});
  c.push_back({"winding", "winding of selected modes along a lifted contour, the real axis, or of H_n(x + i eps)",
               join(problem_params("square-well", 0.0),
                    std::vector<ParamSpec>{{"mode", "3", "mode, list 1,3 or range 1:6 (1-based)"},
                                           {"contour", "im=0.2", "im=<height> or real"},
                                           {"method", "contour", "contour | real | hermite"},
                                           {"grid", 400, "finite-difference grid for the energy guess"},
                                           {"samples", 2001, "samples along the path"},
                                           {"steps", 4000, "RK4 steps of the shooting refinement"}}),
               run_winding});
  c.push_back({"sweep", "eigenvalue tracks, windings and exceptional points over an epsilon range",
               join(problem_params("linear-pt", 0.0),
                    std::vector<ParamSpec>{{"eps", "0:2:41", "lo:hi:count"},
                                           {"modes", 6, "tracked modes"},
                                           {"grid", 300, "interior grid points"},
                                           {"exceptional_points", true, "locate exceptional points"},
                                           {"gap_tol", 1e-3, "relative gap below which a pair is rescanned"},
                                           {"phase_mode", 1, "mode whose phase table is written; 0 for none"}}),
               run_sweep});
  c.push_back({"bloch", "Bloch bands of 4cos^2 x + 4i eps sin 2x, windings and the band-edge threshold",
               {{"epsilon", 0.25, "coupling"},
                {"k", "-1:1:41", "wavenumbers: list or lo:hi:count"},
                {"bands", 6, "bands per wavenumber"},
                {"waves", 41, "plane waves"},
                {"samples", 1025, "samples of the periodic part"},
                {"profile_k", 0.5, "wavenumber of the phase profiles"},
                {"edge", true, "locate the band-edge breaking epsilon"},
                {"edge_scan", "0:1:101", "lo:hi:count scan for the threshold"}},
               run_bloch});
  c.push_back({"nls", "nonlinear stationary states at fixed unit-cell power",
               {{"eps", "0.25,0.5,0.75,1.0", "epsilon list or lo:hi:count"},
                {"k", 0.0, "Bloch wavenumber"},
                {"sigma", 1, "1 cubic, 2 quintic"},
                {"power", 0.1, "unit-cell power"},
                {"states", 3, "lowest states kept"},
                {"grid", 128, "samples per period"}},
               run_nls});
  c.push_back({"ivp", "the cosine initial-value problem: one trajectory, the shifted family, or the +- pairing",
               {{"kind", "single", "single | shifted | pairing"},
                {"a", "auto", "initial value: re or re,im (auto: 0.5,0.1 single; 0.1 shifted)"},
                {"b", 0.0, "single: point where y = a (0 for y(0) = a)"},
                {"window", "auto", "lo:hi integration window or auto"},
                {"tol", 1e-10, "relative and absolute tolerance"},
                {"samples", 0, "analysis grid size; 0 for the kind's default"},
                {"n_lo", 1, "shifted: first member"},
                {"n_hi", 5, "shifted: last member"},
                {"perturbation", 0.01, "shifted: imaginary part added to b"},
                {"eps", "0.5,0.7,1.3,1.5", "pairing: epsilon list"}},
               run_ivp});
  c.push_back({"ivp-map", "winding classes of y' = cos(pi x y) over complex initial values",
               {{"re", "0:2.5", "lo:hi of Re y(0)"},
                {"im", "0.025:1.025", "lo:hi of Im y(0)"},
                {"grid", "81x41", "cells along Re x Im"},
                {"x_max", 20.0, "integration window [0, x_max]"},
                {"tol", 1e-10, "relative and absolute tolerance"},
                {"samples", 4096, "analysis grid size"}},
               run_ivp_map});
  c.push_back({"field2d", "phase maps, jump lines and diagonal windings of separable 2D fields",
               {{"family", "oscillator", "square-well | plane-wave | oscillator"},
                {"pairs", "0,0;1,0;2,0;1,1;2,1;2,2", "index pairs a1,a2 separated by ;"},
                {"eps", 0.001, "imaginary shift of both coordinates"},
                {"domain", "-20:20", "lo:hi on both axes"},
                {"samples", 401, "samples per axis"},
                {"diagonal", false, "also unwrap along the diagonal"},
                {"node_tol", 1e-10, "node threshold of the diagonal unwrap"},
                {"relative_tol", true, "node threshold relative to the largest sample"}},
               run_field2d});
  c.push_back({"wkb", "finite-difference energies and windings against the WKB ladder",
               join(problem_params("cubic-pt", 1.0),
                    std::vector<ParamSpec>{{"modes", "15:25", "mode range or list"},
                                           {"grid", 2000, "interior grid points"},
                                           {"shoot_steps", 20000, "RK4 steps polishing each energy; 0 skips"},
                                           {"profile_steps", 200000, "RK4 steps of the sampled eigenfunction"}}),
               run_wkb});
  return c;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all = build();
  return all;
}

const Command& find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return c;
  invalid("unknown command '" + name + "'");
}

}  // namespace ptwind::cli
