#include <algorithm>
#include <cstring>

#include "ptwind/config.hpp"

namespace ptwind {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigInvalid, where + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = std::any_of(allowed.begin(), allowed.end(),
                          [&](const char* a) { return item.key() == a; });
    if (!ok) throw Error(ErrorKind::ConfigInvalid, where + ": unknown key '" + item.key() + "'");
  }
}

namespace {
json complex_json(cd c) { return json::array({c.real(), c.imag()}); }

cd complex_from(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorKind::ConfigInvalid, where + ": expected a number or [re, im]");
}

template <class T>
T get_as(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, where + "." + key + ": " + e.what());
  }
}
}  // namespace

json to_json(const PotentialSpec& spec) {
  json j;
  j["family"] = family_name(spec.family);
  j["epsilon"] = spec.epsilon;
  if (spec.family == Family::CubicPT) j["L"] = spec.half_width;
  if (spec.family == Family::Custom) {
    json poly = json::array();
    for (auto c : spec.poly) poly.push_back(complex_json(c));
    json trig = json::array();
    for (const auto& t : spec.trig)
      trig.push_back({{"coefficient", complex_json(t.coefficient)},
                      {"wavenumber", t.wavenumber},
                      {"kind", t.is_sine ? "sin" : "cos"}});
    j["poly"] = poly;
    j["trig"] = trig;
  }
  return j;
}

PotentialSpec potential_from_json(const json& j) {
  const std::string where = "potential";
  reject_unknown_keys(j, {"family", "epsilon", "L", "poly", "trig"}, where);
  PotentialSpec s;
  s.family = family_from_name(get_as<std::string>(j, "family", where));
  if (j.contains("epsilon")) s.epsilon = get_as<double>(j, "epsilon", where);
  else if (s.family == Family::CubicPT) s.epsilon = 1.0;
  if (j.contains("L")) s.half_width = get_as<double>(j, "L", where);
  if (j.contains("poly"))
    for (const auto& c : j.at("poly")) s.poly.push_back(complex_from(c, where + ".poly"));
  if (j.contains("trig")) {
    for (const auto& t : j.at("trig")) {
      reject_unknown_keys(t, {"coefficient", "wavenumber", "kind"}, where + ".trig");
      TrigTerm term;
      term.coefficient = complex_from(t.at("coefficient"), where + ".trig");
      term.wavenumber = get_as<double>(t, "wavenumber", where + ".trig");
      std::string kind = t.contains("kind") ? get_as<std::string>(t, "kind", where) : "cos";
      if (kind != "sin" && kind != "cos")
        throw Error(ErrorKind::ConfigInvalid, where + ".trig.kind must be sin or cos");
      term.is_sine = kind == "sin";
      s.trig.push_back(term);
    }
  }
  if (s.family != Family::Custom && (!s.poly.empty() || !s.trig.empty()))
    throw Error(ErrorKind::ConfigInvalid, "poly/trig only apply to the custom family");
  return s;
}

json to_json(const Grid1D& grid) {
  return {{"x_min", grid.x_min()}, {"x_max", grid.x_max()}, {"n_points", grid.size()}};
}

Grid1D grid_from_json(const json& j) {
  reject_unknown_keys(j, {"x_min", "x_max", "n_points"}, "domain");
  try {
    return Grid1D(get_as<double>(j, "x_min", "domain"), get_as<double>(j, "x_max", "domain"),
                  get_as<std::size_t>(j, "n_points", "domain"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid) throw;
    throw Error(ErrorKind::ConfigInvalid, std::string("domain: ") + e.what());
  }
}

json to_json(const SpectralProblem& p) {
  json j;
  j["potential"] = to_json(p.potential);
  j["domain"] = to_json(p.domain);
  if (p.boundary.kind == BoundaryKind::Dirichlet) j["boundary"] = {{"kind", "dirichlet"}};
  else j["boundary"] = {{"kind", "bloch"}, {"k", p.boundary.k}};
  const char* nl = p.nonlinearity == Nonlinearity::None    ? "none"
                   : p.nonlinearity == Nonlinearity::Cubic ? "cubic"
                                                           : "quintic";
  j["nonlinearity"] = nl;
  if (p.power) j["power"] = *p.power;
  return j;
}

SpectralProblem problem_from_json(const json& j) {
  const std::string where = "problem";
  reject_unknown_keys(j, {"potential", "domain", "boundary", "nonlinearity", "power"}, where);
  SpectralProblem p;
  p.potential = potential_from_json(j.at("potential"));
  p.domain = grid_from_json(j.at("domain"));
  if (j.contains("boundary")) {
    const json& b = j.at("boundary");
    reject_unknown_keys(b, {"kind", "k"}, where + ".boundary");
    std::string kind = get_as<std::string>(b, "kind", where + ".boundary");
    if (kind == "dirichlet") p.boundary = Boundary::dirichlet();
    else if (kind == "bloch")
      p.boundary = Boundary::bloch(b.contains("k") ? get_as<double>(b, "k", where) : 0.0);
    else throw Error(ErrorKind::ConfigInvalid, "boundary.kind must be dirichlet or bloch");
  }
  if (j.contains("nonlinearity")) {
    std::string nl = get_as<std::string>(j, "nonlinearity", where);
    if (nl == "none") p.nonlinearity = Nonlinearity::None;
    else if (nl == "cubic") p.nonlinearity = Nonlinearity::Cubic;
    else if (nl == "quintic") p.nonlinearity = Nonlinearity::Quintic;
    else throw Error(ErrorKind::ConfigInvalid, "nonlinearity must be none, cubic or quintic");
  }
  if (j.contains("power")) p.power = get_as<double>(j, "power", where);
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("problem: ") + e.what());
  }
  return p;
}

}  // namespace ptwind
