#include "params.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <sstream>

namespace ptwind::cli {

namespace {
[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

double to_double(const std::string& s, const std::string& what) {
  if (s.empty()) invalid(what + ": empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size()) invalid(what + ": not a number: '" + s + "'");
  return v;
}

long to_long(const std::string& s, const std::string& what) {
  if (s.empty()) invalid(what + ": empty integer");
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) invalid(what + ": not an integer: '" + s + "'");
  return v;
}

// Plain numbers or multiples of pi: "pi", "-pi/2", "3pi/4", "0.5*pi".
double to_scalar(std::string s, const std::string& what) {
  const auto at = s.find("pi");
  if (at == std::string::npos) return to_double(s, what);
  std::string coef = s.substr(0, at), rest = s.substr(at + 2);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = 1.0;
  if (coef == "-") c = -1.0;
  else if (coef == "+") c = 1.0;
  else if (!coef.empty()) c = to_double(coef, what);
  double d = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') invalid(what + ": malformed pi expression '" + s + "'");
    d = to_double(rest.substr(1), what);
    if (d == 0.0) invalid(what + ": division by zero");
  }
  return c * kPi / d;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}
}  // namespace

std::string flag_name(const std::string& param) {
  std::string f = param;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

ParamSpec& Params::find(const std::string& name) {
  for (auto& s : specs_)
    if (s.name == name) return s;
  invalid("unknown parameter '" + name + "'");
}

const ParamSpec& Params::find(const std::string& name) const {
  for (const auto& s : specs_)
    if (s.name == name) return s;
  invalid("unknown parameter '" + name + "'");
}

void Params::apply_config(const json& params) {
  if (!params.is_object()) invalid("params: expected an object");
  for (const auto& item : params.items()) {
    ParamSpec& s = find(item.key());
    const json& v = item.value();
    const std::string where = "params." + item.key();
    if (s.value.is_boolean()) {
      if (!v.is_boolean()) invalid(where + ": expected a boolean");
    } else if (s.value.is_number_integer()) {
      if (!v.is_number_integer()) invalid(where + ": expected an integer");
    } else if (s.value.is_number()) {
      if (!v.is_number()) invalid(where + ": expected a number");
    } else if (s.value.is_string()) {
      if (!v.is_string()) invalid(where + ": expected a string");
    }
    s.value = v.is_number() && s.value.is_number_float() ? json(v.get<double>()) : v;
  }
}

void Params::apply_flag(const std::string& name, const std::string& text) {
  ParamSpec& s = find(name);
  const std::string where = flag_name(name);
  if (s.value.is_boolean()) {
    if (text == "true" || text == "1") s.value = true;
    else if (text == "false" || text == "0") s.value = false;
    else invalid(where + ": expected true or false");
  } else if (s.value.is_number_integer()) {
    s.value = to_long(text, where);
  } else if (s.value.is_number()) {
    s.value = to_scalar(text, where);
  } else {
    s.value = text;
  }
}

double Params::num(const std::string& name) const { return find(name).value.get<double>(); }
long Params::integer(const std::string& name) const { return find(name).value.get<long>(); }
std::string Params::str(const std::string& name) const { return find(name).value.get<std::string>(); }
bool Params::flag(const std::string& name) const { return find(name).value.get<bool>(); }

json Params::effective() const {
  json j = json::object();
  for (const auto& s : specs_) j[s.name] = s.value;
  return j;
}

double parse_scalar(const std::string& text, const std::string& what) { return to_scalar(text, what); }

Range parse_range(const std::string& text, const std::string& what, bool need_count) {
  const auto parts = split(text, ':');
  if (parts.size() != 2 && parts.size() != 3) invalid(what + ": expected lo:hi or lo:hi:count");
  if (need_count && parts.size() != 3) invalid(what + ": expected lo:hi:count");
  Range r;
  r.lo = to_scalar(parts[0], what);
  r.hi = to_scalar(parts[1], what);
  if (parts.size() == 3) {
    r.count = to_long(parts[2], what);
    if (r.count < 1) invalid(what + ": count must be positive");
  }
  if (!(r.hi > r.lo)) invalid(what + ": need lo < hi");
  return r;
}

std::pair<long, long> parse_dims(const std::string& text, const std::string& what) {
  const auto parts = split(text, 'x');
  if (parts.size() != 2) invalid(what + ": expected NxM");
  return {to_long(parts[0], what), to_long(parts[1], what)};
}

std::vector<std::pair<unsigned, unsigned>> parse_index_pairs(const std::string& text,
                                                             const std::string& what) {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (const auto& item : split(text, ';')) {
    const auto ab = split(item, ',');
    if (ab.size() != 2) invalid(what + ": expected pairs like 2,1;0,0");
    const long a = to_long(ab[0], what), b = to_long(ab[1], what);
    if (a < 0 || b < 0) invalid(what + ": indices must be nonnegative");
    out.emplace_back(static_cast<unsigned>(a), static_cast<unsigned>(b));
  }
  if (out.empty()) invalid(what + ": empty list");
  return out;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const Range r = parse_range(text, what, true);
    if (r.count == 1) return {r.lo};
    for (long i = 0; i < r.count; ++i)
      out.push_back(i + 1 == r.count ? r.hi
                                     : r.lo + (r.hi - r.lo) * static_cast<double>(i) /
                                                  static_cast<double>(r.count - 1));
    return out;
  }
  for (const auto& item : split(text, ',')) out.push_back(to_scalar(item, what));
  if (out.empty()) invalid(what + ": empty list");
  return out;
}

}  // namespace ptwind::cli
