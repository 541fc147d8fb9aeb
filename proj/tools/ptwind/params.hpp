#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ptwind/config.hpp"

namespace ptwind::cli {

// One named experiment parameter. The JSON type of the default fixes the
// accepted type for config values and flag text.
struct ParamSpec {
  std::string name;  // snake_case; the flag is --name with '_' -> '-'
  json value;
  std::string help;
};

class Params {
 public:
  explicit Params(std::vector<ParamSpec> specs) : specs_(std::move(specs)) {}

  const std::vector<ParamSpec>& specs() const { return specs_; }

  // Config "params" object; unknown keys and type mismatches are ConfigInvalid.
  void apply_config(const json& params);
  // Flag text parsed by the default's type.
  void apply_flag(const std::string& name, const std::string& text);

  double num(const std::string& name) const;
  long integer(const std::string& name) const;
  std::string str(const std::string& name) const;
  bool flag(const std::string& name) const;

  json effective() const;

 private:
  ParamSpec& find(const std::string& name);
  const ParamSpec& find(const std::string& name) const;
  std::vector<ParamSpec> specs_;
};

std::string flag_name(const std::string& param);

// A number or a multiple of pi ("pi", "-pi/2", "3pi/4").
double parse_scalar(const std::string& text, const std::string& what);

// "lo:hi" and "lo:hi:count" ranges; ConfigInvalid on malformed text.
struct Range {
  double lo = 0.0, hi = 0.0;
  long count = 0;  // 0 when absent
};
Range parse_range(const std::string& text, const std::string& what, bool need_count);
// "81x41"
std::pair<long, long> parse_dims(const std::string& text, const std::string& what);
// "0,0;1,0;2,1"
std::vector<std::pair<unsigned, unsigned>> parse_index_pairs(const std::string& text,
                                                             const std::string& what);
// "0.25,0.5" or "lo:hi:count" (inclusive, count points)
std::vector<double> parse_list(const std::string& text, const std::string& what);

}  // namespace ptwind::cli
