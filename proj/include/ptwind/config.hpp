#pragma once

#include <json.hpp>

#include "ptwind/core.hpp"

namespace ptwind {

using json = nlohmann::ordered_json;

// JSON round trip for the configuration types. Unknown keys raise
// ConfigInvalid.
json to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const json& j);

json to_json(const Grid1D& grid);
Grid1D grid_from_json(const json& j);

json to_json(const SpectralProblem& problem);
SpectralProblem problem_from_json(const json& j);

// Throws ConfigInvalid naming the first key of `j` not in `allowed`.
void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where);

}  // namespace ptwind
