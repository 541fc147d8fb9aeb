#pragma once

#include <functional>
#include <string>
#include <vector>

#include "artifacts.hpp"
#include "params.hpp"

namespace ptwind::cli {

struct Command {
  std::string name;
  std::string help;
  std::vector<ParamSpec> params;
  // jobs only sets the worker count; outputs never depend on it.
  std::function<Output(const Params&, int jobs)> run;
};

const std::vector<Command>& commands();
const Command& find_command(const std::string& name);

}  // namespace ptwind::cli
