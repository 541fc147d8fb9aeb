// ptwind: every experiment as a named, configured, reproducible run.
//
// Precedence for each setting: command-line flag, then config file, then
// built-in default. The output root additionally falls back to $PTWIND_OUT
// and then ./ptwind-out; artifacts land in <root>/<experiment name>/.

#include <CLI11.hpp>

#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <regex>

#include "commands.hpp"

using namespace ptwind;
using namespace ptwind::cli;

namespace {

struct FlagSlot {
  std::string param;
  std::string text;
  CLI::Option* option = nullptr;
  CLI::App* owner = nullptr;
};

struct Common {
  std::string config, out, name;
  int jobs = 0;
  CLI::Option *out_opt = nullptr, *name_opt = nullptr, *jobs_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* cfg = sub->add_option("--config", c.config, "JSON experiment config");
  if (config_required) cfg->required();
  c.out_opt = sub->add_option("--out", c.out, "output root (default: config, $PTWIND_OUT, ./ptwind-out)");
  c.name_opt = sub->add_option("--name", c.name, "experiment name (default: config, then the command)");
  c.jobs_opt = sub->add_option("--jobs", c.jobs, "worker threads; outputs do not depend on it");
}

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::ConfigInvalid, "cannot read config " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, "config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ConfigInvalid, "config must be a JSON object");
  reject_unknown_keys(j, {"experiment", "command", "output", "jobs", "params"}, "config");
  for (const char* key : {"experiment", "command", "output"})
    if (j.contains(key) && !j[key].is_string())
      throw Error(ErrorKind::ConfigInvalid, std::string("config.") + key + ": expected a string");
  if (j.contains("jobs") && !j["jobs"].is_number_integer())
    throw Error(ErrorKind::ConfigInvalid, "config.jobs: expected an integer");
  return j;
}

int report(const std::string& kind, const std::string& message, int code) {
  json e = {{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << e.dump() << std::endl;
  return code;
}

bool is_config_error(ErrorKind k) {
  return k == ErrorKind::ConfigInvalid || k == ErrorKind::InvalidArgument || k == ErrorKind::UnknownFamily;
}

int execute(const Command& cmd, const std::deque<FlagSlot>& flags, const Common& c, const json& config) {
  Params params(cmd.params);
  if (config.contains("params")) params.apply_config(config["params"]);
  for (const auto& f : flags)
    if (f.option && f.option->count() > 0) params.apply_flag(f.param, f.text);

  int jobs = 1;
  if (config.contains("jobs")) jobs = config["jobs"].get<int>();
  if (c.jobs_opt && c.jobs_opt->count() > 0) jobs = c.jobs;
  if (jobs < 1) throw Error(ErrorKind::ConfigInvalid, "--jobs: must be at least 1");

  std::string name = cmd.name;
  if (config.contains("experiment")) name = config["experiment"].get<std::string>();
  if (c.name_opt && c.name_opt->count() > 0) name = c.name;
  if (!std::regex_match(name, std::regex("[A-Za-z0-9._-]+")) || name == "." || name == "..")
    throw Error(ErrorKind::ConfigInvalid, "experiment name must match [A-Za-z0-9._-]+");

  std::string root = "ptwind-out";
  if (const char* env = std::getenv("PTWIND_OUT"); env && *env) root = env;
  if (config.contains("output")) root = config["output"].get<std::string>();
  if (c.out_opt && c.out_opt->count() > 0) root = c.out;

  const Output out = cmd.run(params, jobs);
  const std::string dir = root + "/" + name;
  const json header = {{"experiment", name}, {"command", cmd.name}, {"params", params.effective()}};
  write_artifacts(dir, header, out);
  json done = {{"experiment", name}, {"directory", dir}, {"summary", out.summary}};
  std::cout << done.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptwind: winding numbers of non-Hermitian eigenfunctions"};
  app.require_subcommand(1);

  std::deque<FlagSlot> slots;
  std::vector<std::pair<const Command*, CLI::App*>> subs;
  std::deque<Common> commons;
  for (const auto& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    commons.emplace_back();
    add_common(sub, commons.back(), false);
    for (const auto& spec : cmd.params) {
      slots.push_back({spec.name, "", nullptr, sub});
      slots.back().option = sub->add_option(flag_name(spec.name), slots.back().text,
                                            spec.help + " [default: " + spec.value.dump() + "]");
    }
    subs.emplace_back(&cmd, sub);
  }
  CLI::App* run = app.add_subcommand("run", "run the experiment described by a config file");
  commons.emplace_back();
  Common& run_common = commons.back();
  add_common(run, run_common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("ConfigInvalid", e.what(), 2);
  }

  try {
    if (run->parsed()) {
      const json config = load_config(run_common.config);
      if (!config.contains("command")) throw Error(ErrorKind::ConfigInvalid, "config.command is required for run");
      const Command& cmd = find_command(config["command"].get<std::string>());
      return execute(cmd, {}, run_common, config);
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i].second->parsed()) continue;
      const Command& cmd = *subs[i].first;
      const Common& c = commons[i];
      json config = json::object();
      if (!c.config.empty()) {
        config = load_config(c.config);
        if (config.contains("command") && config["command"].get<std::string>() != cmd.name)
          throw Error(ErrorKind::ConfigInvalid,
                      "config is for '" + config["command"].get<std::string>() + "', not '" + cmd.name + "'");
      }
      std::deque<FlagSlot> mine;
      for (const auto& s : slots)
        if (s.owner == subs[i].second) mine.push_back(s);
      return execute(cmd, mine, c, config);
    }
    return report("ConfigInvalid", "no command given", 2);
  } catch (const Error& e) {
    return report(to_string(e.kind()), e.what(), is_config_error(e.kind()) ? 2 : 3);
  } catch (const std::exception& e) {
    return report("RuntimeError", e.what(), 3);
  }
}
