#pragma once

#include <string>
#include <vector>

#include "ptwind/config.hpp"

namespace ptwind::cli {

struct Artifact {
  std::string name;
  std::string content;
};

// What a command hands back: files plus a JSON summary (written as
// summary.json). Both must depend on the inputs only.
struct Output {
  std::vector<Artifact> files;
  json summary = json::object();

  void add(std::string name, std::string content) {
    files.push_back({std::move(name), std::move(content)});
  }
};

std::string sha256_hex(const std::string& data);

// Full-precision scientific notation, "nan" for NaN.
std::string fmt(double v);

// Writes every file and summary.json into `dir`, then manifest.json listing
// each with its SHA-256 and size. Returns the manifest.
json write_artifacts(const std::string& dir, const json& header, const Output& out);

}  // namespace ptwind::cli
