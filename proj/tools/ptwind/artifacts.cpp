#include "artifacts.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace ptwind::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {
void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
  if (!os) throw std::runtime_error("write failed for " + p.string());
}
}  // namespace

json write_artifacts(const std::string& dir, const json& header, const Output& out) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<Artifact> all = out.files;
  all.push_back({"summary.json", out.summary.dump(2) + "\n"});
  json manifest = header;
  json files = json::array();
  for (const auto& a : all) {
    write_file(fs::path(dir) / a.name, a.content);
    files.push_back({{"file", a.name}, {"sha256", sha256_hex(a.content)}, {"bytes", a.content.size()}});
  }
  manifest["files"] = files;
  write_file(fs::path(dir) / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace ptwind::cli
