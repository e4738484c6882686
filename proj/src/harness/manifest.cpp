#include "nls/harness/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <memory>

#include "json.hpp"
#include "nls/core/error.hpp"

namespace nls {

namespace {

using nlohmann::json;

// JSON has no infinities; non-finite results travel as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double from_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return NAN;
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) fail(ErrorKind::Io, "sha256 init failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), std::size_t(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void RunManifest::add_file(const std::filesystem::path& dir, const std::string& relative, const std::string& kind) {
  const auto full = dir / relative;
  files.push_back({relative, kind, sha256_file(full), std::filesystem::file_size(full)});
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  json j;
  j["preset"] = m.preset;
  j["version"] = m.version;
  j["config"] = m.config.values();
  j["grid"] = m.grid;
  j["regime"] = m.regime;
  j["termination"] = m.termination;
  j["wall_seconds"] = m.wall_seconds;
  j["steps"] = m.steps;
  j["samples"] = m.samples;
  j["passed"] = m.passed;
  json files = json::array();
  for (const auto& f : m.files) files.push_back({{"path", f.path}, {"kind", f.kind}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["files"] = files;
  json results = json::object();
  for (const auto& [k, v] : m.results) results[k] = number(v);
  j["results"] = results;
  j["notes"] = m.notes;
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) fail(ErrorKind::Io, "error while writing " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open manifest " + path.string());
  RunManifest m;
  try {
    const json j = json::parse(in);
    m.preset = j.at("preset").get<std::string>();
    m.version = j.at("version").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) m.config.set(k, v.get<std::string>());
    m.grid = j.at("grid").get<std::string>();
    m.regime = j.at("regime").get<std::string>();
    m.termination = j.at("termination").get<std::string>();
    m.wall_seconds = j.at("wall_seconds").get<double>();
    m.steps = j.at("steps").get<std::size_t>();
    m.samples = j.at("samples").get<std::size_t>();
    m.passed = j.at("passed").get<bool>();
    for (const auto& f : j.at("files"))
      m.files.push_back({f.at("path").get<std::string>(), f.at("kind").get<std::string>(),
                         f.at("sha256").get<std::string>(), f.at("bytes").get<std::uintmax_t>()});
    for (const auto& [k, v] : j.at("results").items()) m.results[k] = from_number(v);
    for (const auto& [k, v] : j.at("notes").items()) m.notes[k] = v.get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, "malformed manifest " + path.string() + ": " + e.what());
  }
  return m;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& path, const RunManifest& m) {
  std::vector<std::string> bad;
  const auto dir = path.parent_path();
  for (const auto& f : m.files) {
    const auto full = dir / f.path;
    if (!std::filesystem::exists(full)) {
      bad.push_back(f.path + ": missing");
    } else if (sha256_file(full) != f.sha256) {
      bad.push_back(f.path + ": checksum mismatch");
    }
  }
  return bad;
}

}  // namespace nls
