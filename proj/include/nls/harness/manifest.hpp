#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nls/harness/config.hpp"

namespace nls {

std::string sha256_file(const std::filesystem::path& path);

struct ManifestFile {
  std::string path;  // relative to the manifest's directory
  std::string kind;  // csv, snapshot, config
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string preset;
  std::string version;
  Config config;  // resolved: defaults, file values and overrides
  std::string grid;
  std::string regime;
  std::string termination;
  double wall_seconds = 0;
  std::size_t steps = 0;
  std::size_t samples = 0;
  std::vector<ManifestFile> files;
  std::map<std::string, double> results;      // named scalar outcomes of the diagnostic bundle
  std::map<std::string, std::string> notes;   // verdicts and messages
  bool passed = true;                         // every check of the bundle held

  // Hashes the file (relative to dir) and records it.
  void add_file(const std::filesystem::path& dir, const std::string& relative, const std::string& kind);
};

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

// Files that are missing or whose checksum no longer matches; empty when intact.
std::vector<std::string> verify_manifest(const std::filesystem::path& path, const RunManifest& m);

}  // namespace nls
