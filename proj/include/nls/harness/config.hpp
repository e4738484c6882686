#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace nls {

// Flat "section.key" → value store read from INI text. Values stay strings until asked for.
class Config {
 public:
  Config() = default;

  static Config load(const std::filesystem::path& path);
  static Config parse(const std::string& ini_text);

  void set(const std::string& key, const std::string& value);
  // "section.key=value", or "key=value" when the key names exactly one existing entry.
  void apply_override(const std::string& assignment);
  void merge(const Config& other);  // other wins

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key) const;  // Usage error when missing
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::uint64_t get_seed() const;  // run.seed, default 0
  std::vector<double> get_list(const std::string& key) const;  // comma separated

  // Usage error naming the first key outside the allowed set.
  void require_known(const std::vector<std::string>& allowed) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  std::string to_ini() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace nls
