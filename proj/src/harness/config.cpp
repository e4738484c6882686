#include "nls/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <sstream>

#include "nls/core/error.hpp"

namespace nls {

namespace {

namespace pt = boost::property_tree;

Config from_tree(const pt::ptree& tree) {
  Config c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      c.set(section, body.data());
      continue;
    }
    for (const auto& [key, value] : body) c.set(section + "." + key, value.data());
  }
  return c;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  const auto t = trim(v);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    fail(ErrorKind::Usage, "config key '" + key + "' is not a number: '" + v + "'");
  return out;
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Config Config::parse(const std::string& ini_text) {
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::Usage, std::string("config parse error: ") + e.what());
  }
  return from_tree(tree);
}

void Config::set(const std::string& key, const std::string& value) { values_[trim(key)] = trim(value); }

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    fail(ErrorKind::Usage, "override '" + assignment + "' is not key=value");
  std::string key = trim(assignment.substr(0, eq));
  const std::string value = assignment.substr(eq + 1);
  if (key.find('.') == std::string::npos) {
    std::string match;
    for (const auto& [k, v] : values_) {
      const auto dot = k.rfind('.');
      if (dot != std::string::npos && k.substr(dot + 1) == key) {
        if (!match.empty()) fail(ErrorKind::Usage, "override key '" + key + "' is ambiguous");
        match = k;
      }
    }
    if (match.empty()) fail(ErrorKind::Usage, "invalid override key '" + key + "'");
    key = match;
  }
  set(key, value);
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::string Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorKind::Usage, "missing config key '" + key + "'");
  return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const { return to_double(key, get(key)); }

int Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  if (v != double(int(v))) fail(ErrorKind::Usage, "config key '" + key + "' must be an integer");
  return int(v);
}

std::uint64_t Config::get_seed() const {
  const double v = has("run.seed") ? get_double("run.seed") : 0.0;
  if (v < 0 || v != double(std::uint64_t(v))) fail(ErrorKind::Usage, "run.seed must be a non-negative integer");
  return std::uint64_t(v);
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(to_double(key, item));
  return out;
}

void Config::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : values_) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == k;
    if (!ok) fail(ErrorKind::Usage, "invalid config key '" + k + "'");
  }
}

std::string Config::to_ini() const {
  std::ostringstream os;
  // section-less keys first, they would otherwise land inside the preceding section
  for (const auto& [k, v] : values_)
    if (k.find('.') == std::string::npos) os << k << " = " << v << "\n";
  std::string section;
  for (const auto& [k, v] : values_) {
    const auto dot = k.find('.');
    if (dot == std::string::npos) continue;
    const std::string s = k.substr(0, dot);
    if (s != section) {
      if (os.tellp() > 0) os << "\n";
      os << "[" << s << "]\n";
      section = s;
    }
    os << k.substr(dot + 1) << " = " << v << "\n";
  }
  return os.str();
}

}  // namespace nls
