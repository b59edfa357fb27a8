// Flat key=value configuration with per-subcommand sections, overridable by
// --key value flags. Grammar:
//   key = value            applies to every subcommand
//   [subcommand]           opens a section; following keys apply to it only
//   # comment / blank      ignored
#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

class KeyValues {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const std::map<std::string, std::string>& raw() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string require_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key: " + key);
    return it->second;
  }

  double get_double(const std::string& key, std::optional<double> fallback = {}) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback) return *fallback;
      throw ConfigError("missing required key: " + key);
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key " + key + " is not a number: " + it->second);
    }
  }

  std::int64_t get_int(const std::string& key, std::optional<std::int64_t> fallback = {}) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback) return *fallback;
      throw ConfigError("missing required key: " + key);
    }
    try {
      std::size_t pos = 0;
      const std::int64_t v = std::stoll(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key " + key + " is not an integer: " + it->second);
    }
  }

  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const std::uint64_t v = std::stoull(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key " + key + " is not an unsigned integer: " + it->second);
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("key " + key + " is not a boolean: " + it->second);
  }

  void reject_unknown(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
      if (!allowed.count(key)) throw ConfigError("unknown key: " + key);
    }
  }

 private:
  std::map<std::string, std::string> values_;
};

// Reads the section-filtered key=value view of a config file.
inline KeyValues parse_config_file(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  KeyValues kv;
  std::string line;
  std::string section;  // empty = global
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    if (text.front() == '[' && text.back() == ']') {
      section = trim(text.substr(1, text.size() - 2));
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": expected key = value";
      throw ConfigError(msg.str());
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": empty key";
      throw ConfigError(msg.str());
    }
    if (section.empty() || section == command) kv.set(key, value);
  }
  return kv;
}

// Applies --key value / --key=value flags on top of config values. A bare
// --config FILE flag is consumed by the caller beforehand.
inline void apply_flags(KeyValues& kv, const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.rfind("--", 0) != 0 || arg.size() <= 2) {
      throw ConfigError("expected --key value, got: " + arg);
    }
    const std::string body = arg.substr(2);
    const std::size_t eq = body.find('=');
    if (eq != std::string::npos) {
      kv.set(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (i + 1 >= args.size()) throw ConfigError("flag --" + body + " needs a value");
    kv.set(body, args[++i]);
  }
}

}  // namespace cli
