#ifndef UOS_CONFIG_HPP
#define UOS_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace uos {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat ordered key = value store with dotted section names
/// (e.g. "model.kind").  Lines starting with '#' are comments.  Round-trips
/// losslessly through serialize()/parse().
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& in, const std::string& where = "<config>") {
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError(where + " line " + std::to_string(lineno) +
                          ": expected 'key = value', got '" + t + "'");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty())
        throw ConfigError(where + " line " + std::to_string(lineno) + ": empty key");
      if (cfg.index_.count(key))
        throw ConfigError(where + " line " + std::to_string(lineno) + ": duplicate key '" + key +
                          "'");
      cfg.append(key, value);
    }
    return cfg;
  }

  static Config parse_string(const std::string& text, const std::string& where = "<string>") {
    std::istringstream in(text);
    return parse(in, where);
  }

  static Config parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    return parse(f, path);
  }

  bool has(const std::string& key) const { return index_.count(key) != 0; }

  void set(const std::string& key, const std::string& value) {
    auto it = index_.find(key);
    if (it == index_.end())
      append(key, value);
    else
      entries_[it->second].second = value;
  }

  const std::string& get_string(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) throw ConfigError("missing config key '" + key + "'");
    return entries_[it->second].second;
  }

  std::string get_string_or(const std::string& key, const std::string& dflt) const {
    return has(key) ? get_string(key) : dflt;
  }

  long get_int(const std::string& key) const { return to_int(key, get_string(key)); }
  long get_int_or(const std::string& key, long dflt) const {
    return has(key) ? get_int(key) : dflt;
  }

  std::uint64_t get_uint64_or(const std::string& key, std::uint64_t dflt) const {
    if (!has(key)) return dflt;
    const std::string& v = get_string(key);
    try {
      std::size_t pos = 0;
      const std::uint64_t r = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': expected unsigned integer, got '" + v + "'");
    }
  }

  double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
  double get_double_or(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
  }

  bool get_bool_or(const std::string& key, bool dflt) const {
    if (!has(key)) return dflt;
    const std::string& v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': expected boolean, got '" + v + "'");
  }

  /// Comma-separated integer list, e.g. "8,16,24".
  std::vector<long> get_int_list(const std::string& key) const {
    std::vector<long> out;
    std::string item;
    std::istringstream in(get_string(key));
    while (std::getline(in, item, ',')) out.push_back(to_int(key, trim(item)));
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
  }

  std::string serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  /// FNV-1a hash of the canonical serialization; recorded in output headers.
  std::string hash_hex() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : serialize()) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static long to_int(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const long r = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
    }
  }

  static double to_double(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double r = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': expected number, got '" + v + "'");
    }
  }

  void append(const std::string& key, const std::string& value) {
    index_[key] = entries_.size();
    entries_.emplace_back(key, value);
  }

  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace uos

#endif  // UOS_CONFIG_HPP
