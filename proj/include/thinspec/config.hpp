#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinspec {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat key-value configuration: one `key = value` per line, `#` comments,
// UTF-8. Every getter records the resolved effective value (given or
// default); finish() rejects unknown keys so typos never pass silently.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  double get_double(const std::string& key, double default_value);
  int get_int(const std::string& key, int default_value);
  long get_long(const std::string& key, long default_value);
  bool get_bool(const std::string& key, bool default_value);
  std::string get_string(const std::string& key, const std::string& default_value);
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& default_value);
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& default_value);
  std::optional<double> get_optional_double(const std::string& key);

  // Rejects keys that were present in the document but never consumed.
  void finish() const;

  // Sorted `key = value` lines of the resolved effective configuration.
  std::string canonical() const;

  // FNV-1a 64-bit hex digest of canonical().
  std::string hash_hex() const;

 private:
  std::optional<std::string> raw(const std::string& key);
  void record(const std::string& key, const std::string& value);

  std::map<std::string, std::string> given_;
  std::map<std::string, bool> consumed_;
  std::map<std::string, std::string> effective_;
};

std::string format_double(double v);  // 17 significant digits, round-trip safe

std::uint64_t fnv1a64(const std::string& data);

}  // namespace thinspec
