#include "thinspec/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace thinspec {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    const std::string t = trim(cur);
    if (!t.empty()) parts.push_back(t);
  }
  return parts;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a number");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as an integer");
  }
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (cfg.given_.count(key)) throw ConfigError("config key '" + key + "' given twice");
    cfg.given_[key] = value;
    cfg.consumed_[key] = false;
  }
  return cfg;
}

std::optional<std::string> Config::raw(const std::string& key) {
  auto it = given_.find(key);
  if (it == given_.end()) return std::nullopt;
  consumed_[key] = true;
  return it->second;
}

void Config::record(const std::string& key, const std::string& value) { effective_[key] = value; }

double Config::get_double(const std::string& key, double default_value) {
  const auto v = raw(key);
  const double x = v ? parse_double(key, *v) : default_value;
  record(key, format_double(x));
  return x;
}

int Config::get_int(const std::string& key, int default_value) {
  const auto v = raw(key);
  const long x = v ? parse_long(key, *v) : default_value;
  record(key, std::to_string(x));
  return static_cast<int>(x);
}

long Config::get_long(const std::string& key, long default_value) {
  const auto v = raw(key);
  const long x = v ? parse_long(key, *v) : default_value;
  record(key, std::to_string(x));
  return x;
}

bool Config::get_bool(const std::string& key, bool default_value) {
  const auto v = raw(key);
  bool x = default_value;
  if (v) {
    if (*v == "true" || *v == "1" || *v == "yes") x = true;
    else if (*v == "false" || *v == "0" || *v == "no") x = false;
    else throw ConfigError("config key '" + key + "': cannot parse '" + *v + "' as a bool");
  }
  record(key, x ? "true" : "false");
  return x;
}

std::string Config::get_string(const std::string& key, const std::string& default_value) {
  const auto v = raw(key);
  const std::string x = v ? *v : default_value;
  record(key, x);
  return x;
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& default_value) {
  const auto v = raw(key);
  std::vector<double> xs;
  if (v) {
    for (const auto& part : split_list(*v)) xs.push_back(parse_double(key, part));
  } else {
    xs = default_value;
  }
  std::vector<std::string> formatted;
  formatted.reserve(xs.size());
  for (double x : xs) formatted.push_back(format_double(x));
  record(key, join(formatted));
  return xs;
}

std::vector<int> Config::get_int_list(const std::string& key, const std::vector<int>& default_value) {
  const auto v = raw(key);
  std::vector<int> xs;
  if (v) {
    for (const auto& part : split_list(*v)) xs.push_back(static_cast<int>(parse_long(key, part)));
  } else {
    xs = default_value;
  }
  std::vector<std::string> formatted;
  formatted.reserve(xs.size());
  for (int x : xs) formatted.push_back(std::to_string(x));
  record(key, join(formatted));
  return xs;
}

std::optional<double> Config::get_optional_double(const std::string& key) {
  const auto v = raw(key);
  if (!v) {
    record(key, "none");
    return std::nullopt;
  }
  const double x = parse_double(key, *v);
  record(key, format_double(x));
  return x;
}

void Config::finish() const {
  std::vector<std::string> unknown;
  for (const auto& [key, used] : consumed_) {
    if (!used) unknown.push_back(key);
  }
  if (!unknown.empty()) {
    std::sort(unknown.begin(), unknown.end());
    throw ConfigError("unknown config keys: " + join(unknown));
  }
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, value] : effective_) {  // std::map: sorted
    out += key;
    out += " = ";
    out += value;
    out += "\n";
  }
  return out;
}

std::string Config::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

}  // namespace thinspec
