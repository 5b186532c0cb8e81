#include "thinspec/output.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "thinspec/config.hpp"

namespace thinspec {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string cell_to_csv(const nlohmann::json& cell) {
  if (cell.is_null()) return "";
  if (cell.is_string()) return csv_escape(cell.get<std::string>());
  if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
  if (cell.is_number_float()) return format_double(cell.get<double>());
  return cell.dump();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

std::string to_csv(const ResultTable& table, const std::string& config_hash) {
  std::string out = "# config_hash=" + config_hash + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ",";
    out += csv_escape(table.columns[i]);
  }
  out += "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::runtime_error("table row width mismatch in " + table.name);
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += cell_to_csv(row[i]);
    }
    out += "\n";
  }
  return out;
}

nlohmann::json to_json(const ResultTable& table, const std::string& config_hash) {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["name"] = table.name;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  return j;
}

std::vector<std::string> write_table(const std::string& out_dir, const ResultTable& table,
                                     const std::string& config_hash) {
  const std::string csv_path = out_dir + "/" + table.name + ".csv";
  const std::string json_path = out_dir + "/" + table.name + ".json";
  write_file(csv_path, to_csv(table, config_hash));
  write_file(json_path, to_json(table, config_hash).dump(2) + "\n");
  return {csv_path, json_path};
}

std::string write_manifest(const std::string& out_dir, const RunManifest& manifest) {
  nlohmann::json j;
  j["config_hash"] = manifest.config_hash;
  j["seed"] = manifest.seed;
  j["tool_version"] = manifest.tool_version;
  j["started"] = manifest.started;
  j["finished"] = manifest.finished;
  j["outputs"] = manifest.outputs;
  const std::string path = out_dir + "/manifest.json";
  write_file(path, j.dump(2) + "\n");
  return path;
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace thinspec
