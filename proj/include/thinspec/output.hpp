#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace thinspec {

// One result table, emitted both as CSV (17-significant-digit numbers,
// RFC-style quoting) and as JSON with identical values. Cells are JSON
// values; empty cells (summary rows) are nulls.
struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

std::string to_csv(const ResultTable& table, const std::string& config_hash);
nlohmann::json to_json(const ResultTable& table, const std::string& config_hash);

// Writes <name>.csv and <name>.json into out_dir; returns the paths written.
std::vector<std::string> write_table(const std::string& out_dir, const ResultTable& table,
                                     const std::string& config_hash);

struct RunManifest {
  std::string config_hash;
  unsigned long long seed = 0;
  std::string tool_version;
  std::string started;   // ISO-8601 UTC
  std::string finished;  // ISO-8601 UTC
  std::vector<std::string> outputs;
};

std::string write_manifest(const std::string& out_dir, const RunManifest& manifest);

std::string iso8601_utc_now();

}  // namespace thinspec
