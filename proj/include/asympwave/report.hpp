// Structured run reports (JSON) and scan tables (CSV).
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace asympwave {

struct CheckRecord {
  std::string id;
  double value = 0.0;
  double envelope = 0.0;  // threshold or target the value is held against
  bool pass = true;
  std::string provenance;  // module/op that produced the number
  std::string note;
};

struct Report {
  std::string command;
  nlohmann::json config_echo;
  std::vector<CheckRecord> checks;
  nlohmann::json csv_schemas;  // column documentation per emitted table
  double elapsed_seconds = 0.0;
  int schema_version = 1;
  std::string version = "asympwave 0.1.0";

  void add(const std::string& id, double value, double envelope, bool pass,
           const std::string& provenance, const std::string& note = "");
  bool all_pass() const;
  nlohmann::json to_json() const;
  void write(const std::string& path) const;
};

// One row per sample; header row mandatory, %.17g number formatting so that
// reruns are byte-identical.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

std::string output_dir(const std::string& cli_value);

}  // namespace asympwave
