#include "asympwave/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace asympwave {

void Report::add(const std::string& id, double value, double envelope, bool pass,
                 const std::string& provenance, const std::string& note) {
  checks.push_back({id, value, envelope, pass, provenance, note});
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config_echo;
  j["schema_version"] = schema_version;
  j["version"] = version;
  j["elapsed_seconds"] = elapsed_seconds;
  j["pass"] = all_pass();
  j["csv_schemas"] = csv_schemas;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json jc;
    jc["id"] = c.id;
    jc["value"] = c.value;
    jc["envelope"] = c.envelope;
    jc["pass"] = c.pass;
    jc["provenance"] = c.provenance;
    if (!c.note.empty()) jc["note"] = c.note;
    j["checks"].push_back(jc);
  }
  return j;
}

void Report::write(const std::string& path) const {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  out << to_json().dump(2) << "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  char buf[64];
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

std::string output_dir(const std::string& cli_value) {
  if (!cli_value.empty()) return cli_value;
  if (const char* env = std::getenv("ASYMPWAVE_OUT")) return env;
  return "out";
}

}  // namespace asympwave
