#pragma once

// Machine-readable verification outcomes. JSON schema (schema_version 1):
// top-level keys "suite", "config", "schema_version", "entries"; each entry
// has "name", "params", "status", optional "witness", and "millis" when
// timing collection is enabled.

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vertop/errors.hpp"

namespace vertop {

enum class CheckStatus { Pass, Fail, Error };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Error: return "error";
  }
  return "error";
}

struct ReportEntry {
  std::string name;
  std::map<std::string, std::string> params;
  CheckStatus status = CheckStatus::Error;
  std::optional<std::string> witness;
  std::optional<long long> millis;
};

struct Report {
  std::string suite;
  std::map<std::string, std::string> config;
  std::vector<ReportEntry> entries;

  bool all_pass() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const ReportEntry& e) { return e.status == CheckStatus::Pass; });
  }

  /// Stable assembly order: by entry name, then by parameters.
  void sort_entries() {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ReportEntry& a, const ReportEntry& b) {
                       if (a.name != b.name) return a.name < b.name;
                       return a.params < b.params;
                     });
  }
};

inline nlohmann::json to_json(const Report& r, bool with_timing = false) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    nlohmann::json je;
    je["name"] = e.name;
    je["params"] = e.params;
    je["status"] = to_string(e.status);
    if (e.witness) je["witness"] = *e.witness;
    if (with_timing && e.millis) je["millis"] = *e.millis;
    entries.push_back(std::move(je));
  }
  nlohmann::json out;
  out["schema_version"] = 1;
  out["suite"] = r.suite;
  out["config"] = r.config;
  out["entries"] = std::move(entries);
  return out;
}

inline std::string emit_json(const Report& r, bool with_timing = false) {
  return to_json(r, with_timing).dump(2) + "\n";
}

inline Report parse_report(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("schema_version") || j["schema_version"] != 1)
    throw model_error("report: missing or unsupported schema_version");
  Report r;
  r.suite = j.value("suite", std::string{});
  if (j.contains("config"))
    for (const auto& [k, v] : j["config"].items()) r.config[k] = v.get<std::string>();
  for (const auto& je : j.value("entries", nlohmann::json::array())) {
    ReportEntry e;
    e.name = je.value("name", std::string{});
    if (je.contains("params"))
      for (const auto& [k, v] : je["params"].items()) e.params[k] = v.get<std::string>();
    std::string st = je.value("status", std::string{"error"});
    e.status = st == "pass" ? CheckStatus::Pass
                            : st == "fail" ? CheckStatus::Fail : CheckStatus::Error;
    if (je.contains("witness")) e.witness = je["witness"].get<std::string>();
    if (je.contains("millis")) e.millis = je["millis"].get<long long>();
    r.entries.push_back(std::move(e));
  }
  return r;
}

inline std::string emit_text(const Report& r) {
  std::string out = "suite: " + r.suite + "\n";
  for (const auto& [k, v] : r.config) out += "  " + k + " = " + v + "\n";
  for (const auto& e : r.entries) {
    out += std::string("[") + to_string(e.status) + "] " + e.name;
    if (!e.params.empty()) {
      out += " (";
      bool first = true;
      for (const auto& [k, v] : e.params) {
        if (!first) out += ", ";
        out += k + "=" + v;
        first = false;
      }
      out += ")";
    }
    if (e.millis) out += " [" + std::to_string(*e.millis) + " ms]";
    out += "\n";
    if (e.witness) out += "    witness: " + *e.witness + "\n";
  }
  out += r.all_pass() ? "result: all pass\n" : "result: FAILURES\n";
  return out;
}

}  // namespace vertop
