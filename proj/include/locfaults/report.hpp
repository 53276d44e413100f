#pragma once

#include <json.hpp>
#include <sstream>
#include <string>

#include "locfaults/driver.hpp"

namespace locfaults {

// JSON shape:
//   {"counterexample": {...},
//    "entries": [{"deviations": [lines], "mcs": [[lines], ...]}, ...],
//    "timings": {"localize_ms": .., "preprocess_ms": ..}}
// Keys are sorted and arrays follow the report's deterministic order, so two
// identical runs render byte-identically apart from the timing values.
inline nlohmann::json report_to_json(const McsReport& report) {
  nlohmann::json j;
  j["counterexample"] = nlohmann::json::object();
  for (const auto& [name, value] : report.counterexample) j["counterexample"][name] = value;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : report.entries) {
    nlohmann::json entry;
    entry["deviations"] = std::vector<int>(e.deviations.begin(), e.deviations.end());
    entry["mcs"] = nlohmann::json::array();
    for (const auto& m : e.mcs_list) entry["mcs"].push_back(m.lines);
    j["entries"].push_back(std::move(entry));
  }
  j["timings"]["localize_ms"] = report.localize_ms;
  j["timings"]["preprocess_ms"] = report.preprocess_ms;
  return j;
}

inline std::string render_json(const McsReport& report) { return report_to_json(report).dump(2); }

// One text row per entry; deviated condition lines are marked with '*'.
inline std::string render_text(const McsReport& report) {
  std::ostringstream os;
  os << "counterexample:";
  for (const auto& [name, value] : report.counterexample) os << " " << name << "=" << value;
  os << "\n";
  for (const auto& e : report.entries) {
    os << "  ";
    if (e.deviations.empty()) {
      os << "{-}";
    } else {
      os << "{";
      bool first = true;
      for (int line : e.deviations) {
        if (!first) os << ",";
        os << line << "*";
        first = false;
      }
      os << "}";
    }
    os << "  mcs:";
    if (e.mcs_list.empty()) os << " (none)";
    for (const auto& m : e.mcs_list) {
      os << " {";
      for (size_t i = 0; i < m.lines.size(); ++i) {
        if (i) os << ",";
        os << m.lines[i];
      }
      os << "}";
    }
    os << "\n";
  }
  os << "timings: preprocess " << report.preprocess_ms << " ms, localize " << report.localize_ms
     << " ms\n";
  return os.str();
}

}  // namespace locfaults
