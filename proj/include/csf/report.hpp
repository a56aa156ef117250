#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace csf {

// One named invariant check. Scalar checks fill value/bound; series checks
// also carry the sampled series so the CSV export can plot them. A failing
// check records the first violating index.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  int first_violation = -1;
  std::string note;
  std::vector<double> t;
  std::vector<double> series;
};

struct DiagnosticsReport {
  std::string flow_id;
  std::string config_hash;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;
  // Deterministic merge: checks sorted by name, later duplicates rejected.
  void merge(const DiagnosticsReport& other);
};

nlohmann::json report_to_json(const DiagnosticsReport& r);
void save_report(const DiagnosticsReport& r, const std::string& path);

// CSV columns: t, check_name, value, bound, pass. '.' decimals, '\n' endings,
// header row first. Scalar checks emit one row with t empty.
void save_report_csv(const DiagnosticsReport& r, const std::string& path);

}  // namespace csf
