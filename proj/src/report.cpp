#include "csf/report.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace csf {

bool DiagnosticsReport::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

const CheckResult* DiagnosticsReport::find(const std::string& name) const {
  for (const CheckResult& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void DiagnosticsReport::merge(const DiagnosticsReport& other) {
  for (const CheckResult& c : other.checks) {
    if (find(c.name)) continue;  // first occurrence wins
    checks.push_back(c);
  }
  std::stable_sort(checks.begin(), checks.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
}

nlohmann::json report_to_json(const DiagnosticsReport& r) {
  nlohmann::json j;
  j["flow_id"] = r.flow_id;
  j["config_hash"] = r.config_hash;
  j["all_pass"] = r.all_pass();
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& c : r.checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["value"] = c.value;
    jc["bound"] = c.bound;
    jc["tolerance"] = c.tolerance;
    if (c.first_violation >= 0) jc["first_violation"] = c.first_violation;
    if (!c.note.empty()) jc["note"] = c.note;
    if (!c.t.empty()) jc["t"] = c.t;
    if (!c.series.empty()) jc["series"] = c.series;
    j["checks"].push_back(std::move(jc));
  }
  return j;
}

void save_report(const DiagnosticsReport& r, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << report_to_json(r).dump(2) << "\n";
}

void save_report_csv(const DiagnosticsReport& r, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "t,check_name,value,bound,pass\n";
  os.precision(17);
  for (const CheckResult& c : r.checks) {
    if (c.series.empty()) {
      os << "," << c.name << "," << c.value << "," << c.bound << "," << (c.pass ? 1 : 0) << "\n";
      continue;
    }
    for (size_t i = 0; i < c.series.size(); ++i) {
      if (i < c.t.size())
        os << c.t[i];
      os << "," << c.name << "," << c.series[i] << "," << c.bound << "," << (c.pass ? 1 : 0)
         << "\n";
    }
  }
}

}  // namespace csf
