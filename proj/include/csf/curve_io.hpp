#pragma once

#include <string>

#include "json.hpp"

#include "csf/curve.hpp"
#include "csf/flow.hpp"

namespace csf {

// Curve JSON: {"topology": "open"|"closed", "multiplicity": m, "points": [[x,y],...]}.
// Round-trips bit-exactly for finite doubles (shortest-round-trip printing).
nlohmann::json curve_to_json(const DiscreteCurve& c);
DiscreteCurve curve_from_json(const nlohmann::json& j);

DiscreteCurve load_curve(const std::string& path);
void save_curve(const DiscreteCurve& c, const std::string& path);

// History JSONL: one {"t": ..., "curve": {...}} per line, plus a JSON sidecar
// (same path with ".meta.json" appended) holding scheme metadata and the run
// config hash. Geometry is recomputed on load, not persisted.
void save_history(const FlowHistory& h, const std::string& path, const std::string& config_hash);
FlowHistory load_history(const std::string& path);

}  // namespace csf
