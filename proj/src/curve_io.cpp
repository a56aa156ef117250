#include "csf/curve_io.hpp"

#include <fstream>
#include <stdexcept>

namespace csf {

using nlohmann::json;

json curve_to_json(const DiscreteCurve& c) {
  json pts = json::array();
  for (const Vec2& p : c.pts) pts.push_back(json::array({p.x, p.y}));
  return json{{"topology", c.closed() ? "closed" : "open"},
              {"multiplicity", c.multiplicity},
              {"points", std::move(pts)}};
}

DiscreteCurve curve_from_json(const json& j) {
  DiscreteCurve c;
  const std::string topo = j.at("topology").get<std::string>();
  if (topo == "closed")
    c.topology = Topology::closed;
  else if (topo == "open")
    c.topology = Topology::open;
  else
    throw std::invalid_argument("topology must be \"open\" or \"closed\", got \"" + topo + "\"");
  c.multiplicity = j.value("multiplicity", 1);
  for (const auto& p : j.at("points")) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("point must be an [x, y] pair");
    c.pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  validate_curve(c);
  return c;
}

DiscreteCurve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open curve file: " + path);
  json j;
  in >> j;
  return curve_from_json(j);
}

void save_curve(const DiscreteCurve& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write curve file: " + path);
  out << curve_to_json(c).dump() << '\n';
}

namespace {

const char* scheme_name(Scheme s) {
  return s == Scheme::explicit_euler ? "explicit" : "semi_implicit";
}

Scheme scheme_from_name(const std::string& s) {
  if (s == "explicit") return Scheme::explicit_euler;
  if (s == "semi_implicit") return Scheme::semi_implicit;
  throw std::invalid_argument("unknown scheme name: " + s);
}

}  // namespace

void save_history(const FlowHistory& h, const std::string& path, const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write history file: " + path);
  for (int i = 0; i < h.size(); ++i) {
    out << json{{"t", h.times[i]}, {"curve", curve_to_json(h.slices[i])}}.dump() << '\n';
  }

  json resamples = json::array();
  for (const auto& e : h.meta.resamples)
    resamples.push_back(
        {{"step", e.step_index}, {"n_before", e.n_before}, {"n_after", e.n_after}});
  const json meta{{"config_hash", config_hash},
                  {"scheme", scheme_name(h.meta.scheme)},
                  {"dt", h.meta.dt},
                  {"steps_taken", h.meta.steps_taken},
                  {"record_stride", h.meta.record_stride},
                  {"pinned_ends", h.meta.pinned_ends},
                  {"status", h.meta.status},
                  {"resamples", std::move(resamples)}};
  std::ofstream mout(path + ".meta.json", std::ios::binary);
  if (!mout) throw std::runtime_error("cannot write history sidecar: " + path + ".meta.json");
  mout << meta.dump(2) << '\n';
}

FlowHistory load_history(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open history file: " + path);
  FlowHistory h;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    h.times.push_back(j.at("t").get<double>());
    h.slices.push_back(curve_from_json(j.at("curve")));
    h.geometry.push_back(compute_geometry(h.slices.back()));
  }
  for (size_t i = 1; i < h.times.size(); ++i) {
    if (!(h.times[i] > h.times[i - 1]))
      throw std::runtime_error("history times not strictly increasing");
  }

  std::ifstream min(path + ".meta.json");
  if (min) {
    json meta;
    min >> meta;
    h.meta.scheme = scheme_from_name(meta.value("scheme", "semi_implicit"));
    h.meta.dt = meta.value("dt", 0.0);
    h.meta.steps_taken = meta.value("steps_taken", 0L);
    h.meta.record_stride = meta.value("record_stride", 1);
    h.meta.pinned_ends = meta.value("pinned_ends", false);
    h.meta.status = meta.value("status", "completed");
    for (const auto& e : meta.value("resamples", json::array()))
      h.meta.resamples.push_back(
          {e.value("step", 0L), e.value("n_before", 0), e.value("n_after", 0)});
  } else {
    // Histories can be hand-written; infer pinning so the analyzer collar
    // logic errs toward applying itself only when clearly warranted.
    h.meta.status = "completed";
    h.meta.pinned_ends = false;
  }
  return h;
}

}  // namespace csf
