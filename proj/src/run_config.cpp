#include "csf/run_config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <numbers>

namespace csf {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad numeric value for '" + key + "': " + v);
  }
}

}  // namespace

std::string RunConfig::canonical_text() const {
  std::ostringstream os;
  os << "analyzers=" << analyzers << "\n"
     << "ball_radius=" << fmt(ball_radius) << "\n"
     << "command=" << command << "\n"
     << "dt=" << fmt(dt) << "\n"
     << "input=" << input << "\n"
     << "n_samples=" << n_samples << "\n"
     << "n_tau=" << n_tau << "\n"
     << "out_dir=" << out_dir << "\n"
     << "record_stride=" << record_stride << "\n"
     << "scheme=" << scheme << "\n"
     << "seed=" << seed << "\n"
     << "sheet_eps=" << fmt(sheet_eps) << "\n"
     << "slice_t=" << fmt(slice_t) << "\n"
     << "svg=" << (svg ? 1 : 0) << "\n"
     << "t0=" << fmt(t0) << "\n"
     << "t_end=" << fmt(t_end) << "\n"
     << "tau_hi=" << fmt(tau_hi) << "\n"
     << "tau_lo=" << fmt(tau_lo) << "\n"
     << "window_hi=" << fmt(window_hi) << "\n"
     << "window_lo=" << fmt(window_lo) << "\n"
     << "x0=" << fmt(x0) << "\n"
     << "y0=" << fmt(y0) << "\n";
  return os.str();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical_text()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "analyzers")
    analyzers = value;
  else if (key == "ball_radius")
    ball_radius = to_double(key, value);
  else if (key == "command")
    command = value;
  else if (key == "dt")
    dt = to_double(key, value);
  else if (key == "input")
    input = value;
  else if (key == "n_samples")
    n_samples = static_cast<int>(to_double(key, value));
  else if (key == "n_tau")
    n_tau = static_cast<int>(to_double(key, value));
  else if (key == "out_dir")
    out_dir = value;
  else if (key == "record_stride")
    record_stride = static_cast<int>(to_double(key, value));
  else if (key == "scheme")
    scheme = value;
  else if (key == "seed")
    seed = static_cast<std::uint64_t>(std::stoull(value));
  else if (key == "sheet_eps")
    sheet_eps = to_double(key, value);
  else if (key == "slice_t")
    slice_t = to_double(key, value);
  else if (key == "svg")
    svg = value == "1" || value == "true";
  else if (key == "t0")
    t0 = to_double(key, value);
  else if (key == "t_end")
    t_end = to_double(key, value);
  else if (key == "tau_hi")
    tau_hi = to_double(key, value);
  else if (key == "tau_lo")
    tau_lo = to_double(key, value);
  else if (key == "window_hi")
    window_hi = to_double(key, value);
  else if (key == "window_lo")
    window_lo = to_double(key, value);
  else if (key == "x0")
    x0 = to_double(key, value);
  else if (key == "y0")
    y0 = to_double(key, value);
  else
    throw std::invalid_argument("unknown config key: " + key);
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.resize(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key = value");
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

// ---------------------------------------------------------------------------
// Catalog specs.
// ---------------------------------------------------------------------------

namespace {

struct SpecParts {
  std::string name;
  std::map<std::string, double> kv;
};

SpecParts split_spec(const std::string& spec, const std::set<std::string>& allowed) {
  SpecParts p;
  const auto colon = spec.find(':');
  p.name = spec.substr(0, colon);
  if (colon != std::string::npos) {
    std::istringstream is(spec.substr(colon + 1));
    std::string item;
    while (std::getline(is, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("catalog spec entry is not key=value: " + item);
      const std::string key = trim(item.substr(0, eq));
      if (!allowed.count(key))
        throw std::invalid_argument("catalog spec '" + p.name + "' does not take key: " + key);
      p.kv[key] = to_double(key, trim(item.substr(eq + 1)));
    }
  }
  return p;
}

double get(const SpecParts& p, const std::string& key, double fallback) {
  const auto it = p.kv.find(key);
  return it == p.kv.end() ? fallback : it->second;
}

}  // namespace

bool is_catalog_spec(const std::string& spec) {
  static const std::set<std::string> names = {"circle", "grimreaper", "line",
                                              "oval",   "logspiral",  "sine"};
  return names.count(spec.substr(0, spec.find(':'))) > 0;
}

AnalyticFlow parse_catalog_flow(const std::string& spec) {
  const std::string name = spec.substr(0, spec.find(':'));
  if (name == "circle") {
    const auto p = split_spec(spec, {"r0", "t"});
    return shrinking_circle(get(p, "r0", 1.0));
  }
  if (name == "grimreaper") {
    const auto p = split_spec(spec, {"rot", "shiftx", "shifty", "t", "halfwidth", "height", "x"});
    return grim_reaper(get(p, "rot", 0.0), Vec2{get(p, "shiftx", 0.0), get(p, "shifty", 0.0)});
  }
  if (name == "line") {
    const auto p = split_spec(spec, {"angle", "offset", "mult", "t", "halfwidth"});
    return static_line(get(p, "angle", 0.0), get(p, "offset", 0.0),
                       static_cast<int>(get(p, "mult", 1.0)));
  }
  if (name == "oval") {
    split_spec(spec, {"t"});
    return angenent_oval();
  }
  throw std::invalid_argument("not an analytic flow (sample it as a curve): " + spec);
}

DiscreteCurve parse_catalog_curve(const std::string& spec, int n_samples) {
  const std::string name = spec.substr(0, spec.find(':'));
  if (name == "logspiral") {
    const auto p = split_spec(spec, {"a", "k", "phi0", "phi1"});
    return log_spiral(get(p, "a", 1.0), get(p, "k", 1.0), get(p, "phi0", 0.0),
                      get(p, "phi1", 4.0 * std::numbers::pi), n_samples);
  }
  if (name == "sine") {
    const auto p = split_spec(spec, {"x0", "x1"});
    return sine_graph(get(p, "x0", 0.0), get(p, "x1", 2.0 * std::numbers::pi), n_samples);
  }

  const AnalyticFlow flow = parse_catalog_flow(spec);
  const auto p = split_spec(spec, {"r0", "t", "rot", "shiftx", "shifty", "halfwidth", "height",
                                   "x", "angle", "offset", "mult"});
  const double t = get(p, "t", name == "oval" ? -0.5 : 0.0);
  if (flow.topology == Topology::closed) return flow.sample(t, n_samples);

  double a = flow.u_min, b = flow.u_max;
  if (name == "grimreaper") {
    if (p.kv.count("height")) {
      b = grim_reaper_param_for_height(get(p, "height", 0.0));
      a = -b;
    } else if (p.kv.count("halfwidth") || p.kv.count("x")) {
      b = grim_reaper_param_for_x(get(p, "halfwidth", get(p, "x", 0.0)));
      a = -b;
    }
  } else if (p.kv.count("halfwidth")) {
    b = get(p, "halfwidth", 0.0);
    a = -b;
  }
  return flow.sample(t, n_samples, a, b);
}

}  // namespace csf
