#include "csf/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "csf/analyzers.hpp"
#include "csf/catalog.hpp"
#include "csf/curve_io.hpp"
#include "csf/functionals.hpp"
#include "csf/report.hpp"

namespace csf {

namespace {

namespace fs = std::filesystem;

// Outputs are written to "<path>.tmp" and renamed into place, so a failure
// mid-write never leaves a partial file behind.
void commit_file(const std::string& path) { fs::rename(path + ".tmp", path); }

std::string out_path(const RunConfig& cfg, const std::string& file) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / file).string();
}

Scheme scheme_of(const std::string& name) {
  if (name == "explicit" || name == "explicit_euler") return Scheme::explicit_euler;
  if (name == "semi" || name == "semi_implicit") return Scheme::semi_implicit;
  throw std::invalid_argument("unknown scheme: " + name +
                              " (expected explicit_euler or semi_implicit)");
}

bool has_window(const RunConfig& cfg) { return cfg.window_lo != 0.0 || cfg.window_hi != 0.0; }

// Catalog specs turn into curves here; --slice-t overrides the spec's own t
// key when nonzero. Anything else is a curve JSON path.
DiscreteCurve input_curve(const RunConfig& cfg) {
  if (!is_catalog_spec(cfg.input)) return load_curve(cfg.input);
  std::string spec = cfg.input;
  if (cfg.slice_t != 0.0) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", cfg.slice_t);
    spec += (spec.find(':') == std::string::npos ? ":t=" : ",t=") + std::string(buf);
  }
  if (has_window(cfg)) {
    const AnalyticFlow flow = parse_catalog_flow(cfg.input);
    const double t = cfg.slice_t != 0.0 ? cfg.slice_t
                                        : (flow.name == "angenent_oval" ? -0.5 : 0.0);
    return flow.sample(t, cfg.n_samples, cfg.window_lo, cfg.window_hi);
  }
  return parse_catalog_curve(spec, cfg.n_samples);
}

// Histories come from an evolve output file, or from exact sampling when the
// input is an analytic catalog flow: n_tau uniform times on [slice_t, t_end].
FlowHistory input_history(const RunConfig& cfg) {
  if (!is_catalog_spec(cfg.input)) return load_history(cfg.input);
  const AnalyticFlow flow = parse_catalog_flow(cfg.input);
  const int n_times = std::max(cfg.n_tau, 2);
  if (!(cfg.slice_t < cfg.t_end))
    throw std::invalid_argument("analytic history needs slice_t < t_end");
  if (has_window(cfg))
    return sample_history(flow, cfg.slice_t, cfg.t_end, n_times, cfg.n_samples, cfg.window_lo,
                          cfg.window_hi);
  return sample_history(flow, cfg.slice_t, cfg.t_end, n_times, cfg.n_samples);
}

int fail(const char* cmd, const std::exception& e) {
  std::cerr << cmd << ": " << e.what() << "\n";
  return 1;
}

std::vector<double> length_series(const FlowHistory& h) {
  std::vector<double> out;
  out.reserve(h.size());
  for (int i = 0; i < h.size(); ++i) out.push_back(h.geometry[i].length(h.slices[i]));
  return out;
}

CheckResult series_check(const std::string& name, const FlowHistory& h,
                         std::vector<double> series, std::vector<double> slack) {
  CheckResult c;
  c.name = name;
  c.t = h.times;
  c.first_violation = first_increase(series, slack);
  c.pass = c.first_violation < 0;
  c.value = series.empty() ? 0.0 : series.back();
  c.tolerance = slack.empty() ? 0.0 : slack.front();
  c.series = std::move(series);
  return c;
}

std::vector<double> to_doubles(const std::vector<int>& v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_evolve(const RunConfig& cfg) {
  try {
    const DiscreteCurve c = input_curve(cfg);
    EvolveControls controls;
    controls.scheme = scheme_of(cfg.scheme);
    controls.dt = cfg.dt;
    controls.record_stride = cfg.record_stride;
    const FlowHistory h = evolve(c, cfg.t_end, controls);

    const std::string path = out_path(cfg, "history.jsonl");
    save_history(h, path + ".tmp", cfg.hash());
    fs::rename(path + ".tmp", path);
    fs::rename(path + ".tmp.meta.json", path + ".meta.json");

    std::cout << "evolve: " << h.size() << " slices to t=" << h.times.back()
              << " status=" << h.meta.status << " steps=" << h.meta.steps_taken
              << " hash=" << cfg.hash() << "\n";
    return 0;
  } catch (const std::exception& e) {
    return fail("evolve", e);
  }
}

int cmd_measure(const RunConfig& cfg) {
  try {
    const DiscreteCurve c = input_curve(cfg);
    const GeometryField g = compute_geometry(c);
    const EntropyResult ent = entropy_estimate(c);
    const double tc = total_curvature(c, g);
    const int n_xi = 64;
    const double tc_area = total_curvature_area_formula(c, g, n_xi);

    nlohmann::json j;
    j["config_hash"] = cfg.hash();
    j["input"] = cfg.input;
    j["n_samples"] = c.size();
    j["multiplicity"] = c.multiplicity;
    j["length"] = g.length(c);
    j["entropy"] = {{"value", ent.value},
                    {"center", {ent.center.x, ent.center.y}},
                    {"lambda", ent.lambda},
                    {"evaluations", ent.evaluations},
                    {"converged", ent.converged}};
    const double rounded = std::round(ent.value);
    j["rounded_entropy"] = static_cast<int>(rounded);
    j["rounding_flag"] = std::abs(ent.value - rounded) > 0.2;  // not near an integer
    j["total_curvature"] = tc;
    j["total_curvature_area_formula"] = {
        {"value", tc_area},
        {"n_xi", n_xi},
        {"rel_gap", std::abs(tc_area - tc) / std::max(tc, 1e-300)}};

    const std::string path = out_path(cfg, "measure.json");
    {
      std::ofstream os(path + ".tmp");
      if (!os) throw std::runtime_error("cannot open for writing: " + path);
      os << j.dump(2) << "\n";
    }
    commit_file(path);

    std::cout << "measure: entropy=" << ent.value << " total_curvature=" << tc
              << " length=" << j["length"].get<double>() << "\n";
    return 0;
  } catch (const std::exception& e) {
    return fail("measure", e);
  }
}

int cmd_verify(const RunConfig& cfg) {
  try {
    const FlowHistory h = input_history(cfg);
    const bool open = !h.slices.empty() && !h.slices[0].closed();
    const Vec2 x0{cfg.x0, cfg.y0};
    const bool have_t0 = h.size() > 0 && cfg.t0 > h.times.back();

    std::vector<std::string> want;
    {
      std::istringstream is(cfg.analyzers);
      std::string item;
      while (std::getline(is, item, ',')) want.push_back(item);
    }
    const bool all = want.size() == 1 && want[0] == "all";
    auto selected = [&](const std::string& name) {
      if (all) return true;
      for (const auto& w : want)
        if (w == name) return true;
      return false;
    };

    DiagnosticsReport rep;
    rep.flow_id = cfg.input;
    rep.config_hash = cfg.hash();

    if (selected("length")) {
      auto series = length_series(h);
      std::vector<double> slack(series.size());
      for (size_t i = 0; i < series.size(); ++i) slack[i] = 1e-8 * std::max(1.0, series[i]);
      rep.checks.push_back(series_check("length_monotone", h, std::move(series), slack));
    }
    if (selected("huisken") && (have_t0 || !all)) {
      auto series = huisken_series(h, x0, cfg.t0);
      std::vector<double> slack(series.size());
      for (size_t i = 0; i + 1 < series.size(); ++i)
        slack[i] = 1e-3 * (h.times[i + 1] - h.times[i]);
      rep.checks.push_back(series_check("huisken_monotone", h, std::move(series), slack));
    }
    if (selected("theta2") && open && (have_t0 || !all)) {
      auto series = weighted_theta2_series(h, x0, cfg.t0);
      std::vector<double> slack(series.size());
      for (size_t i = 0; i + 1 < series.size(); ++i)
        slack[i] = 1e-3 * (h.times[i + 1] - h.times[i]);
      rep.checks.push_back(series_check("theta2_monotone", h, std::move(series), slack));
    }
    auto sturm_check = [&](const std::string& name, SturmField field, double c) {
      const auto zc = zero_count_series(h, field, c, x0);
      CheckResult cr = series_check(name, h, to_doubles(zc.counts),
                                    std::vector<double>(zc.counts.size(), 0.0));
      if (zc.collar_applied) cr.note = "endpoint collar applied";
      rep.checks.push_back(std::move(cr));
    };
    if (selected("sturm_theta") && open) sturm_check("sturm_theta", SturmField::theta_minus_c, 0.0);
    if (selected("sturm_phi_s")) sturm_check("sturm_phi_s", SturmField::phi_s, 0.0);
    if (selected("sturm_kappa"))
      sturm_check("sturm_kappa", SturmField::kappa, std::nan(""));
    if (selected("extrema")) {
      const auto paths = extremum_paths(h, x0);
      CheckResult c;
      c.name = "extremum_paths";
      c.pass = true;
      int ambiguous = 0;
      for (const auto& p : paths) {
        if (!p.monotone_ok || !p.kappa_sign_ok) c.pass = false;
        if (p.ambiguous) ++ambiguous;
      }
      c.value = static_cast<double>(paths.size());
      if (ambiguous > 0) c.note = std::to_string(ambiguous) + " ambiguous matches";
      rep.checks.push_back(std::move(c));
    }
    if (selected("angle_range") && open) {
      const auto ranges = angle_range_series(h);
      CheckResult c;
      c.name = "angle_range_nesting";
      c.tolerance = 1e-3;
      c.first_violation = first_nesting_violation(ranges, c.tolerance);
      c.pass = c.first_violation < 0;
      c.t = h.times;
      for (const auto& r : ranges) c.series.push_back(r[1] - r[0]);
      c.value = c.series.empty() ? 0.0 : c.series.back();
      rep.checks.push_back(std::move(c));
    }
    if (selected("divergence") && open) {
      const auto d = distance_divergence_check(h.slices.back(), x0);
      CheckResult c;
      c.name = "distance_divergence";
      c.pass = d.both();
      c.value = (d.start ? 1.0 : 0.0) + (d.end ? 1.0 : 0.0);
      c.bound = 2.0;
      rep.checks.push_back(std::move(c));
    }

    const std::string jpath = out_path(cfg, "verify.json");
    save_report(rep, jpath + ".tmp");
    commit_file(jpath);
    const std::string cpath = out_path(cfg, "verify.csv");
    save_report_csv(rep, cpath + ".tmp");
    commit_file(cpath);

    for (const CheckResult& c : rep.checks)
      std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " value=" << c.value
                << (c.first_violation >= 0
                        ? " first_violation=" + std::to_string(c.first_violation)
                        : "")
                << "\n";
    return rep.all_pass() ? 0 : 2;
  } catch (const std::exception& e) {
    return fail("verify", e);
  }
}

int cmd_rescale(const RunConfig& cfg) {
  try {
    const Vec2 x0{cfg.x0, cfg.y0};
    FlowHistory h;
    if (is_catalog_spec(cfg.input)) {
      // Times t_j = t0 - e^{-tau_j} on a uniform tau grid, sampled exactly.
      const AnalyticFlow flow = parse_catalog_flow(cfg.input);
      if (cfg.n_tau < 2) throw std::invalid_argument("n_tau must be at least 2");
      h.meta.status = "analytic";
      h.meta.record_stride = 1;
      for (int j = 0; j < cfg.n_tau; ++j) {
        const double tau =
            cfg.tau_lo + (cfg.tau_hi - cfg.tau_lo) * j / static_cast<double>(cfg.n_tau - 1);
        const double t = cfg.t0 - std::exp(-tau);
        const DiscreteCurve c = has_window(cfg)
                                    ? flow.sample(t, cfg.n_samples, cfg.window_lo, cfg.window_hi)
                                    : flow.sample(t, cfg.n_samples);
        h.times.push_back(t);
        h.geometry.push_back(compute_geometry(c));
        h.slices.push_back(c);
      }
    } else {
      h = load_history(cfg.input);
    }
    const auto slices = rescale_history(h, x0, cfg.t0);

    std::ostringstream csv;
    csv.precision(17);
    csv << "tau,n_sheets,graphical,axis_angle,theta2_integral,mean_radius\n";
    for (const RescaledSlice& s : slices) {
      const auto sd = sheet_decomposition(s, cfg.ball_radius, cfg.sheet_eps);
      double theta2 = std::nan("");
      if (!s.curve.closed()) {
        std::vector<double> w(s.geometry.theta.size());
        for (size_t i = 0; i < w.size(); ++i) w[i] = s.geometry.theta[i] * s.geometry.theta[i];
        theta2 = gaussian_weighted_integral(s.curve, w, Vec2{0.0, 0.0}, 1.0);
      }
      double mean_r = 0.0;
      for (const Vec2& p : s.curve.pts) mean_r += norm(p);
      mean_r /= s.curve.size();
      csv << s.tau << "," << sd.n_sheets << "," << (sd.graphical ? 1 : 0) << ","
          << sd.axis_angle << "," << theta2 << "," << mean_r << "\n";
    }

    const std::string path = out_path(cfg, "rescale.csv");
    {
      std::ofstream os(path + ".tmp");
      if (!os) throw std::runtime_error("cannot open for writing: " + path);
      os << csv.str();
    }
    commit_file(path);

    if (cfg.svg) {
      const double R = 3.0 * cfg.ball_radius;
      std::ostringstream svg;
      svg << "<svg xmlns='http://www.w3.org/2000/svg' viewBox='" << -R << " " << -R << " "
          << 2 * R << " " << 2 * R << "'>\n";
      svg << "<circle cx='0' cy='0' r='" << cfg.ball_radius
          << "' fill='none' stroke='#ccc' stroke-width='" << 0.01 * R << "'/>\n";
      for (size_t k = 0; k < slices.size(); ++k) {
        const auto& c = slices[k].curve;
        svg << "<polyline fill='none' stroke='hsl(" << (240.0 * k / slices.size())
            << ",70%,50%)' stroke-width='" << 0.005 * R << "' points='";
        for (const Vec2& p : c.pts) svg << p.x << "," << -p.y << " ";
        if (c.closed() && !c.pts.empty()) svg << c.pts[0].x << "," << -c.pts[0].y;
        svg << "'/>\n";
      }
      svg << "</svg>\n";
      const std::string spath = out_path(cfg, "rescale.svg");
      std::ofstream os(spath + ".tmp");
      if (!os) throw std::runtime_error("cannot open for writing: " + spath);
      os << svg.str();
      os.close();
      commit_file(spath);
    }

    std::cout << "rescale: " << slices.size() << " slices, tau in [" << slices.front().tau
              << ", " << slices.back().tau << "]\n";
    return 0;
  } catch (const std::exception& e) {
    return fail("rescale", e);
  }
}

int cmd_report(const RunConfig& cfg) {
  try {
    std::ifstream is(cfg.input);
    if (!is) throw std::runtime_error("cannot open report JSON: " + cfg.input);
    nlohmann::json j;
    is >> j;
    if (!j.contains("checks") || !j["checks"].is_array())
      throw std::runtime_error("input is not a report JSON (no checks array): " + cfg.input);

    DiagnosticsReport rep;
    rep.flow_id = j.value("flow_id", "");
    rep.config_hash = j.value("config_hash", "");
    for (const auto& jc : j["checks"]) {
      CheckResult c;
      c.name = jc.value("name", "");
      c.pass = jc.value("pass", false);
      c.value = jc.value("value", 0.0);
      c.bound = jc.value("bound", 0.0);
      c.tolerance = jc.value("tolerance", 0.0);
      c.first_violation = jc.value("first_violation", -1);
      c.note = jc.value("note", "");
      if (jc.contains("t")) c.t = jc["t"].get<std::vector<double>>();
      if (jc.contains("series")) c.series = jc["series"].get<std::vector<double>>();
      rep.checks.push_back(std::move(c));
    }

    const std::string path = out_path(cfg, "report.csv");
    save_report_csv(rep, path + ".tmp");
    commit_file(path);

    int n_pass = 0;
    for (const CheckResult& c : rep.checks) n_pass += c.pass ? 1 : 0;
    std::cout << "report: " << n_pass << "/" << rep.checks.size() << " checks pass, csv at "
              << path << "\n";
    return 0;
  } catch (const std::exception& e) {
    return fail("report", e);
  }
}

}  // namespace csf
