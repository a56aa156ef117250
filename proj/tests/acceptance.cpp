// End-to-end gate for the laboratory: fourteen numbered checks, one line of
// output each, every tolerance pinned literally. The binary exits with the
// number of failed checks, so a zero exit is the green light.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "csf/analyzers.hpp"
#include "csf/catalog.hpp"
#include "csf/curve.hpp"
#include "csf/flow.hpp"
#include "csf/functionals.hpp"

namespace {

using namespace csf;

constexpr double kPi = std::numbers::pi;
const double kCircleEntropy = std::sqrt(2.0 * kPi / std::numbers::e);

int g_failures = 0;

// Deterministic across standard libraries, unlike uniform_real_distribution.
struct Uniform {
  std::uint64_t state;
  explicit Uniform(std::uint64_t seed) : state(seed) {}
  double next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  double in(double lo, double hi) { return lo + (hi - lo) * next(); }
};

template <typename Fn>
void criterion(int id, const char* name, double budget_s, Fn body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (elapsed > budget_s) {
    ok = false;
    detail += " [over budget]";
  }
  std::printf("[%s] %02d %-38s %s (%.1fs/%.0fs)\n", ok ? "PASS" : "FAIL", id, name,
              detail.c_str(), elapsed, budget_s);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double mean_radius(const DiscreteCurve& c) {
  Vec2 centroid{0.0, 0.0};
  for (const Vec2& p : c.pts) centroid += p;
  centroid *= 1.0 / c.size();
  double r = 0.0;
  for (const Vec2& p : c.pts) r += dist(p, centroid);
  return r / c.size();
}

// One grim-reaper time slice sampled for blow-down work: dense bands on both
// arms covering |y| <= 8 * e^{-tau/2} around the origin (the rescaled unit
// ball and the Gaussian mass live there) and a coarse pass over the rest of
// the curve down to the tip, which carries no kernel weight at these scales.
DiscreteCurve blow_down_slice(const AnalyticFlow& flow, double tau) {
  const double lam = std::exp(-tau);  // -t, and also the kernel scale at t0 = 0
  const double unit = std::exp(-0.5 * tau);
  const double u_in = grim_reaper_param_for_height(lam - 8.0 * unit);
  const double u_out = grim_reaper_param_for_height(lam + 8.0 * unit);
  const int band = static_cast<int>(std::ceil((u_out - u_in) / (unit / 40.0)));
  const int mid = static_cast<int>(std::ceil(2.0 * u_in / (unit / 2.0)));

  std::vector<double> us;
  us.reserve(2 * band + mid + 3);
  for (int k = 0; k <= band; ++k)
    us.push_back(-u_out + (u_out - u_in) * static_cast<double>(k) / band);
  for (int k = 1; k < mid; ++k)
    us.push_back(-u_in + 2.0 * u_in * static_cast<double>(k) / mid);
  for (int k = 0; k <= band; ++k)
    us.push_back(u_in + (u_out - u_in) * static_cast<double>(k) / band);

  DiscreteCurve c;
  c.pts.reserve(us.size());
  const double t = -lam;
  for (double u : us) c.pts.push_back(flow.position(u, t));
  validate_curve(c);
  return c;
}

FlowHistory blow_down_history(const AnalyticFlow& flow, double tau_lo, double tau_hi,
                              int n_slices) {
  FlowHistory h;
  h.meta.status = "analytic";
  for (int j = 0; j < n_slices; ++j) {
    const double tau = tau_lo + (tau_hi - tau_lo) * static_cast<double>(j) / (n_slices - 1);
    DiscreteCurve c = blow_down_slice(flow, tau);
    h.times.push_back(-std::exp(-tau));
    h.geometry.push_back(compute_geometry(c));
    h.slices.push_back(std::move(c));
  }
  return h;
}

// Best Gaussian weighted length over the scale at a fixed center: coarse log
// scan, then golden-section refinement around the best bracket.
double best_f_over_lambda(const DiscreteCurve& c, Vec2 center, double lam_lo, double lam_hi) {
  const int n_scan = 60;
  const double llo = std::log(lam_lo), lhi = std::log(lam_hi);
  double best = -1.0;
  int best_k = 0;
  for (int k = 0; k < n_scan; ++k) {
    const double v =
        gaussian_length(c, center, std::exp(llo + (lhi - llo) * k / (n_scan - 1.0)));
    if (v > best) best = v, best_k = k;
  }
  double a = llo + (lhi - llo) * std::max(0, best_k - 1) / (n_scan - 1.0);
  double b = llo + (lhi - llo) * std::min(n_scan - 1, best_k + 1) / (n_scan - 1.0);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = gaussian_length(c, center, std::exp(x1));
  double f2 = gaussian_length(c, center, std::exp(x2));
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + gr * (b - a);
      f2 = gaussian_length(c, center, std::exp(x2));
    } else {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - gr * (b - a);
      f1 = gaussian_length(c, center, std::exp(x1));
    }
  }
  return std::max({best, f1, f2});
}

// --------------------------------------------------------------------------
// The fourteen checks.
// --------------------------------------------------------------------------

bool check_circle_entropy(std::string& detail) {
  const DiscreteCurve c = shrinking_circle(1.0).sample(0.0, 512);
  const EntropyResult e = entropy_estimate(c);
  detail = fmt("entropy=%.6f in [1.515,1.5210]", e.value);
  return e.value >= 1.515 && e.value <= 1.5210;
}

bool check_segment_entropy(std::string& detail) {
  const DiscreteCurve c = static_line(0.0, 0.0).sample(0.0, 512, -50.0, 50.0);
  const EntropyResult e = entropy_estimate(c);
  detail = fmt("entropy=%.6f (want 1.0 +- 5e-3)", e.value);
  return std::abs(e.value - 1.0) <= 5e-3;
}

bool check_spiral(std::string& detail) {
  // Pitch angle pi/4: entropy bounded by 1/sin(pi/4) = sqrt(2), and the arc
  // between radii 1 and 5 has length (5 - 1)/sin(pi/4).
  const DiscreteCurve c = log_spiral(1.0, 1.0, 0.0, std::log(5.0), 2048);
  const double len = curve_length(c);
  const double len_ref = 4.0 * std::sqrt(2.0);
  const EntropyResult e = entropy_estimate(c);
  detail = fmt("entropy=%.6f<=%.6f len_rel_err=%.2e", e.value, std::sqrt(2.0) + 5e-3,
               std::abs(len - len_ref) / len_ref);
  return e.value <= std::sqrt(2.0) + 5e-3 && std::abs(len - len_ref) / len_ref <= 1e-4;
}

bool check_bounded_slope_graph(std::string& detail) {
  const DiscreteCurve period = sine_graph(0.0, 2.0 * kPi, 1024);
  const double tc_period = total_curvature(period, compute_geometry(period));
  const DiscreteCurve full = sine_graph(0.0, 40.0 * kPi, 20480);
  const double tc_full = total_curvature(full, compute_geometry(full));
  const DiscreteCurve for_entropy = sine_graph(0.0, 40.0 * kPi, 4096);
  const EntropyResult e = entropy_estimate(for_entropy);
  const double bound = entropy_bound_slope(1.0) + 5e-3;
  detail = fmt("entropy=%.6f<=%.6f tc=%.4f>=20*%.4f", e.value, bound, tc_full, tc_period);
  // Twenty single-period copies carry forty one-sided end stencils against the
  // full graph's two; at this density that biases the comparison by ~1.6e-4,
  // so the inequality gets a 1e-3 allowance (1.6e-5 of the compared value).
  return e.value <= bound && tc_full >= 20.0 * tc_period - 1e-3;
}

bool check_total_curvature(std::string& detail) {
  const DiscreteCurve circ = shrinking_circle(1.0).sample(0.0, 4096);
  const GeometryField gc = compute_geometry(circ);
  const double tc_c = total_curvature(circ, gc);
  const double af_c = total_curvature_area_formula(circ, gc, 64);

  const double uw = grim_reaper_param_for_x(kPi / 2.0 - 0.01);
  const DiscreteCurve gr = grim_reaper().sample(0.0, 4096, -uw, uw);
  const GeometryField gg = compute_geometry(gr);
  const double tc_g = total_curvature(gr, gg);
  const double af_g = total_curvature_area_formula(gr, gg, 64);

  const bool ok = std::abs(tc_c - 2.0 * kPi) <= 1e-4 &&
                  std::abs(tc_g - (kPi - 0.02)) <= 1e-3 &&
                  std::abs(af_c - tc_c) <= 0.02 * tc_c && std::abs(af_g - tc_g) <= 0.02 * tc_g;
  detail = fmt("circle=%.6f reaper=%.6f area_rel=(%.1e,%.1e)", tc_c, tc_g,
               std::abs(af_c - tc_c) / tc_c, std::abs(af_g - tc_g) / tc_g);
  return ok;
}

bool check_flow_accuracy(std::string& detail) {
  const double r_exact = std::sqrt(1.0 - 2.0 * 0.3);
  auto run = [](int n, double dt) {
    EvolveControls ctl;
    ctl.scheme = Scheme::semi_implicit;
    ctl.dt = dt;
    ctl.record_stride = 1000;
    const FlowHistory h = evolve(shrinking_circle(1.0).sample(0.0, n), 0.3, ctl);
    return mean_radius(h.slices.back());
  };
  const double err_coarse = std::abs(run(64, 2e-3) - r_exact);
  const double err_fine = std::abs(run(128, 1e-3) - r_exact);
  const double ratio = err_coarse / err_fine;
  detail = fmt("radius_err=%.2e ratio=%.2f", err_fine, ratio);
  return err_fine <= 1e-3 && std::abs((r_exact + err_fine) - 0.63246) <= 1e-3 + 1e-7 &&
         ratio >= 3.5;
}

bool check_backward_kernel(std::string& detail) {
  // (a) the self-shrinking circle viewed from its extinction point: constant.
  const FlowHistory hc = sample_history(shrinking_circle(1.0), 0.0, 0.45, 10, 2048);
  const std::vector<double> fc = huisken_series(hc, Vec2{0.0, 0.0}, 0.5);
  double dev = 0.0;
  for (double v : fc) dev = std::max(dev, std::abs(v - kCircleEntropy));

  // (b) a pinned numerical run: non-increasing at three spacetime points.
  EvolveControls ctl;
  ctl.dt = 1e-3;
  ctl.record_stride = 10;
  const FlowHistory hs = evolve(sine_graph(-kPi / 2.0, 7.0 * kPi / 2.0, 512), 0.5, ctl);
  const std::array<std::pair<Vec2, double>, 3> points = {
      std::pair<Vec2, double>{{kPi, 0.0}, 0.6},
      std::pair<Vec2, double>{{kPi / 2.0, 0.3}, 0.55},
      std::pair<Vec2, double>{{3.0 * kPi / 2.0, -0.3}, 0.7}};
  int bad_at = -1;
  for (const auto& [x0, t0] : points) {
    const std::vector<double> f = huisken_series(hs, x0, t0);
    std::vector<double> slack(f.size() > 0 ? f.size() - 1 : 0);
    for (size_t i = 0; i + 1 < f.size(); ++i) slack[i] = 1e-3 * (hs.times[i + 1] - hs.times[i]);
    const int inc = first_increase(f, slack);
    if (inc >= 0 && bad_at < 0) bad_at = inc;
  }
  detail = fmt("circle_dev=%.2e first_increase=%d", dev, bad_at);
  return dev <= 1e-4 && bad_at < 0;
}

bool check_zero_counts(std::string& detail) {
  EvolveControls ctl;
  ctl.dt = 1e-3;
  ctl.record_stride = 10;
  const FlowHistory hs = evolve(sine_graph(-kPi / 2.0, 7.0 * kPi / 2.0, 512), 0.5, ctl);
  int worst_increase = -1;
  int first_count = -1;
  for (double c : {-0.5, 0.2, 0.7}) {
    const ZeroCountSeries z = zero_count_series(hs, SturmField::theta_minus_c, c);
    if (first_count < 0) first_count = z.counts.front();
    for (size_t i = 0; i + 1 < z.counts.size(); ++i)
      if (z.counts[i + 1] > z.counts[i] && worst_increase < 0)
        worst_increase = static_cast<int>(i);
  }

  DiscreteCurve wav;
  wav.topology = Topology::closed;
  const int n = 512;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * i / n;
    const double r = 1.0 + 0.05 * std::cos(3.0 * a);
    wav.pts.push_back({r * std::cos(a), r * std::sin(a)});
  }
  const FlowHistory hw = evolve(wav, 0.35, ctl);
  const ZeroCountSeries zk =
      zero_count_series(hw, SturmField::kappa, std::nan(""));
  int kappa_increase = -1;
  for (size_t i = 0; i + 1 < zk.counts.size(); ++i)
    if (zk.counts[i + 1] > zk.counts[i] && kappa_increase < 0)
      kappa_increase = static_cast<int>(i);

  detail = fmt("theta_first_count=%d increases=(%d,%d) kappa_start=%d", first_count,
               worst_increase, kappa_increase, zk.counts.front());
  return worst_increase < 0 && kappa_increase < 0 && first_count >= 4 && zk.counts.front() == 6;
}

bool check_extremum_counts(std::string& detail) {
  const AnalyticFlow flow = grim_reaper();
  const double uw = grim_reaper_param_for_height(12.0);
  const FlowHistory h = sample_history(flow, 0.0, 3.0, 12, 2048, -uw, uw);
  Uniform rng(20240817u);
  int violations = 0;
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec2 center{rng.in(-4.0, 4.0), rng.in(-4.0, 10.0)};
    for (int j = 0; j < h.size(); ++j) {
      const DistanceProfile p =
          distance_profile(h.slices[j], h.geometry[j], center, h.times[j]);
      const ExtremaCount e = count_local_extrema(p);
      ++checked;
      if (e.n_min > 2 || e.n_max > 1) ++violations;
    }
  }
  detail = fmt("profiles=%d violations=%d", checked, violations);
  return violations == 0 && checked == 1200;
}

bool check_angle_preimages(std::string& detail) {
  const AnalyticFlow flow = grim_reaper();
  const double uw = grim_reaper_param_for_height(12.0);
  const FlowHistory h = sample_history(flow, 0.0, 3.0, 12, 2048, -uw, uw);
  Uniform rng(987654321u);
  int worst = 0;
  for (int k = 0; k < 50; ++k) {
    const double xi = rng.in(0.02, kPi - 0.02);
    for (int j = 0; j < h.size(); ++j)
      worst = std::max(worst, count_angle_preimages(h.slices[j], h.geometry[j], xi));
  }
  detail = fmt("max_preimages=%d (bound 3)", worst);
  return worst <= 3;
}

bool check_angle_bound(std::string& detail) {
  struct Case {
    const char* name;
    DiscreteCurve curve;
  };
  const double uw = grim_reaper_param_for_height(9.2);
  std::vector<Case> cases;
  cases.push_back({"reaper", grim_reaper().sample(0.0, 2048, -uw, uw)});
  cases.push_back({"line", static_line(0.3, 0.7).sample(0.0, 512, -50.0, 50.0)});
  cases.push_back({"line_x3", static_line(2.0, -1.0, 3).sample(0.0, 512, -50.0, 50.0)});
  std::string parts;
  bool ok = true;
  for (const Case& cs : cases) {
    const EntropyResult e = entropy_estimate(cs.curve);
    const long m = std::lround(e.value);
    const double bound = (2.0 * m + 1.0) * kPi;
    const GeometryField g = compute_geometry(cs.curve);
    double max_abs = 0.0;
    for (double th : g.theta) max_abs = std::max(max_abs, std::abs(th));
    ok = ok && m >= 1 && max_abs <= bound;
    parts += fmt("%s:m=%ld,max|theta|=%.2f<=%.2f ", cs.name, m, max_abs, bound);
  }
  detail = parts;
  return ok;
}

bool check_blow_down(std::string& detail) {
  const FlowHistory h = blow_down_history(grim_reaper(), -10.0, -5.0, 20);

  const std::vector<double> th2 = weighted_theta2_series(h, Vec2{0.0, 0.0}, 0.0);
  std::vector<double> slack(th2.size() - 1);
  for (size_t i = 0; i + 1 < th2.size(); ++i) slack[i] = 1e-3 * (h.times[i + 1] - h.times[i]);
  const int inc = first_increase(th2, slack);

  std::vector<RescaledSlice> rs = rescale_history(h, Vec2{0.0, 0.0}, 0.0);
  int sheet_fail = 0;
  for (const RescaledSlice& s : rs)
    if (sheet_decomposition(s, 1.0, 0.05).n_sheets != 2) ++sheet_fail;

  std::vector<RescaledSlice> rev(rs.rbegin(), rs.rend());
  const RotationTrace base = rotation_convergence(rev, 1.0, 0.05);

  const FlowHistory h_rot = blow_down_history(grim_reaper(0.7), -10.0, -5.0, 20);
  std::vector<RescaledSlice> rr = rescale_history(h_rot, Vec2{0.0, 0.0}, 0.0);
  std::vector<RescaledSlice> rev_rot(rr.rbegin(), rr.rend());
  const RotationTrace rot = rotation_convergence(rev_rot, 1.0, 0.05);

  const double shift = rot.limit - base.limit;
  detail = fmt("sheets_bad=%d limit=%.5f shift=%.5f theta2_inc=%d", sheet_fail, base.limit,
               shift, inc);
  return sheet_fail == 0 && base.converged && std::abs(base.limit - kPi / 2.0) <= 1e-3 &&
         rot.converged && std::abs(shift - 0.7) <= 1e-3 && inc < 0;
}

bool check_catalog_residuals(std::string& detail) {
  struct Gate {
    AnalyticFlow flow;
    std::array<double, 3> times;
    bool windowed = false;
    double a = 0.0, b = 0.0;
  };
  // The reaper is gated on |u| <= 6, where kappa runs from 1 down to 5e-3.
  // On the default window the arm tops are numerically straight (kappa about
  // 1e-5 at coordinates of size 12), and the curvature stencil's roundoff,
  // which scales like eps * |p| / h^2, swamps the signal at any density.
  const std::vector<Gate> gates = {
      {shrinking_circle(1.0), {-0.5, 0.0, 0.3}},
      {grim_reaper(), {-1.0, 0.0, 2.0}, true, -6.0, 6.0},
      {static_line(0.3, 0.7), {-1.0, 0.0, 1.0}},
      {angenent_oval(), {-1.5, -1.0, -0.5}},
  };
  double worst = 0.0;
  std::string worst_name;
  for (const Gate& g : gates) {
    for (double t : g.times) {
      const double r = g.windowed ? residual_csf(g.flow, t, 16384, g.a, g.b)
                                  : residual_csf(g.flow, t, 16384);
      if (r > worst) {
        worst = r;
        worst_name = g.flow.name;
      }
    }
  }
  detail = fmt("worst=%.2e (%s) <= 1e-6", worst, worst_name.c_str());
  return worst <= 1e-6;
}

bool check_translator_bracket(std::string& detail) {
  // Down-opening reaper, tip at the origin: centers (0, -Y) descend into the
  // slab between the asymptotes, where the weighted length approaches the
  // doubled-line value 2.
  const double uw = grim_reaper_param_for_height(260.0);
  const DiscreteCurve c = grim_reaper(kPi).sample(0.0, 8192, -uw, uw);
  const double lam_hi = 4.0 * curve_extent(c) * curve_extent(c);
  double sup = 0.0;
  double prev = 0.0;
  bool monotone = true;
  for (int y = 0; y <= 100; ++y) {
    const double f = best_f_over_lambda(c, Vec2{0.0, -static_cast<double>(y)}, 0.01, lam_hi);
    sup = std::max(sup, f);
    if (y > 10 && f < prev - 1e-9) monotone = false;
    prev = f;
  }
  detail = fmt("sup=%.5f in [1.85,2.0] monotone_past_10=%d", sup, monotone ? 1 : 0);
  return sup >= 1.85 && sup <= 2.0 && monotone;
}

}  // namespace

int main() {
  std::printf("acceptance: fourteen checks, tolerances pinned in source\n");
  criterion(1, "circle entropy", 10.0, check_circle_entropy);
  criterion(2, "segment entropy", 5.0, check_segment_entropy);
  criterion(3, "spiral entropy and arclength", 10.0, check_spiral);
  criterion(4, "bounded-slope graph entropy/curvature", 20.0, check_bounded_slope_graph);
  criterion(5, "total curvature estimators", 5.0, check_total_curvature);
  criterion(6, "flow accuracy and convergence order", 30.0, check_flow_accuracy);
  criterion(7, "backward-kernel monotonicity", 30.0, check_backward_kernel);
  criterion(8, "zero-count monotonicity", 60.0, check_zero_counts);
  criterion(9, "distance extremum counts", 60.0, check_extremum_counts);
  criterion(10, "angle preimage bound", 30.0, check_angle_preimages);
  criterion(11, "angle bound from rounded entropy", 10.0, check_angle_bound);
  criterion(12, "blow-down sheet structure", 30.0, check_blow_down);
  criterion(13, "analytic catalog residuals", 10.0, check_catalog_residuals);
  criterion(14, "translator entropy bracket", 60.0, check_translator_bracket);
  std::printf("acceptance: %d of 14 failed\n", g_failures);
  return g_failures;
}
