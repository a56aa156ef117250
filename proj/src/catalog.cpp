#include "csf/catalog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHuge = 1e300;

double lncosh(double u) {
  const double a = std::abs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double gudermann(double u) { return std::asin(std::tanh(u)); }

}  // namespace

DiscreteCurve AnalyticFlow::sample(double t, int n) const {
  return sample(t, n, u_min, u_max);
}

DiscreteCurve AnalyticFlow::sample(double t, int n, double a, double b) const {
  if (!(t > t_min && t < t_max))
    throw std::invalid_argument(name + ": time " + std::to_string(t) + " outside validity");
  if (n < 3) throw std::invalid_argument("need at least 3 samples");
  DiscreteCurve c;
  c.topology = topology;
  c.multiplicity = multiplicity;
  c.pts.reserve(n);
  if (topology == Topology::closed) {
    for (int j = 0; j < n; ++j)
      c.pts.push_back(position(static_cast<double>(j) / n, t));  // loop parameter in [0,1)
  } else {
    if (!(b > a)) throw std::invalid_argument("empty parameter window");
    for (int j = 0; j < n; ++j)
      c.pts.push_back(position(a + (b - a) * j / (n - 1.0), t));
  }
  validate_curve(c);
  return c;
}

AnalyticFlow shrinking_circle(double r0) {
  if (!(r0 > 0.0)) throw std::invalid_argument("circle radius must be positive");
  AnalyticFlow f;
  f.name = "circle";
  f.topology = Topology::closed;
  f.t_min = -kHuge;
  f.t_max = 0.5 * r0 * r0;  // extinction
  f.known = {std::sqrt(2.0 * kPi / std::numbers::e), true, 2.0 * kPi, 1, "round point"};
  f.position = [r0](double u, double t) {
    const double r = std::sqrt(r0 * r0 - 2.0 * t);
    const double a = 2.0 * kPi * u;
    return Vec2{r * std::cos(a), r * std::sin(a)};
  };
  return f;
}

AnalyticFlow grim_reaper(double rotation, Vec2 shift) {
  AnalyticFlow f;
  f.name = "grim_reaper";
  f.topology = Topology::open;
  f.t_min = -kHuge;
  f.t_max = kHuge;
  f.u_min = -12.0;  // default window, height about 11.3; callers widen as needed
  f.u_max = 12.0;
  f.known = {2.0, false, kPi, 2, "line along the translation axis, multiplicity 2"};
  f.position = [rotation, shift](double u, double t) {
    return shift + rotate(Vec2{gudermann(u), t + lncosh(u)}, rotation);
  };
  return f;
}

double grim_reaper_param_for_height(double height) {
  if (!(height > 0.0)) throw std::invalid_argument("height must be positive");
  // cosh(s) = e^height; beyond the overflow knee the asymptote s = h + ln 2
  // is exact to double precision.
  if (height > 20.0) return height + std::numbers::ln2;
  return std::acosh(std::exp(height));
}

double grim_reaper_param_for_x(double x) {
  if (!(std::abs(x) < 0.5 * kPi))
    throw std::invalid_argument("grim reaper is a graph only over |x| < pi/2");
  return std::atanh(std::sin(x));
}

AnalyticFlow static_line(double angle, double offset, int multiplicity) {
  if (multiplicity < 1) throw std::invalid_argument("multiplicity must be >= 1");
  AnalyticFlow f;
  f.name = "line";
  f.topology = Topology::open;
  f.multiplicity = multiplicity;
  f.t_min = -kHuge;
  f.t_max = kHuge;
  f.u_min = -50.0;
  f.u_max = 50.0;
  f.known = {static_cast<double>(multiplicity), true, 0.0, multiplicity, "itself"};
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  const Vec2 base = offset * perp(dir);
  f.position = [dir, base](double u, double) { return base + u * dir; };
  return f;
}

AnalyticFlow angenent_oval() {
  AnalyticFlow f;
  f.name = "angenent_oval";
  f.topology = Topology::closed;
  f.t_min = -kHuge;
  f.t_max = 0.0;
  f.known = {2.0, false, 2.0 * kPi, 2, "round point forward, two parallel lines backward"};
  // Loop parameter u in [0,1): x = x_max cos(2 pi u) grades samples toward the
  // tips, where the graph branch y = arccosh(e^{-t} cos x) turns vertical.
  f.position = [](double u, double t) {
    if (!(t < 0.0)) throw std::invalid_argument("oval defined for t < 0");
    const double x_max = std::acos(std::exp(t));
    const double psi = 2.0 * kPi * u;
    const double x = x_max * std::cos(psi);
    const double arg = std::max(1.0, std::exp(-t) * std::cos(x));
    const double y = std::acosh(arg);
    return Vec2{x, psi < kPi ? y : -y};
  };
  return f;
}

DiscreteCurve log_spiral(double a, double k, double phi_lo, double phi_hi, int n) {
  if (!(a > 0.0)) throw std::invalid_argument("spiral scale must be positive");
  if (k == 0.0) throw std::invalid_argument("spiral pitch must be nonzero");
  if (!(phi_hi > phi_lo)) throw std::invalid_argument("empty angle range");
  if (n < 3) throw std::invalid_argument("need at least 3 samples");
  DiscreteCurve c;
  c.topology = Topology::open;
  c.pts.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double phi = phi_lo + (phi_hi - phi_lo) * j / (n - 1.0);
    const double r = a * std::exp(k * phi);
    c.pts.push_back({r * std::cos(phi), r * std::sin(phi)});
  }
  validate_curve(c);
  return c;
}

DiscreteCurve sine_graph(double x_lo, double x_hi, int n) {
  if (!(x_hi > x_lo)) throw std::invalid_argument("empty x range");
  if (n < 3) throw std::invalid_argument("need at least 3 samples");
  DiscreteCurve c;
  c.topology = Topology::open;
  c.pts.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double x = x_lo + (x_hi - x_lo) * j / (n - 1.0);
    c.pts.push_back({x, std::sin(x)});
  }
  validate_curve(c);
  return c;
}

namespace {

double residual_on(const AnalyticFlow& flow, double t, int n, double a, double b) {
  constexpr double kH = 1e-5;
  const DiscreteCurve c0 = flow.sample(t, n, a, b);
  const DiscreteCurve cp = flow.sample(t + kH, n, a, b);
  const DiscreteCurve cm = flow.sample(t - kH, n, a, b);
  const GeometryField g = compute_geometry(c0);

  // Endpoint stencils are one-sided; skip two samples at each open end so the
  // residual reflects the formula, not the boundary stencil.
  const int lo = c0.closed() ? 0 : 2;
  const int hi = c0.closed() ? c0.size() : c0.size() - 2;
  double worst = 0.0;
  for (int i = lo; i < hi; ++i) {
    const Vec2 v = (1.0 / (2.0 * kH)) * (cp.pts[i] - cm.pts[i]);
    worst = std::max(worst, std::abs(dot(v, g.normal[i]) - g.kappa[i]));
  }
  return worst;
}

}  // namespace

double residual_csf(const AnalyticFlow& flow, double t, int n_samples) {
  return residual_on(flow, t, n_samples, flow.u_min, flow.u_max);
}

double residual_csf(const AnalyticFlow& flow, double t, int n_samples, double a, double b) {
  return residual_on(flow, t, n_samples, a, b);
}

FlowHistory sample_history(const AnalyticFlow& flow, double t_lo, double t_hi, int n_times,
                           int n_samples) {
  return sample_history(flow, t_lo, t_hi, n_times, n_samples, flow.u_min, flow.u_max);
}

FlowHistory sample_history(const AnalyticFlow& flow, double t_lo, double t_hi, int n_times,
                           int n_samples, double a, double b) {
  if (n_times < 2) throw std::invalid_argument("need at least 2 time slices");
  if (!(t_hi > t_lo)) throw std::invalid_argument("empty time range");
  FlowHistory h;
  h.meta.status = "analytic";
  h.meta.pinned_ends = false;  // exact solutions carry no truncation artifact
  h.meta.record_stride = 1;
  for (int i = 0; i < n_times; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (n_times - 1.0);
    h.times.push_back(t);
    h.slices.push_back(flow.sample(t, n_samples, a, b));
    h.geometry.push_back(compute_geometry(h.slices.back()));
  }
  return h;
}

}  // namespace csf
