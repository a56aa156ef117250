#include "csf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace csf {

namespace {

std::vector<double> spacings_of(const DiscreteCurve& c) {
  const int n = c.size();
  std::vector<double> d;
  d.reserve(c.closed() ? n : n - 1);
  for (int i = 0; i + 1 < n; ++i) d.push_back(dist(c.pts[i], c.pts[i + 1]));
  if (c.closed()) d.push_back(dist(c.pts[n - 1], c.pts[0]));
  return d;
}

struct LaplacianCoeffs {
  std::vector<double> lo;  // weight of x_{i-1}
  std::vector<double> hi;  // weight of x_{i+1}; diagonal is -(lo + hi)
};

// Second-difference weights in arclength for nonuniform spacing; exact on
// quadratics, which keeps the scheme second order in space.
LaplacianCoeffs laplacian_coeffs(const DiscreteCurve& c, const std::vector<double>& d) {
  const int n = c.size();
  LaplacianCoeffs lc;
  lc.lo.assign(n, 0.0);
  lc.hi.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double h1, h2;
    if (c.closed()) {
      h1 = d[(i + n - 1) % n];
      h2 = d[i];
    } else {
      if (i == 0 || i == n - 1) continue;  // pinned, no row
      h1 = d[i - 1];
      h2 = d[i];
    }
    lc.lo[i] = 2.0 / (h1 * (h1 + h2));
    lc.hi[i] = 2.0 / (h2 * (h1 + h2));
  }
  return lc;
}

std::vector<Vec2> apply_laplacian(const DiscreteCurve& c, const LaplacianCoeffs& lc) {
  const int n = c.size();
  std::vector<Vec2> out(n);
  for (int i = 0; i < n; ++i) {
    if (!c.closed() && (i == 0 || i == n - 1)) continue;
    const Vec2& pm = c.pts[(i + n - 1) % n];
    const Vec2& pp = c.pts[(i + 1) % n];
    out[i] = lc.lo[i] * pm + lc.hi[i] * pp - (lc.lo[i] + lc.hi[i]) * c.pts[i];
  }
  return out;
}

constexpr double kPivotFloor = 1e-300;

// In-place Thomas solve of a tridiagonal system; diag/rhs are clobbered.
void thomas_solve(std::vector<double>& sub, std::vector<double>& diag, std::vector<double>& sup,
                  std::vector<double>& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    if (std::abs(diag[i - 1]) < kPivotFloor) throw std::runtime_error("singular tridiagonal solve");
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (std::abs(diag[n - 1]) < kPivotFloor) throw std::runtime_error("singular tridiagonal solve");
  rhs[n - 1] /= diag[n - 1];
  for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

// Solves (I - w * Laplacian) x = rhs for one coordinate. Closed curves use
// the Sherman-Morrison rank-one correction for the cyclic corners.
std::vector<double> implicit_solve_1d(const DiscreteCurve& c, const LaplacianCoeffs& lc, double w,
                                      const std::vector<double>& rhs_in) {
  const int n = c.size();
  if (!c.closed()) {
    const int m = n - 2;  // interior unknowns
    std::vector<double> sub(m), diag(m), sup(m), rhs(m);
    for (int i = 1; i <= m; ++i) {
      sub[i - 1] = -w * lc.lo[i];
      diag[i - 1] = 1.0 + w * (lc.lo[i] + lc.hi[i]);
      sup[i - 1] = -w * lc.hi[i];
      rhs[i - 1] = rhs_in[i];
    }
    rhs[0] += w * lc.lo[1] * rhs_in[0];          // pinned left end
    rhs[m - 1] += w * lc.hi[n - 2] * rhs_in[n - 1];  // pinned right end
    sub[0] = 0.0;
    sup[m - 1] = 0.0;
    thomas_solve(sub, diag, sup, rhs);
    std::vector<double> x(n);
    x[0] = rhs_in[0];
    x[n - 1] = rhs_in[n - 1];
    for (int i = 1; i <= m; ++i) x[i] = rhs[i - 1];
    return x;
  }

  std::vector<double> sub(n), diag(n), sup(n);
  for (int i = 0; i < n; ++i) {
    sub[i] = -w * lc.lo[i];
    diag[i] = 1.0 + w * (lc.lo[i] + lc.hi[i]);
    sup[i] = -w * lc.hi[i];
  }
  const double corner_lo = sub[0];      // couples x_0 to x_{n-1}
  const double corner_hi = sup[n - 1];  // couples x_{n-1} to x_0
  const double gamma = -diag[0];

  std::vector<double> dd(diag);
  dd[0] = diag[0] - gamma;
  dd[n - 1] = diag[n - 1] - corner_lo * corner_hi / gamma;

  std::vector<double> y(rhs_in), u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = corner_hi;
  {
    auto sub2 = sub, dd2 = dd, sup2 = sup;
    sub2[0] = 0.0;
    sup2[n - 1] = 0.0;
    thomas_solve(sub2, dd2, sup2, y);
    sub2 = sub;
    dd2 = dd;
    sup2 = sup;
    sub2[0] = 0.0;
    sup2[n - 1] = 0.0;
    thomas_solve(sub2, dd2, sup2, u);
  }
  const double vy = y[0] + corner_lo / gamma * y[n - 1];
  const double vu = u[0] + corner_lo / gamma * u[n - 1];
  const double fact = vy / (1.0 + vu);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = y[i] - fact * u[i];
  return x;
}

DiscreteCurve implicit_solve(const DiscreteCurve& shape, const DiscreteCurve& rhs_curve,
                             const LaplacianCoeffs& lc, double w,
                             const std::vector<Vec2>* rhs_extra) {
  const int n = shape.size();
  std::vector<double> rx(n), ry(n);
  for (int i = 0; i < n; ++i) {
    Vec2 r = rhs_curve.pts[i];
    if (rhs_extra) r += (*rhs_extra)[i];
    rx[i] = r.x;
    ry[i] = r.y;
  }
  const auto sx = implicit_solve_1d(shape, lc, w, rx);
  const auto sy = implicit_solve_1d(shape, lc, w, ry);
  DiscreteCurve out = shape;
  for (int i = 0; i < n; ++i) out.pts[i] = {sx[i], sy[i]};
  return out;
}

}  // namespace

DiscreteCurve step(const DiscreteCurve& c, double dt, Scheme scheme) {
  validate_curve(c);
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const auto d = spacings_of(c);
  const double h_min = *std::min_element(d.begin(), d.end());

  if (scheme == Scheme::explicit_euler) {
    if (!(dt <= 0.4 * h_min * h_min * (1.0 + 1e-12)))
      throw std::invalid_argument("explicit step exceeds stability bound 0.4*min_spacing^2");
    const GeometryField g = compute_geometry(c);
    DiscreteCurve out = c;
    const int lo = c.closed() ? 0 : 1;
    const int hi = c.closed() ? c.size() : c.size() - 1;
    for (int i = lo; i < hi; ++i) out.pts[i] += dt * g.kappa[i] * g.normal[i];
    return out;
  }

  if (!(dt <= h_min * (1.0 + 1e-12)))
    throw std::invalid_argument("semi-implicit step exceeds dt <= min_spacing");

  // Linearly implicit midpoint: a backward-Euler half-step supplies the
  // coefficient freeze point, then one trapezoidal step with those frozen
  // coefficients. Second order in time; plain backward Euler is not, and its
  // O(dt) error is the dominant term for smooth curves.
  const LaplacianCoeffs lc0 = laplacian_coeffs(c, d);
  const DiscreteCurve mid = implicit_solve(c, c, lc0, 0.5 * dt, nullptr);

  const auto d_mid = spacings_of(mid);
  const LaplacianCoeffs lc_mid = laplacian_coeffs(mid, d_mid);
  std::vector<Vec2> lap = apply_laplacian(c, lc_mid);
  for (Vec2& v : lap) v *= 0.5 * dt;
  return implicit_solve(c, c, lc_mid, 0.5 * dt, &lap);
}

FlowHistory evolve(const DiscreteCurve& c, double t_end, const EvolveControls& controls) {
  validate_curve(c);
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");

  FlowHistory h;
  h.meta.scheme = controls.scheme;
  h.meta.record_stride = std::max(1, controls.record_stride);
  h.meta.pinned_ends = !c.closed();
  h.meta.status = "completed";

  DiscreteCurve cur = c;
  const double initial_length = curve_length(c);
  double t = 0.0;
  long step_idx = 0;

  {
    const auto d = spacings_of(cur);
    const double h_min = *std::min_element(d.begin(), d.end());
    h.meta.dt = controls.dt > 0.0
                    ? controls.dt
                    : (controls.scheme == Scheme::explicit_euler ? 0.2 * h_min * h_min
                                                                 : 0.25 * h_min);
  }

  auto record = [&](double time) {
    h.times.push_back(time);
    h.slices.push_back(cur);
    h.geometry.push_back(compute_geometry(cur));
  };
  record(0.0);

  const double t_eps = 1e-14 * std::max(1.0, t_end);
  while (t < t_end - t_eps) {
    auto d = spacings_of(cur);
    double h_min = *std::min_element(d.begin(), d.end());
    const double h_max = *std::max_element(d.begin(), d.end());

    if (h_max / h_min > controls.resample_ratio) {
      const int n_before = cur.size();
      const double mean = curve_length(cur) / static_cast<double>(d.size());
      cur = resample_by_arclength(cur, mean);
      h.meta.resamples.push_back({step_idx, n_before, cur.size()});
      d = spacings_of(cur);
      h_min = *std::min_element(d.begin(), d.end());
    }

    if (h_min < controls.singular_frac * initial_length) {
      if (h.times.back() != t) record(t);
      h.meta.status = "singularity_stop";
      break;
    }

    // The remaining lifetime of a shrinking feature scales like 1/kappa^2;
    // without this cap the semi-implicit scheme (stable at dt ~ h) can step
    // straight across an extinction time and keep evolving garbage.
    double kappa_max = 0.0;
    for (double k : compute_geometry(cur).kappa) kappa_max = std::max(kappa_max, std::abs(k));
    const double life_cap = kappa_max > 0.0 ? 0.25 / (kappa_max * kappa_max)
                                            : std::numeric_limits<double>::infinity();

    const double bound = controls.scheme == Scheme::explicit_euler ? 0.4 * h_min * h_min : h_min;
    const double dt_step = std::min({h.meta.dt, 0.95 * bound, life_cap, t_end - t});
    cur = step(cur, dt_step, controls.scheme);
    bool finite = true;
    for (const Vec2& p : cur.pts)
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) finite = false;
    if (!finite) {
      h.meta.status = "singularity_stop";
      break;
    }
    t += dt_step;
    ++step_idx;
    if (step_idx % h.meta.record_stride == 0 || !(t < t_end - t_eps)) record(t);
  }
  h.meta.steps_taken = step_idx;
  return h;
}

std::vector<RescaledSlice> rescale_history(const FlowHistory& h, Vec2 x0, double t0) {
  for (double t : h.times) {
    if (!(t < t0))
      throw std::invalid_argument("rescaling origin must lie strictly after every slice");
  }
  std::vector<RescaledSlice> out;
  out.reserve(h.size());
  for (int i = 0; i < h.size(); ++i) {
    RescaledSlice rs;
    rs.tau = -std::log(t0 - h.times[i]);
    const double scale = std::exp(0.5 * rs.tau);
    rs.curve = h.slices[i];
    for (Vec2& p : rs.curve.pts) p = scale * (p - x0);
    rs.geometry = compute_geometry(rs.curve);
    out.push_back(std::move(rs));
  }
  return out;
}

}  // namespace csf
