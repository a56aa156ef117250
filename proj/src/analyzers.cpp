#include "csf/analyzers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "csf/functionals.hpp"

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

// ---------------------------------------------------------------------------
// Squared distance.
// ---------------------------------------------------------------------------

DistanceProfile distance_profile(const DiscreteCurve& c, const GeometryField& g, Vec2 center,
                                 double time) {
  DistanceProfile p;
  p.center = center;
  p.time = time;
  p.topology = c.topology;
  p.s = g.s;
  p.phi.reserve(c.size());
  for (const Vec2& q : c.pts) p.phi.push_back(norm2(q - center) + 2.0 * time);
  return p;
}

namespace {

// Compressed slope runs of a profile: +1/-1 for rises/falls above the plateau
// tolerance, plateaus dissolved into whichever transition they separate.
struct SlopeRuns {
  std::vector<int> sign;       // nonzero states in order
  std::vector<int> boundary;   // first sample index after each run ends
};

SlopeRuns slope_runs(std::span<const double> phi, Topology topo, double tol_abs) {
  const int n = static_cast<int>(phi.size());
  const int n_seg = topo == Topology::closed ? n : n - 1;
  SlopeRuns r;
  for (int j = 0; j < n_seg; ++j) {
    const double d = phi[(j + 1) % n] - phi[j];
    const int s = d > tol_abs ? 1 : (d < -tol_abs ? -1 : 0);
    if (s == 0) continue;
    if (r.sign.empty() || r.sign.back() != s) {
      r.sign.push_back(s);
      r.boundary.push_back(j + 1);
    } else {
      r.boundary.back() = j + 1;
    }
  }
  return r;
}

}  // namespace

ExtremaCount count_local_extrema(const DistanceProfile& p, double tol) {
  const int n = static_cast<int>(p.phi.size());
  if (n < 16) throw std::invalid_argument("extremum count needs at least 16 samples");
  double vmax = 0.0;
  for (double v : p.phi) vmax = std::max(vmax, std::abs(v));
  const auto runs = slope_runs(p.phi, p.topology, tol * vmax);

  ExtremaCount out;
  const int k = static_cast<int>(runs.sign.size());
  if (k < 2) return out;  // monotone or flat profile

  auto emit = [&](int prev, int next, int sample_index) {
    if (prev == -1 && next == 1) {
      ++out.n_min;
      out.min_indices.push_back(sample_index);
    } else if (prev == 1 && next == -1) {
      ++out.n_max;
      out.max_indices.push_back(sample_index);
    }
  };

  // The extremum sits where one run hands over to the next; the recorded
  // boundary is the first sample past the previous run, i.e. the plateau's
  // first sample when a plateau separates them.
  for (int i = 0; i + 1 < k; ++i)
    emit(runs.sign[i], runs.sign[i + 1], runs.boundary[i] % n);
  if (p.topology == Topology::closed)
    emit(runs.sign[k - 1], runs.sign[0], runs.boundary[k - 1] % n);
  return out;
}

CriticalKind classify_critical_point(const DiscreteCurve& c, const GeometryField& g, int index,
                                     Vec2 center, double tol) {
  if (index < 0 || index >= c.size()) throw std::invalid_argument("sample index out of range");
  const Vec2 r = c.pts[index] - center;
  const double rn = norm(r);
  if (std::abs(dot(r, g.tangent[index])) > 1e-6 * std::max(rn, 1e-300))
    throw std::invalid_argument("center is not on the normal line at the sample");
  const double beta = g.kappa[index] * dot(center - c.pts[index], g.normal[index]);
  if (beta > 1.0 + tol) return CriticalKind::local_max;
  if (beta < 1.0 - tol) return CriticalKind::local_min;
  return CriticalKind::degenerate;
}

Vec2 osculating_center(const DiscreteCurve& c, const GeometryField& g, int index) {
  if (index < 0 || index >= c.size()) throw std::invalid_argument("sample index out of range");
  if (std::abs(g.kappa[index]) <= 1e-10)
    throw std::invalid_argument("osculating center undefined at a flat point");
  return c.pts[index] + (1.0 / g.kappa[index]) * g.normal[index];
}

// ---------------------------------------------------------------------------
// Zero counting.
// ---------------------------------------------------------------------------

namespace {

// Linear token scan: tolerance-wide runs count once; direct sign flips count
// once; a zero run between same-sign stretches still counts (tangential
// touch, the degenerate case that strictly drops the count one step later).
int scan_zeros(std::span<const int> states) {
  int count = 0;
  int prev = 2;
  bool in_zero = false;
  for (int s : states) {
    if (s == 0) {
      if (!in_zero) {
        in_zero = true;
        ++count;
      }
    } else {
      if (in_zero)
        in_zero = false;
      else if (prev != 2 && s != prev)
        ++count;
      prev = s;
    }
  }
  return count;
}

}  // namespace

ZeroCount sturm_zero_count(std::span<const double> values, Topology topology, double tol) {
  const int n = static_cast<int>(values.size());
  if (n < 8) throw std::invalid_argument("zero count needs at least 8 samples");
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) return {0, true};
  const double tol_abs = tol * vmax;

  std::vector<int> states(n);
  int first_nonzero = -1;
  for (int i = 0; i < n; ++i) {
    states[i] = values[i] > tol_abs ? 1 : (values[i] < -tol_abs ? -1 : 0);
    if (states[i] != 0 && first_nonzero < 0) first_nonzero = i;
  }
  if (first_nonzero < 0) return {0, true};

  if (topology == Topology::open) return {scan_zeros(states), false};

  // Cyclic: rotate to a nonzero state and close the loop by repeating it, so
  // runs and flips across the wrap are seen exactly once.
  std::vector<int> rotated;
  rotated.reserve(n + 1);
  for (int i = 0; i <= n; ++i) rotated.push_back(states[(first_nonzero + i) % n]);
  return {scan_zeros(rotated), false};
}

ZeroCountSeries zero_count_series(const FlowHistory& h, SturmField field, double c, Vec2 center,
                                  double tol) {
  ZeroCountSeries out;
  const bool pinned = h.meta.pinned_ends;
  for (int k = 0; k < h.size(); ++k) {
    const DiscreteCurve& curve = h.slices[k];
    const GeometryField& g = h.geometry[k];
    const int n = curve.size();

    std::vector<double> v(n);
    double scale = 0.0;  // natural magnitude of the field, for the roundoff floor
    switch (field) {
      case SturmField::theta_minus_c:
        if (curve.closed())
          throw std::invalid_argument("theta field needs open topology (global angle lift)");
        for (int i = 0; i < n; ++i) v[i] = g.theta[i] - c;
        scale = std::max(1.0, std::abs(c));
        for (double th : g.theta) scale = std::max(scale, std::abs(th));
        break;
      case SturmField::phi_s:
        for (int i = 0; i < n; ++i) {
          v[i] = dot(curve.pts[i] - center, g.tangent[i]);
          scale = std::max(scale, norm(curve.pts[i] - center));
        }
        break;
      case SturmField::kappa: {
        double c_eff = c;
        if (std::isnan(c)) {
          // Length-weighted mean curvature of the slice.
          double num = 0.0;
          for (int i = 0; i + 1 < n; ++i)
            num += 0.5 * (g.kappa[i] + g.kappa[i + 1]) * (g.s[i + 1] - g.s[i]);
          double len = g.s[n - 1];
          if (curve.closed()) {
            const double dw = dist(curve.pts[n - 1], curve.pts[0]);
            num += 0.5 * (g.kappa[n - 1] + g.kappa[0]) * dw;
            len += dw;
          }
          c_eff = num / len;
        }
        for (int i = 0; i < n; ++i) v[i] = g.kappa[i] - c_eff;
        scale = 1.0 / std::max(g.s[n - 1], 1e-300);
        for (double kv : g.kappa) scale = std::max(scale, std::abs(kv));
        break;
      }
    }

    // A field at roundoff level has no well-defined sign pattern; report it
    // degenerate instead of counting noise flips. The floor is relative to the
    // field's natural magnitude, not to its own max (which would normalize the
    // noise back up to order one).
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    const bool roundoff_field = vmax <= 1e-10 * scale;

    int i_lo = 0, i_hi = n - 1;
    if (pinned && !curve.closed() && k > 0) {
      const double L = g.s[n - 1];
      const double w = std::min(5.0 * std::sqrt(std::max(0.0, h.times[k] - h.times[0])), 0.25 * L);
      while (i_lo < n && g.s[i_lo] < w) ++i_lo;
      while (i_hi >= 0 && g.s[i_hi] > L - w) --i_hi;
      out.collar_applied = true;
    }
    const int remaining = i_hi - i_lo + 1;
    out.excluded.push_back(n - std::max(remaining, 0));
    if (roundoff_field || remaining < 8) {
      out.counts.push_back(0);
      out.degenerate.push_back(true);
      continue;
    }
    const auto zc = sturm_zero_count(std::span<const double>(v).subspan(i_lo, remaining),
                                     i_lo == 0 && i_hi == n - 1 ? curve.topology : Topology::open,
                                     tol);
    out.counts.push_back(zc.count);
    out.degenerate.push_back(zc.degenerate);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extremum paths.
// ---------------------------------------------------------------------------

namespace {

struct SliceExtrema {
  std::vector<int> index;      // sample index
  std::vector<double> s_norm;  // arclength normalized to [0, 1)
  std::vector<double> value;
};

double arc_distance(double a, double b, bool cyclic) {
  double d = std::abs(a - b);
  if (cyclic) d = std::min(d, 1.0 - d);
  return d;
}

}  // namespace

std::vector<ExtremumPath> extremum_paths(const FlowHistory& h, Vec2 center, double plateau_tol) {
  if (h.size() < 3) throw std::invalid_argument("extremum paths need at least 3 slices");

  const int n_slices = h.size();
  std::vector<SliceExtrema> mins(n_slices), maxs(n_slices);
  for (int k = 0; k < n_slices; ++k) {
    const auto prof = distance_profile(h.slices[k], h.geometry[k], center, h.times[k]);
    const auto ext = count_local_extrema(prof, plateau_tol);
    const double L = h.geometry[k].length(h.slices[k]);
    auto fill = [&](const std::vector<int>& idx, SliceExtrema& se) {
      for (int i : idx) {
        se.index.push_back(i);
        se.s_norm.push_back(h.geometry[k].s[i] / L);
        se.value.push_back(prof.phi[i]);
      }
    };
    fill(ext.min_indices, mins[k]);
    fill(ext.max_indices, maxs[k]);
  }

  std::vector<ExtremumPath> paths;

  auto track = [&](const std::vector<SliceExtrema>& per_slice, CriticalKind kind) {
    const bool cyclic = !h.slices.empty() && h.slices[0].closed();
    std::vector<int> path_of;  // active path id per extremum of the previous slice
    for (int k = 0; k < n_slices; ++k) {
      const auto& cur = per_slice[k];
      std::vector<int> new_path_of(cur.index.size(), -1);
      if (k > 0) {
        const auto& prev = per_slice[k - 1];
        // Candidate links sorted by arclength proximity; each side used once.
        struct Link {
          double d;
          int from, to;
        };
        std::vector<Link> links;
        for (size_t a = 0; a < prev.index.size(); ++a)
          for (size_t b = 0; b < cur.index.size(); ++b)
            links.push_back({arc_distance(prev.s_norm[a], cur.s_norm[b], cyclic),
                             static_cast<int>(a), static_cast<int>(b)});
        std::sort(links.begin(), links.end(), [&](const Link& x, const Link& y) {
          if (x.d != y.d) return x.d < y.d;
          return cur.s_norm[x.to] < cur.s_norm[y.to];  // tie: smaller arclength
        });
        std::vector<bool> from_used(prev.index.size(), false), to_used(cur.index.size(), false);
        for (size_t li = 0; li < links.size(); ++li) {
          const Link& l = links[li];
          if (from_used[l.from] || to_used[l.to]) continue;
          from_used[l.from] = true;
          to_used[l.to] = true;
          new_path_of[l.to] = path_of[l.from];
          const bool tie = li + 1 < links.size() && links[li + 1].d == l.d &&
                           (links[li + 1].from == l.from || links[li + 1].to == l.to);
          if (tie) paths[path_of[l.from]].ambiguous = true;
        }
      }
      for (size_t b = 0; b < cur.index.size(); ++b) {
        if (new_path_of[b] < 0) {
          new_path_of[b] = static_cast<int>(paths.size());
          paths.push_back({});
          paths.back().kind = kind;
        }
        ExtremumPath& p = paths[new_path_of[b]];
        p.slice.push_back(k);
        p.index.push_back(cur.index[b]);
        p.value.push_back(cur.value[b]);
      }
      path_of = std::move(new_path_of);
    }
  };

  track(mins, CriticalKind::local_min);
  track(maxs, CriticalKind::local_max);

  for (ExtremumPath& p : paths) {
    for (size_t j = 1; j < p.value.size(); ++j) {
      const double slack = 1e-6 * std::max(1.0, std::abs(p.value[j]));
      const bool ok = p.kind == CriticalKind::local_min ? p.value[j] >= p.value[j - 1] - slack
                                                        : p.value[j] <= p.value[j - 1] + slack;
      if (!ok) p.monotone_ok = false;
    }
    if (p.kind == CriticalKind::local_max) {
      int ref = 0;
      for (size_t j = 0; j < p.slice.size(); ++j) {
        const GeometryField& g = h.geometry[p.slice[j]];
        double kmax = 0.0;
        for (double kv : g.kappa) kmax = std::max(kmax, std::abs(kv));
        const double kv = g.kappa[p.index[j]];
        const int sgn = kv > 1e-12 * kmax ? 1 : (kv < -1e-12 * kmax ? -1 : 0);
        if (sgn == 0) continue;
        if (ref == 0)
          ref = sgn;
        else if (sgn != ref)
          p.kappa_sign_ok = false;
      }
    }
  }
  return paths;
}

// ---------------------------------------------------------------------------
// Monotone series.
// ---------------------------------------------------------------------------

std::vector<double> huisken_series(const FlowHistory& h, Vec2 x0, double t0) {
  std::vector<double> out;
  out.reserve(h.size());
  for (int i = 0; i < h.size(); ++i) {
    if (!(h.times[i] < t0))
      throw std::invalid_argument("monotone series needs every slice before t0");
    out.push_back(gaussian_length(h.slices[i], x0, t0 - h.times[i]));
  }
  return out;
}

std::vector<double> weighted_theta2_series(const FlowHistory& h, Vec2 x0, double t0) {
  std::vector<double> out;
  out.reserve(h.size());
  for (int i = 0; i < h.size(); ++i) {
    if (h.slices[i].closed())
      throw std::invalid_argument("theta^2 series needs open topology (global angle lift)");
    if (!(h.times[i] < t0))
      throw std::invalid_argument("monotone series needs every slice before t0");
    const GeometryField& g = h.geometry[i];
    std::vector<double> w(g.theta.size());
    for (size_t j = 0; j < w.size(); ++j) w[j] = g.theta[j] * g.theta[j];
    out.push_back(gaussian_weighted_integral(h.slices[i], w, x0, t0 - h.times[i]));
  }
  return out;
}

std::vector<std::array<double, 2>> angle_range_series(const FlowHistory& h) {
  std::vector<std::array<double, 2>> out;
  out.reserve(h.size());
  for (int k = 0; k < h.size(); ++k) {
    if (h.slices[k].closed())
      throw std::invalid_argument("angle range needs open topology");
    const auto& th = h.geometry[k].theta;
    const int n = static_cast<int>(th.size());
    double lo = th[1], hi = th[1];
    for (int i = 1; i + 1 < n; ++i) {  // interior samples only
      lo = std::min(lo, th[i]);
      hi = std::max(hi, th[i]);
    }
    out.push_back({lo, hi});
  }
  return out;
}

int first_increase(std::span<const double> series, std::span<const double> slack) {
  for (size_t i = 0; i + 1 < series.size(); ++i) {
    if (series[i + 1] > series[i] + slack[i]) return static_cast<int>(i);
  }
  return -1;
}

int first_increase(std::span<const double> series, double slack) {
  const std::vector<double> s(series.size(), slack);
  return first_increase(series, std::span<const double>(s));
}

int first_nesting_violation(std::span<const std::array<double, 2>> ranges, double slack) {
  for (size_t i = 0; i + 1 < ranges.size(); ++i) {
    if (ranges[i + 1][0] < ranges[i][0] - slack || ranges[i + 1][1] > ranges[i][1] + slack)
      return static_cast<int>(i);
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Rescaled-slice structure.
// ---------------------------------------------------------------------------

SheetDecomposition sheet_decomposition(const RescaledSlice& slice, double R, double eps) {
  if (!(R > 0.0)) throw std::invalid_argument("clip radius must be positive");
  const DiscreteCurve& c = slice.curve;
  const int n = c.size();

  std::vector<char> in(n, 0);
  int n_in = 0;
  for (int i = 0; i < n; ++i) {
    if (norm2(c.pts[i]) <= R * R) {
      in[i] = 1;
      ++n_in;
    }
  }
  SheetDecomposition out;
  out.clipped_samples = n_in;
  if (n_in == 0) return out;

  // Maximal runs of in-ball samples; the wrap joins first and last runs of a
  // closed curve.
  std::vector<std::vector<int>> comps;
  int i = 0;
  while (i < n) {
    if (!in[i]) {
      ++i;
      continue;
    }
    comps.emplace_back();
    while (i < n && in[i]) comps.back().push_back(i++);
  }
  if (c.closed() && comps.size() > 1 && in[0] && in[n - 1]) {
    auto& first = comps.front();
    auto& last = comps.back();
    last.insert(last.end(), first.begin(), first.end());
    comps.erase(comps.begin());
  }

  // One common axis through the origin: principal direction of the clipped
  // sample cloud (second-moment matrix, not centered).
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int j = 0; j < n; ++j) {
    if (!in[j]) continue;
    sxx += c.pts[j].x * c.pts[j].x;
    sxy += c.pts[j].x * c.pts[j].y;
    syy += c.pts[j].y * c.pts[j].y;
  }
  Vec2 axis;
  if (std::abs(sxy) < 1e-300) {
    axis = sxx >= syy ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  } else {
    const double lam = 0.5 * (sxx + syy + std::hypot(sxx - syy, 2.0 * sxy));
    axis = Vec2{sxy, lam - sxx};
    axis *= 1.0 / norm(axis);
  }
  double ang = std::atan2(axis.y, axis.x);
  ang = std::fmod(ang, kPi);
  if (ang < 0.0) ang += kPi;
  out.axis_angle = ang;
  const Vec2 dir{std::cos(ang), std::sin(ang)};
  const Vec2 nrm = perp(dir);

  out.graphical = true;
  for (const auto& comp : comps) {
    int u_dir = 0;
    double prev_u = 0.0, prev_v = 0.0;
    bool first = true;
    for (int idx : comp) {
      const double u = dot(c.pts[idx], dir);
      const double v = dot(c.pts[idx], nrm);
      if (std::abs(v) > eps) out.graphical = false;
      if (!first) {
        const double du = u - prev_u;
        const int s = du > 0.0 ? 1 : (du < 0.0 ? -1 : 0);
        if (s == 0 || (u_dir != 0 && s != u_dir)) out.graphical = false;  // not a graph
        if (u_dir == 0) u_dir = s;
        if (s != 0 && std::abs((v - prev_v) / du) > eps) out.graphical = false;
      }
      prev_u = u;
      prev_v = v;
      first = false;
    }
  }
  out.n_sheets = static_cast<int>(comps.size()) * c.multiplicity;
  return out;
}

RotationTrace rotation_convergence(std::span<const RescaledSlice> slices, double R, double eps) {
  if (slices.size() < 5) throw std::invalid_argument("rotation trace needs at least 5 slices");
  for (size_t i = 1; i < slices.size(); ++i) {
    if (!(slices[i].tau < slices[i - 1].tau))
      throw std::invalid_argument("slices must have strictly decreasing tau");
  }

  RotationTrace out;
  for (const RescaledSlice& s : slices) {
    const auto sd = sheet_decomposition(s, R, eps);
    if (sd.n_sheets == 0 || !sd.graphical) {
      ++out.excluded;
      continue;
    }
    double a = sd.axis_angle;
    if (!out.angle.empty()) a += kPi * std::round((out.angle.back() - a) / kPi);
    out.tau.push_back(s.tau);
    out.angle.push_back(a);
  }
  if (out.angle.size() < 5)
    throw std::invalid_argument("fewer than 5 graphical slices in rotation trace");

  const size_t half = out.angle.size() / 2;
  double tv = 0.0;
  for (size_t i = half; i + 1 < out.angle.size(); ++i)
    tv += std::abs(out.angle[i + 1] - out.angle[i]);
  out.converged = tv < 1e-3;
  out.limit = out.angle.back();
  return out;
}

// ---------------------------------------------------------------------------
// Tails.
// ---------------------------------------------------------------------------

EndDivergence distance_divergence_check(const DiscreteCurve& c, Vec2 center) {
  if (c.closed()) throw std::invalid_argument("divergence check needs open topology");
  const int n = c.size();
  const int n10 = std::max(1, n / 10);

  auto median_dist = [&](int lo, int hi) {  // half-open sample range
    std::vector<double> d;
    d.reserve(hi - lo);
    for (int i = lo; i < hi; ++i) d.push_back(dist(c.pts[i], center));
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    return d[d.size() / 2];
  };
  auto all_beyond = [&](int lo, int hi, double ref) {
    for (int i = lo; i < hi; ++i)
      if (!(dist(c.pts[i], center) > ref)) return false;
    return true;
  };

  EndDivergence out;
  out.start = all_beyond(0, n10, median_dist(n10, 2 * n10));
  out.end = all_beyond(n - n10, n, median_dist(n - 2 * n10, n - n10));
  return out;
}

// ---------------------------------------------------------------------------
// Heat residuals.
// ---------------------------------------------------------------------------

namespace {

// Second derivative in arclength at interior sample j, nonuniform 3-point.
double second_derivative(const std::vector<double>& f, const std::vector<double>& s, int j) {
  const double h1 = s[j] - s[j - 1], h2 = s[j + 1] - s[j];
  return 2.0 * (f[j - 1] / (h1 * (h1 + h2)) - f[j] / (h1 * h2) + f[j + 1] / (h2 * (h1 + h2)));
}

void require_aligned(const FlowHistory& h, int i) {
  if (i < 1 || i + 1 >= h.size())
    throw std::invalid_argument("residual needs slices on both sides in time");
  if (h.slices[i - 1].size() != h.slices[i].size() ||
      h.slices[i + 1].size() != h.slices[i].size())
    throw std::invalid_argument("residual needs equal sample counts (disable resampling)");
}

int collar_samples(const FlowHistory& h, int i) {
  if (!h.meta.pinned_ends) return 2;  // one-sided stencil guard only
  const GeometryField& g = h.geometry[i];
  const double L = g.s.back();
  const double w = std::min(5.0 * std::sqrt(std::max(0.0, h.times[i] - h.times[0])), 0.25 * L);
  int k = 0;
  while (k < static_cast<int>(g.s.size()) && g.s[k] < w) ++k;
  return std::max(2, k);
}

}  // namespace

double heat_residual_theta(const FlowHistory& h, int i) {
  require_aligned(h, i);
  const GeometryField& gm = h.geometry[i - 1];
  const GeometryField& g0 = h.geometry[i];
  const GeometryField& gp = h.geometry[i + 1];
  const int n = h.slices[i].size();
  const double dt2 = h.times[i + 1] - h.times[i - 1];

  // The per-slice anchor can wrap by 2 pi between slices; re-align the lifts
  // before differencing in time.
  const double off_m = 2.0 * kPi * std::round((g0.theta[0] - gm.theta[0]) / (2.0 * kPi));
  const double off_p = 2.0 * kPi * std::round((g0.theta[0] - gp.theta[0]) / (2.0 * kPi));

  const bool closed = h.slices[i].closed();
  const int guard = closed ? 0 : collar_samples(h, i);
  double worst = 0.0;
  for (int j = std::max(1, guard); j + std::max(1, guard) < n; ++j) {
    const double theta_t = (gp.theta[j] + off_p - (gm.theta[j] + off_m)) / dt2;
    const double theta_ss = second_derivative(g0.theta, g0.s, j);
    worst = std::max(worst, std::abs(theta_t - theta_ss));
  }
  return worst;
}

double heat_residual_phi(const FlowHistory& h, int i, Vec2 center) {
  require_aligned(h, i);
  const int n = h.slices[i].size();
  const double dt2 = h.times[i + 1] - h.times[i - 1];

  auto phi_of = [&](int k) {
    std::vector<double> phi(n);
    for (int j = 0; j < n; ++j) phi[j] = norm2(h.slices[k].pts[j] - center) + 2.0 * h.times[k];
    return phi;
  };
  const auto phi_m = phi_of(i - 1), phi_0 = phi_of(i), phi_p = phi_of(i + 1);

  const bool closed = h.slices[i].closed();
  const int guard = closed ? 0 : collar_samples(h, i);
  double worst = 0.0;
  for (int j = std::max(1, guard); j + std::max(1, guard) < n; ++j) {
    const double phi_t = (phi_p[j] - phi_m[j]) / dt2;
    const double phi_ss = second_derivative(phi_0, h.geometry[i].s, j);
    worst = std::max(worst, std::abs(phi_t - phi_ss));
  }
  return worst;
}

}  // namespace csf
