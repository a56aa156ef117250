#include "csf/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace csf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Consecutive spacings; closed curves append the wrap-around segment, so the
// result has c.size() entries for closed and c.size()-1 for open.
std::vector<double> spacings(const DiscreteCurve& c) {
  const int n = c.size();
  std::vector<double> d;
  d.reserve(c.closed() ? n : n - 1);
  for (int i = 0; i + 1 < n; ++i) d.push_back(dist(c.pts[i], c.pts[i + 1]));
  if (c.closed()) d.push_back(dist(c.pts[n - 1], c.pts[0]));
  return d;
}

double wrap_to_pi(double a) {
  return std::remainder(a, kTwoPi);
}

// Signed curvature of the circle through three consecutive samples. Robust to
// mildly nonuniform spacing and exact on co-circular points.
double circumcircle_kappa(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double la = dist(a, b), lb = dist(b, c), lc = dist(a, c);
  return 2.0 * cross(b - a, c - b) / (la * lb * lc);
}

// Derivative at the middle node of three with spacings h1 (before) and h2
// (after); second-order on smooth data.
Vec2 centered_derivative(const Vec2& pm, const Vec2& p0, const Vec2& pp, double h1, double h2) {
  const double wl = -h2 / (h1 * (h1 + h2));
  const double wc = (h2 - h1) / (h1 * h2);
  const double wr = h1 / (h2 * (h1 + h2));
  return wl * pm + wc * p0 + wr * pp;
}

Vec2 one_sided_derivative(const Vec2& p0, const Vec2& p1, const Vec2& p2, double h1, double h2) {
  const double w0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
  const double w1 = (h1 + h2) / (h1 * h2);
  const double w2 = -h1 / (h2 * (h1 + h2));
  return w0 * p0 + w1 * p1 + w2 * p2;
}

}  // namespace

void validate_curve(const DiscreteCurve& c) {
  if (c.size() < 3) throw std::invalid_argument("curve needs at least 3 points");
  if (c.multiplicity < 1) throw std::invalid_argument("multiplicity must be >= 1");
  const int n = c.size();
  for (int i = 0; i + 1 < n; ++i) {
    if (!(dist(c.pts[i], c.pts[i + 1]) > 0.0))
      throw std::invalid_argument("coincident consecutive samples at index " + std::to_string(i));
  }
  if (c.closed() && !(dist(c.pts[n - 1], c.pts[0]) > 0.0))
    throw std::invalid_argument("closed curve must not repeat its first point");
  for (const Vec2& p : c.pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("non-finite sample coordinate");
  }
}

double curve_length(const DiscreteCurve& c) {
  double L = 0.0;
  for (double d : spacings(c)) L += d;
  return L;
}

double curve_extent(const DiscreteCurve& c) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = xhi;
  for (const Vec2& p : c.pts) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  return std::hypot(xhi - xlo, yhi - ylo);
}

double GeometryField::length(const DiscreteCurve& c) const {
  double L = s.empty() ? 0.0 : s.back();
  if (c.closed() && c.size() >= 2) L += dist(c.pts.back(), c.pts.front());
  return L;
}

GeometryField compute_geometry(const DiscreteCurve& c) {
  validate_curve(c);
  const int n = c.size();
  const auto d = spacings(c);

  GeometryField g;
  g.s.resize(n);
  g.tangent.resize(n);
  g.normal.resize(n);
  g.kappa.resize(n);
  g.theta.resize(n);

  g.s[0] = 0.0;
  for (int i = 1; i < n; ++i) g.s[i] = g.s[i - 1] + d[i - 1];

  auto at = [&](int i) -> const Vec2& { return c.pts[(i % n + n) % n]; };
  auto dd = [&](int i) -> double { return d[(i % n + n) % n]; };

  for (int i = 0; i < n; ++i) {
    Vec2 v;
    if (c.closed()) {
      v = centered_derivative(at(i - 1), at(i), at(i + 1), dd(i - 1), dd(i));
      g.kappa[i] = circumcircle_kappa(at(i - 1), at(i), at(i + 1));
    } else if (i == 0) {
      v = one_sided_derivative(c.pts[0], c.pts[1], c.pts[2], d[0], d[1]);
      g.kappa[i] = circumcircle_kappa(c.pts[0], c.pts[1], c.pts[2]);
    } else if (i == n - 1) {
      v = -1.0 * one_sided_derivative(c.pts[n - 1], c.pts[n - 2], c.pts[n - 3], d[n - 2], d[n - 3]);
      g.kappa[i] = circumcircle_kappa(c.pts[n - 3], c.pts[n - 2], c.pts[n - 1]);
    } else {
      v = centered_derivative(c.pts[i - 1], c.pts[i], c.pts[i + 1], d[i - 1], d[i]);
      g.kappa[i] = circumcircle_kappa(c.pts[i - 1], c.pts[i], c.pts[i + 1]);
    }
    const double len = norm(v);
    if (!(len > 0.0)) throw std::invalid_argument("degenerate tangent stencil");
    g.tangent[i] = (1.0 / len) * v;
    g.normal[i] = perp(g.tangent[i]);
  }

  double prev_raw = std::atan2(g.tangent[0].y, g.tangent[0].x);
  double anchored = std::fmod(prev_raw, kTwoPi);
  if (anchored < 0.0) anchored += kTwoPi;
  g.theta[0] = anchored;
  for (int i = 1; i < n; ++i) {
    const double raw = std::atan2(g.tangent[i].y, g.tangent[i].x);
    g.theta[i] = g.theta[i - 1] + wrap_to_pi(raw - prev_raw);
    prev_raw = raw;
  }
  return g;
}

DiscreteCurve resample_by_arclength(const DiscreteCurve& c, double target_spacing) {
  validate_curve(c);
  const double L = curve_length(c);
  if (!(target_spacing > 0.0)) throw std::invalid_argument("target spacing must be positive");
  if (!(target_spacing < L / 3.0))
    throw std::invalid_argument("target spacing too large for curve length");

  // Pick the segment count whose uniform spacing lands nearest the target.
  const double ratio = L / target_spacing;
  long m = std::lround(ratio);
  if (m >= 3 && std::abs(L / static_cast<double>(m + 1) - target_spacing) <
                    std::abs(L / static_cast<double>(m) - target_spacing))
    ++m;
  m = std::max<long>(m, c.closed() ? 4 : 3);

  const auto d = spacings(c);
  DiscreteCurve out;
  out.topology = c.topology;
  out.multiplicity = c.multiplicity;

  const long n_new = c.closed() ? m : m + 1;
  out.pts.reserve(n_new);
  const double h = L / static_cast<double>(m);

  int seg = 0;
  double seg_start = 0.0;
  const int n_seg = static_cast<int>(d.size());
  auto seg_point = [&](int k, double frac) {
    const Vec2& a = c.pts[k];
    const Vec2& b = c.pts[(k + 1) % c.size()];
    return a + frac * (b - a);
  };
  for (long j = 0; j < n_new; ++j) {
    const double sj = std::min(h * static_cast<double>(j), L);
    while (seg + 1 < n_seg && seg_start + d[seg] < sj) seg_start += d[seg++];
    out.pts.push_back(seg_point(seg, std::clamp((sj - seg_start) / d[seg], 0.0, 1.0)));
  }
  if (!c.closed()) out.pts.back() = c.pts.back();  // endpoint exact, not interpolated
  return out;
}

namespace {

bool bbox_disjoint(const Vec2& a, const Vec2& b, const Vec2& p, const Vec2& q) {
  return std::max(a.x, b.x) < std::min(p.x, q.x) || std::max(p.x, q.x) < std::min(a.x, b.x) ||
         std::max(a.y, b.y) < std::min(p.y, q.y) || std::max(p.y, q.y) < std::min(a.y, b.y);
}

int orient(const Vec2& a, const Vec2& b, const Vec2& p) {
  const double v = cross(b - a, p - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& p, const Vec2& q) {
  const int o1 = orient(a, b, p), o2 = orient(a, b, q);
  const int o3 = orient(p, q, a), o4 = orient(p, q, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, p)) return true;
  if (o2 == 0 && on_segment(a, b, q)) return true;
  if (o3 == 0 && on_segment(p, q, a)) return true;
  if (o4 == 0 && on_segment(p, q, b)) return true;
  return false;
}

}  // namespace

bool check_embedded(const DiscreteCurve& c) {
  validate_curve(c);
  const int n = c.size();
  const int n_seg = c.closed() ? n : n - 1;
  auto seg_end = [&](int i) -> const Vec2& { return c.pts[(i + 1) % n]; };
  for (int i = 0; i < n_seg; ++i) {
    for (int j = i + 2; j < n_seg; ++j) {
      if (c.closed() && i == 0 && j == n_seg - 1) continue;  // wrap-adjacent pair
      if (bbox_disjoint(c.pts[i], seg_end(i), c.pts[j], seg_end(j))) continue;
      if (segments_intersect(c.pts[i], seg_end(i), c.pts[j], seg_end(j))) return false;
    }
  }
  return true;
}

}  // namespace csf
