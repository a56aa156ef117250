#include "csf/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTruncExponent = 40.0;  // tail error < 1e-17 per unit length

// 2-point Gauss-Legendre nodes on [0, 1].
constexpr double kNodeLo = 0.5 - 0.28867513459481287;
constexpr double kNodeHi = 0.5 + 0.28867513459481287;

double point_segment_dist2(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp(dot(p - a, ab) / norm2(ab), 0.0, 1.0);
  return norm2(p - (a + t * ab));
}

}  // namespace

double gaussian_weighted_integral(const DiscreteCurve& c, std::span<const double> weight,
                                  Vec2 center, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gaussian scale must be positive");
  const bool weighted = !weight.empty();
  if (weighted && static_cast<int>(weight.size()) != c.size())
    throw std::invalid_argument("weight field size does not match curve");

  const int n = c.size();
  const int n_seg = c.closed() ? n : n - 1;
  const double inv4l = 1.0 / (4.0 * lambda);
  const double cutoff2 = kTruncExponent / inv4l;

  double acc = 0.0;
  for (int i = 0; i < n_seg; ++i) {
    const Vec2& a = c.pts[i];
    const Vec2& b = c.pts[(i + 1) % n];
    if (point_segment_dist2(center, a, b) > cutoff2) continue;
    const double len = dist(a, b);
    const Vec2 pl = a + kNodeLo * (b - a);
    const Vec2 ph = a + kNodeHi * (b - a);
    double fl = std::exp(-norm2(pl - center) * inv4l);
    double fh = std::exp(-norm2(ph - center) * inv4l);
    if (weighted) {
      const double wa = weight[i], wb = weight[(i + 1) % n];
      fl *= wa + kNodeLo * (wb - wa);
      fh *= wa + kNodeHi * (wb - wa);
    }
    acc += 0.5 * len * (fl + fh);
  }
  return static_cast<double>(c.multiplicity) * acc / std::sqrt(4.0 * kPi * lambda);
}

double gaussian_length(const DiscreteCurve& c, Vec2 center, double lambda) {
  return gaussian_weighted_integral(c, {}, center, lambda);
}

namespace {

struct SearchDomain {
  double cx_lo, cx_hi, cy_lo, cy_hi;
  double u_lo, u_hi;  // log lambda

  void clamp(double* p) const {
    p[0] = std::clamp(p[0], cx_lo, cx_hi);
    p[1] = std::clamp(p[1], cy_lo, cy_hi);
    p[2] = std::clamp(p[2], u_lo, u_hi);
  }
};

// Nelder-Mead maximization of F over (cx, cy, log lambda), every trial point
// clamped into the domain. Returns the best vertex through `p` and the value;
// converged means the tolerance test fired before the iteration cap.
double simplex_refine(const DiscreteCurve& c, const SearchDomain& dom, double* p, double scale_xy,
                      const EntropySearchConfig& cfg, long* evaluations, bool* converged) {
  constexpr int kDim = 3;
  double vert[kDim + 1][kDim];
  double fval[kDim + 1];

  auto eval = [&](double* v) {
    dom.clamp(v);
    ++*evaluations;
    return gaussian_length(c, {v[0], v[1]}, std::exp(v[2]));
  };

  for (int k = 0; k <= kDim; ++k) {
    for (int d = 0; d < kDim; ++d) vert[k][d] = p[d];
    if (k == 1) vert[k][0] += scale_xy;
    if (k == 2) vert[k][1] += scale_xy;
    if (k == 3) vert[k][2] += 0.5;
    fval[k] = eval(vert[k]);
  }

  *converged = false;
  int order[kDim + 1];
  for (int it = 0; it < cfg.max_iterations; ++it) {
    for (int k = 0; k <= kDim; ++k) order[k] = k;
    std::sort(order, order + kDim + 1, [&](int a, int b) { return fval[a] > fval[b]; });
    const int best = order[0], worst = order[kDim], second_worst = order[kDim - 1];

    // Converged when the simplex has collapsed in function value; stagnation
    // of the best vertex alone is normal mid-run (reshaping phases) and must
    // not stop early.
    if (fval[best] - fval[worst] <= cfg.rel_tol * std::max(1.0, std::abs(fval[best]))) {
      *converged = true;
      break;
    }

    double centroid[kDim] = {0, 0, 0};
    for (int k = 0; k <= kDim; ++k)
      if (k != worst)
        for (int d = 0; d < kDim; ++d) centroid[d] += vert[k][d] / kDim;

    double refl[kDim];
    for (int d = 0; d < kDim; ++d) refl[d] = centroid[d] + (centroid[d] - vert[worst][d]);
    const double f_refl = eval(refl);

    if (f_refl > fval[best]) {
      double expd[kDim];
      for (int d = 0; d < kDim; ++d) expd[d] = centroid[d] + 2.0 * (centroid[d] - vert[worst][d]);
      const double f_exp = eval(expd);
      const double* take = f_exp > f_refl ? expd : refl;
      const double f_take = std::max(f_exp, f_refl);
      std::copy(take, take + kDim, vert[worst]);
      fval[worst] = f_take;
    } else if (f_refl > fval[second_worst]) {
      std::copy(refl, refl + kDim, vert[worst]);
      fval[worst] = f_refl;
    } else {
      double contr[kDim];
      for (int d = 0; d < kDim; ++d)
        contr[d] = centroid[d] + 0.5 * (vert[worst][d] - centroid[d]);
      const double f_cont = eval(contr);
      if (f_cont > fval[worst]) {
        std::copy(contr, contr + kDim, vert[worst]);
        fval[worst] = f_cont;
      } else {
        for (int k = 0; k <= kDim; ++k) {
          if (k == best) continue;
          for (int d = 0; d < kDim; ++d)
            vert[k][d] = vert[best][d] + 0.5 * (vert[k][d] - vert[best][d]);
          fval[k] = eval(vert[k]);
        }
      }
    }
  }

  int best = 0;
  for (int k = 1; k <= kDim; ++k)
    if (fval[k] > fval[best]) best = k;
  std::copy(vert[best], vert[best] + kDim, p);
  return fval[best];
}

}  // namespace

EntropyResult entropy_estimate(const DiscreteCurve& c, const EntropySearchConfig& cfg) {
  validate_curve(c);
  const int n = c.size();
  const int n_seg = c.closed() ? n : n - 1;

  double min_spacing = dist(c.pts[0], c.pts[1]);
  for (int i = 1; i < n_seg; ++i)
    min_spacing = std::min(min_spacing, dist(c.pts[i], c.pts[(i + 1) % n]));
  const double extent = curve_extent(c);

  const double lam_lo = min_spacing * min_spacing;
  const double lam_hi = 4.0 * extent * extent;
  if (!(lam_hi > lam_lo))
    throw std::invalid_argument("empty scale range: curve too coarse for its extent");

  SearchDomain dom;
  {
    double xlo = c.pts[0].x, xhi = xlo, ylo = c.pts[0].y, yhi = ylo;
    for (const Vec2& p : c.pts) {
      xlo = std::min(xlo, p.x);
      xhi = std::max(xhi, p.x);
      ylo = std::min(ylo, p.y);
      yhi = std::max(yhi, p.y);
    }
    dom = {xlo - 4.0 * extent, xhi + 4.0 * extent, ylo - 4.0 * extent, yhi + 4.0 * extent,
           std::log(lam_lo), std::log(lam_hi)};
  }

  EntropyResult best;
  best.value = -1.0;
  constexpr double kTieEps = 1e-12;
  auto consider = [&](double f, const Vec2& center, double lambda, bool conv) {
    const double tie = kTieEps * std::max(1.0, std::abs(best.value));
    const bool better = f > best.value + tie;
    const bool tied = std::abs(f - best.value) <= tie &&
                      (lambda < best.lambda ||
                       (lambda == best.lambda &&
                        (center.x < best.center.x ||
                         (center.x == best.center.x && center.y < best.center.y))));
    if (better || tied) {
      best.value = f;
      best.center = center;
      best.lambda = lambda;
      if (better) best.converged = conv;
    }
  };

  const int stride = std::max(1, n / std::max(1, cfg.center_seeds));
  const int n_lam = std::max(2, cfg.lambda_seeds);
  const double du = (std::log(lam_hi) - std::log(lam_lo)) / (n_lam - 1);

  for (int i = 0; i < n; i += stride) {
    for (int j = 0; j < n_lam; ++j) {
      const double u = std::log(lam_lo) + du * j;
      double p[3] = {c.pts[i].x, c.pts[i].y, u};
      dom.clamp(p);
      ++best.evaluations;
      const double f_seed = gaussian_length(c, {p[0], p[1]}, std::exp(p[2]));
      consider(f_seed, {p[0], p[1]}, std::exp(p[2]), false);

      const double scale_xy = std::max(0.25 * std::exp(0.5 * u), min_spacing);
      bool conv = false;
      const double f = simplex_refine(c, dom, p, scale_xy, cfg, &best.evaluations, &conv);
      consider(f, {p[0], p[1]}, std::exp(p[2]), conv);
    }
  }
  return best;
}

double total_curvature(const DiscreteCurve& c, const GeometryField& g) {
  const int n = c.size();
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    acc += 0.5 * (std::abs(g.kappa[i]) + std::abs(g.kappa[i + 1])) * (g.s[i + 1] - g.s[i]);
  if (c.closed())
    acc += 0.5 * (std::abs(g.kappa[n - 1]) + std::abs(g.kappa[0])) * dist(c.pts[n - 1], c.pts[0]);
  return acc;
}

namespace {

// Angle sequence extended so closed curves cover the wrap-around turning: a
// virtual sample theta[n] continues the lift across the closing segment.
std::vector<double> lifted_angles(const DiscreteCurve& c, const GeometryField& g) {
  std::vector<double> th(g.theta.begin(), g.theta.end());
  if (c.closed()) {
    const Vec2& t_last = g.tangent.back();
    const Vec2& t_first = g.tangent.front();
    const double jump = std::remainder(
        std::atan2(t_first.y, t_first.x) - std::atan2(t_last.y, t_last.x), 2.0 * kPi);
    th.push_back(th.back() + jump);
  }
  return th;
}

// Zero count of a sampled residual: tolerance-wide runs count once, direct
// sign flips count once; a zero run between same-sign stretches still counts
// (tangential touch).
int count_zeros(std::span<const double> v, double tol) {
  int count = 0;
  int prev = 2;  // 2 = no sign seen yet
  bool in_zero = false;
  for (double x : v) {
    const int s = x > tol ? 1 : (x < -tol ? -1 : 0);
    if (s == 0) {
      if (!in_zero) {
        in_zero = true;
        ++count;
      }
    } else {
      if (in_zero) {
        in_zero = false;
      } else if (prev != 2 && s != prev) {
        ++count;
      }
      prev = s;
    }
  }
  return count;
}

}  // namespace

int count_angle_preimages(const DiscreteCurve& c, const GeometryField& g, double xi, double tol) {
  if (!(xi >= 0.0 && xi < kPi)) throw std::invalid_argument("xi must lie in [0, pi)");
  const auto th = lifted_angles(c, g);
  const auto [lo_it, hi_it] = std::minmax_element(th.begin(), th.end());

  const int k_lo = static_cast<int>(std::ceil((*lo_it - tol - xi) / kPi));
  const int k_hi = static_cast<int>(std::floor((*hi_it + tol - xi) / kPi));

  std::vector<double> residual(th.size());
  int total = 0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double level = xi + k * kPi;
    for (size_t i = 0; i < th.size(); ++i) residual[i] = th[i] - level;
    total += count_zeros(residual, tol);
  }
  return total;
}

double total_curvature_area_formula(const DiscreteCurve& c, const GeometryField& g, int n_xi) {
  if (n_xi < 8) throw std::invalid_argument("area formula needs at least 8 angle levels");
  long total = 0;
  for (int j = 0; j < n_xi; ++j)
    total += count_angle_preimages(c, g, (j + 0.5) * kPi / n_xi);
  return kPi * static_cast<double>(total) / n_xi;
}

double entropy_bound_slope(double eta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("slope bound needs eta >= 0");
  return std::sqrt(1.0 + eta * eta);
}

double entropy_bound_total_curvature(int alpha) {
  if (alpha < 1) throw std::invalid_argument("curvature bound needs alpha >= 1");
  return 4.0 * alpha * std::numbers::sqrt2;
}

}  // namespace csf
