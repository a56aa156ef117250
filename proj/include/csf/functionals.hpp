#pragma once

#include <span>
#include <string>

#include "csf/curve.hpp"

namespace csf {

// Gaussian weighted length (4*pi*lambda)^(-1/2) * Int exp(-|x-x0|^2/(4 lambda)) ds,
// per-segment 2-point Gauss-Legendre on the polyline. Segments whose nearest
// point to the center has exponent |x-x0|^2/(4 lambda) > 40 contribute zero.
// Result is multiplied by the curve multiplicity. Throws on lambda <= 0.
double gaussian_length(const DiscreteCurve& c, Vec2 center, double lambda);

// Same quadrature and truncation with a per-sample scalar weight, linearly
// interpolated to the Gauss nodes. gaussian_length is the weight==1 case.
double gaussian_weighted_integral(const DiscreteCurve& c, std::span<const double> weight,
                                  Vec2 center, double lambda);

struct EntropySearchConfig {
  int center_seeds = 24;     // every k-th sample, k chosen to hit about this many
  int lambda_seeds = 10;     // log-spaced over [min_spacing^2, (2*extent)^2]
  int max_iterations = 200;  // per simplex refinement
  double rel_tol = 1e-8;     // stop when best improves by less than this (relative)
};

struct EntropyResult {
  double value = 0.0;       // certified lower bound only; the true sup may exceed it
  Vec2 center;
  double lambda = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// Multi-start maximization of gaussian_length over (center, log lambda).
// Seeds are curve samples crossed with log-spaced scales; each seed is refined
// by Nelder-Mead. The refinement domain is clamped: lambda stays inside the
// seed range (below min_spacing^2 the quadrature under-resolves the Gaussian
// and invents maxima) and centers stay in the bounding box inflated by
// 4*extent. Ties break to smallest lambda, then lexicographic center, so the
// result is deterministic.
EntropyResult entropy_estimate(const DiscreteCurve& c, const EntropySearchConfig& cfg = {});

// Trapezoid rule on |kappa| ds, periodic closure for closed curves.
double total_curvature(const DiscreteCurve& c, const GeometryField& g);

// Number of solutions of theta(s) = xi (mod pi), transversal crossings counted
// by sign change of the lifted residual; runs of samples within tol of a level
// count once. Closed curves include the wrap-around segment via the turning of
// the closing edge.
int count_angle_preimages(const DiscreteCurve& c, const GeometryField& g, double xi,
                          double tol = 1e-9);

// Midpoint discretization of Int_0^pi #{theta = xi mod pi} dxi, which equals
// total curvature when the angle is piecewise monotone. n_xi >= 8.
double total_curvature_area_formula(const DiscreteCurve& c, const GeometryField& g, int n_xi);

// Closed-form entropy bounds, usable as predicates against entropy_estimate.
double entropy_bound_slope(double eta);            // sqrt(1 + eta^2), graphs with |f'| <= eta
double entropy_bound_total_curvature(int alpha);   // 4*alpha*sqrt(2), total curvature <= alpha*pi

}  // namespace csf
