#pragma once

#include <array>
#include <span>
#include <vector>

#include "csf/curve.hpp"
#include "csf/flow.hpp"

namespace csf {

// ---------------------------------------------------------------------------
// Squared-distance diagnostics.
//
// phi(s, t) = |gamma(s,t) - x0|^2 + 2t solves the heat equation along the
// flow; its critical-point structure (how many local minima and maxima, and
// how they move in time) is a sharp structural probe. The +2t term is kept so
// the heat-equation residual and the path monotonicity statements hold
// literally, not up to a constant.
// ---------------------------------------------------------------------------

struct DistanceProfile {
  std::vector<double> s;
  std::vector<double> phi;
  Vec2 center;
  double time = 0.0;
  Topology topology = Topology::open;
};

DistanceProfile distance_profile(const DiscreteCurve& c, const GeometryField& g, Vec2 center,
                                 double time);

struct ExtremaCount {
  int n_min = 0;
  int n_max = 0;
  std::vector<int> min_indices;
  std::vector<int> max_indices;
};

// Interior strict extrema by sign change of the discrete slope; plateaus
// (|delta phi| <= tol * max|phi|) merge into one extremum reported at the
// plateau's first sample. Open-curve endpoints never count; closed profiles
// are scanned cyclically. Requires >= 16 samples.
ExtremaCount count_local_extrema(const DistanceProfile& p, double tol = 1e-8);

enum class CriticalKind { local_min, local_max, degenerate };

// Classification of a critical point of the squared distance to center via
// beta = kappa * <x0 - gamma, n>: beta > 1 local max, beta < 1 local min
// (kappa = 0 included), |beta - 1| <= tol degenerate, the center of the
// osculating circle. Requires the center to lie on the normal line at the
// sample (|<gamma - x0, t>| <= 1e-6 |gamma - x0|), else throws.
CriticalKind classify_critical_point(const DiscreteCurve& c, const GeometryField& g, int index,
                                     Vec2 center, double tol = 1e-6);

// gamma + n / kappa. Throws where |kappa| <= 1e-10 (flat point).
Vec2 osculating_center(const DiscreteCurve& c, const GeometryField& g, int index);

// ---------------------------------------------------------------------------
// Zero counting.
//
// Scalar solutions of 1-D parabolic equations along the flow (theta - c,
// d_s phi, kappa) have finitely many zeros, and the count never increases in
// time. The discrete count below is the test instrument for that law.
// ---------------------------------------------------------------------------

struct ZeroCount {
  int count = 0;
  bool degenerate = false;  // all samples at numerical zero
};

// Sign changes between consecutive samples, cyclic for closed topology; runs
// of |value| <= tol * max|value| merge and count once. Requires >= 8 samples.
ZeroCount sturm_zero_count(std::span<const double> values, Topology topology, double tol = 1e-8);

enum class SturmField { theta_minus_c, phi_s, kappa };

struct ZeroCountSeries {
  std::vector<int> counts;
  std::vector<bool> degenerate;
  std::vector<int> excluded;  // samples removed per slice by the endpoint collar
  bool collar_applied = false;
};

// Per-slice sturm_zero_count of the chosen field.
//   theta_minus_c: theta - c (open topology required, theta needs a global lift);
//   phi_s:         <gamma - center, tangent>, the arclength derivative of the
//                  squared distance;
//   kappa:         kappa - c, where a NaN c requests the per-slice
//                  length-weighted mean of kappa.
// Histories with pinned ends get a collar excluded at both ends, of arclength
// min(5*sqrt(t - t_first), length/4): zeros enter freely through a pinned
// boundary (it is not a Dirichlet condition for the field), and the parabolic
// collar is exactly the region those entries can reach.
ZeroCountSeries zero_count_series(const FlowHistory& h, SturmField field, double c = 0.0,
                                  Vec2 center = Vec2{0.0, 0.0}, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Extremum paths in time.
// ---------------------------------------------------------------------------

struct ExtremumPath {
  CriticalKind kind = CriticalKind::local_min;  // local_min or local_max only
  std::vector<int> slice;     // history slice indices, consecutive
  std::vector<int> index;     // sample index within each slice
  std::vector<double> value;  // phi at the extremum
  bool monotone_ok = true;    // min paths non-decreasing, max paths non-increasing
  bool kappa_sign_ok = true;  // sign of kappa constant along max paths
  bool ambiguous = false;     // a matching tie was broken to smaller arclength
};

// Matches extrema of consecutive slices by nearest normalized arclength and
// emits maximal paths. Matching is a heuristic (the continuous statement
// guarantees paths exist, not how to find them discretely); ties are flagged.
// Monotonicity uses 1e-6 relative slack.
std::vector<ExtremumPath> extremum_paths(const FlowHistory& h, Vec2 center,
                                         double plateau_tol = 1e-8);

// ---------------------------------------------------------------------------
// Monotone series.
// ---------------------------------------------------------------------------

// F_{x0, t0 - t}[M_t] per slice; non-increasing in t with equality exactly on
// self-shrinkers centered at (x0, t0). All slice times must precede t0.
std::vector<double> huisken_series(const FlowHistory& h, Vec2 x0, double t0);

// Int theta^2 Phi_{(x0,t0)} ds per slice, same quadrature as gaussian_length.
// Open topology only (theta needs a global lift). The monotonicity holds for
// any angle anchor: theta + const also solves the heat equation.
std::vector<double> weighted_theta2_series(const FlowHistory& h, Vec2 x0, double t0);

// Per-slice [min, max] of theta over interior samples. Later ranges nest
// inside earlier ones along any flow.
std::vector<std::array<double, 2>> angle_range_series(const FlowHistory& h);

// First i where series[i+1] > series[i] + slack[i], or -1 if none. The scalar
// overload uses one slack everywhere.
int first_increase(std::span<const double> series, std::span<const double> slack);
int first_increase(std::span<const double> series, double slack);

// First i where range i+1 leaks outside range i by more than slack, or -1.
int first_nesting_violation(std::span<const std::array<double, 2>> ranges, double slack);

// ---------------------------------------------------------------------------
// Rescaled-slice structure.
// ---------------------------------------------------------------------------

struct SheetDecomposition {
  int n_sheets = 0;          // connected components inside the ball, times multiplicity
  bool graphical = false;    // every component a graph over the axis, C1-close within eps
  double axis_angle = 0.0;   // fitted line through the origin, in [0, pi)
  int clipped_samples = 0;
};

// Clips to the ball |p| <= R, splits the sample sequence into connected
// components (cyclic for closed curves), fits one line through the origin by
// the principal direction of all clipped samples, and reports the component
// count and the graph quality over that line. Components count with the curve
// multiplicity. Empty clip: n_sheets 0.
SheetDecomposition sheet_decomposition(const RescaledSlice& slice, double R, double eps);

struct RotationTrace {
  std::vector<double> tau;    // included slices only
  std::vector<double> angle;  // lifted continuously, adjacent jumps < pi/2
  int excluded = 0;           // non-graphical slices dropped
  bool converged = false;     // total variation over the last half < 1e-3
  double limit = 0.0;         // angle at the most negative tau
};

// Axis angle per rescaled slice with a continuous lift in tau. Slices are
// expected in decreasing tau (toward the blow-down limit); non-graphical
// slices are excluded and counted. Requires >= 5 usable slices.
RotationTrace rotation_convergence(std::span<const RescaledSlice> slices, double R, double eps);

// ---------------------------------------------------------------------------
// Tails.
// ---------------------------------------------------------------------------

struct EndDivergence {
  bool start = false;
  bool end = false;
  bool both() const { return start && end; }
};

// Monotone-tail proxy for |gamma - x0| -> infinity on a truncated open curve:
// an end passes when the outer 10% of samples all exceed the median distance
// of the adjacent inner decile. Open topology only.
EndDivergence distance_divergence_check(const DiscreteCurve& c, Vec2 center);

// ---------------------------------------------------------------------------
// Heat-equation residuals on recorded numerical runs.
//
// Both require slices i-1, i, i+1 with identical sample counts (run with
// resampling disabled and stride 1) and an explicit-scheme history: the
// residual compares the time derivative at a fixed sample index against the
// second arclength derivative, which is the heat equation only when samples
// move purely normally.
// ---------------------------------------------------------------------------

double heat_residual_theta(const FlowHistory& h, int i);
double heat_residual_phi(const FlowHistory& h, int i, Vec2 center);

}  // namespace csf
