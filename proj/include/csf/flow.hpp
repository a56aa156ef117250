#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csf/curve.hpp"

namespace csf {

enum class Scheme { explicit_euler, semi_implicit };

// One time step of curve shortening.
//
//   explicit_euler:  x <- x + dt * kappa * n, requires dt <= 0.4 * min_spacing^2.
//   semi_implicit:   linearly implicit midpoint step of x_t = x_ss with the
//                    arclength Laplacian's coefficients frozen along a
//                    backward-Euler half-step predictor; second order in time,
//                    unconditionally stable, two tridiagonal solves. Moving by
//                    the full x_ss instead of kappa*n adds only a tangential
//                    component, so the evolving image is the same flow with
//                    built-in point redistribution. Accepted for dt <= min_spacing.
//
// Open curves hold both endpoints fixed (truncation boundary condition; the
// artifact is confined near the ends and analyzers exclude a collar there).
// Throws on dt out of bounds; a singular tridiagonal solve throws runtime_error.
DiscreteCurve step(const DiscreteCurve& c, double dt, Scheme scheme);

struct ResampleEvent {
  long step_index = 0;
  int n_before = 0;
  int n_after = 0;
};

struct SchemeMeta {
  Scheme scheme = Scheme::semi_implicit;
  double dt = 0.0;
  long steps_taken = 0;
  int record_stride = 1;
  bool pinned_ends = false;
  std::string status;  // "completed", "singularity_stop", or "analytic"
  std::vector<ResampleEvent> resamples;
};

// Time-ordered record of an evolution. Geometry is cached per recorded slice.
// Times are strictly increasing; total length is non-increasing along the run
// (the flow is the gradient flow of length), which verify-stage checks enforce
// with 1e-8 relative slack per step.
struct FlowHistory {
  std::vector<double> times;
  std::vector<DiscreteCurve> slices;
  std::vector<GeometryField> geometry;
  SchemeMeta meta;

  int size() const { return static_cast<int>(times.size()); }
};

struct EvolveControls {
  Scheme scheme = Scheme::semi_implicit;
  double dt = 0.0;              // 0 picks a safe default from the initial spacing
  int record_stride = 10;
  double resample_ratio = 3.0;  // redistribute when max/min spacing exceeds this
  double singular_frac = 1e-6;  // stop when min spacing < frac * initial length
};

// Steps to t_end, recording every stride-th slice plus the first and last.
// Resampling events and an early singularity stop are recorded in meta, not
// raised as errors. dt is re-clamped against the stability bound whenever the
// curve's minimum spacing shrinks.
FlowHistory evolve(const DiscreteCurve& c, double t_end, const EvolveControls& controls = {});

struct RescaledSlice {
  double tau = 0.0;
  DiscreteCurve curve;     // e^{tau/2} * (slice - x0)
  GeometryField geometry;  // recomputed on the rescaled points
};

// Parabolic rescaling about a spacetime origin (x0, t0): a slice at time t
// maps to tau = -log(t0 - t), points to e^{tau/2} * (p - x0). All history
// times must be strictly before t0.
std::vector<RescaledSlice> rescale_history(const FlowHistory& h, Vec2 x0, double t0);

}  // namespace csf
