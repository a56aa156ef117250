#pragma once

#include <functional>
#include <string>

#include "csf/curve.hpp"
#include "csf/flow.hpp"

namespace csf {

// Closed-form facts stored with each analytic flow. entropy_attained is false
// where the supremum is only approached (translating solutions); bounds are
// still usable as one-sided test oracles.
struct FlowFacts {
  double entropy = 0.0;
  bool entropy_attained = true;
  double total_curvature = 0.0;
  int multiplicity = 1;
  std::string tangent_flow;  // free-text descriptor of the blow-down limit
};

// An exact solution gamma(u, t). Every entry must pass the residual gate
// (residual_csf <= 1e-6 at three interior times) before its closed-form facts
// may be trusted by tests; the gate is the correctness argument.
struct AnalyticFlow {
  std::string name;
  Topology topology = Topology::open;
  int multiplicity = 1;
  double t_min = 0.0, t_max = 0.0;     // open interval of validity
  double u_min = 0.0, u_max = 0.0;     // parameter domain (ignored for closed loops)
  FlowFacts known;
  std::function<Vec2(double, double)> position;  // (u, t) -> point

  // Closed loops: n samples uniform in the loop parameter, no endpoint repeat.
  // Open flows: n samples on [a, b] (uniform), both endpoints included.
  DiscreteCurve sample(double t, int n) const;                      // full default window
  DiscreteCurve sample(double t, int n, double a, double b) const;  // explicit window
};

// Circle of radius sqrt(r0^2 - 2t) about the origin, valid for t < r0^2/2.
AnalyticFlow shrinking_circle(double r0);

// Translating solution, base form y = t - log cos x, parametrized by arclength
// through the Gudermannian: u -> (arcsin(tanh u), t + log cosh u). The
// arclength form reaches heights far beyond what an x-grid can represent
// (cos x underflows near the asymptotes). rotation and shift move the whole
// solution rigidly; the translation axis rotates with it.
AnalyticFlow grim_reaper(double rotation = 0.0, Vec2 shift = Vec2{0.0, 0.0});

// Arclength parameter at which the base reaper reaches a given height, and at
// a given |x|; both grow without bound toward the asymptotes.
double grim_reaper_param_for_height(double height);
double grim_reaper_param_for_x(double x);  // throws for |x| >= pi/2

// Static line through offset*normal direction, angle against the x-axis.
AnalyticFlow static_line(double angle, double offset, int multiplicity = 1);

// The closed convex ancient solution {cos x = e^t cosh y}, t < 0, sampled by a
// cosine-graded loop parameter (dense near the tips, where the branch
// y = arccosh(e^{-t} cos x) is vertical). Throws for t >= 0.
AnalyticFlow angenent_oval();

// Static example curves (not flows).
DiscreteCurve log_spiral(double a, double k, double phi_lo, double phi_hi, int n);
DiscreteCurve sine_graph(double x_lo, double x_hi, int n);

// Max over interior samples of |<gamma_t, n> - kappa|, with gamma_t by
// centered time differences (h = 1e-5). Projecting onto the normal quotients
// out the reparametrization freedom of the sampling.
double residual_csf(const AnalyticFlow& flow, double t, int n_samples);
double residual_csf(const AnalyticFlow& flow, double t, int n_samples, double a, double b);

// Uniform time slices [t_lo, t_hi] sampled into a history (no numerics, exact
// positions). Open flows use the window [a, b].
FlowHistory sample_history(const AnalyticFlow& flow, double t_lo, double t_hi, int n_times,
                           int n_samples);
FlowHistory sample_history(const AnalyticFlow& flow, double t_lo, double t_hi, int n_times,
                           int n_samples, double a, double b);

}  // namespace csf
