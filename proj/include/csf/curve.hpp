#pragma once

#include <vector>

#include "csf/vec2.hpp"

namespace csf {

enum class Topology { open, closed };

// Ordered point samples of a planar curve. Closed curves do not repeat the
// first point; the segment from the last sample back to the first is implied.
// Multiplicity weights integral quantities (a line counted m times) and is
// carried through untouched by all geometric operations.
struct DiscreteCurve {
  Topology topology = Topology::open;
  int multiplicity = 1;
  std::vector<Vec2> pts;

  int size() const { return static_cast<int>(pts.size()); }
  bool closed() const { return topology == Topology::closed; }
};

// Per-sample differential data. Normals are tangents rotated counterclockwise
// by pi/2 (exactly, by construction). The angle field is the continuous lift
// of the tangent direction: angle[0] lies in [0, 2*pi) and adjacent jumps are
// kept below pi, so angle[i+1]-angle[i] equals the turning between samples.
struct GeometryField {
  std::vector<double> s;       // cumulative arclength, s[0] = 0
  std::vector<Vec2> tangent;   // unit
  std::vector<Vec2> normal;    // perp(tangent)
  std::vector<double> kappa;   // signed curvature, circumscribed-circle stencil
  std::vector<double> theta;   // unwrapped tangent angle

  int size() const { return static_cast<int>(s.size()); }
  double length(const DiscreteCurve& c) const;  // total, including the closing segment
};

// Throws std::invalid_argument on: fewer than 3 points, coincident consecutive
// samples, closed curve repeating its first point, multiplicity < 1.
void validate_curve(const DiscreteCurve& c);

double curve_length(const DiscreteCurve& c);

// Bounding-box diagonal. Used to size search domains; within sqrt(2) of the
// true diameter, which is all the callers need.
double curve_extent(const DiscreteCurve& c);

GeometryField compute_geometry(const DiscreteCurve& c);

// Near-uniform redistribution along the polyline by linear interpolation.
// Endpoints of open curves are kept exactly. Spacing lands within 10% of
// target; total length is preserved to second order in the spacing.
DiscreteCurve resample_by_arclength(const DiscreteCurve& c, double target_spacing);

// True iff no two non-adjacent segments intersect. Quadratic scan with a
// bounding-box reject per pair; adequate for the sample counts in use.
bool check_embedded(const DiscreteCurve& c);

}  // namespace csf
