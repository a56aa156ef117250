#include "csf/catalog.hpp"

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "doctest.h"
#include "csf/functionals.hpp"

using namespace csf;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("closed form solutions satisfy the flow equation") {
  // Loose per-solution gate at moderate resolution; the acceptance run
  // tightens this to 1e-6 at 16384 samples.
  CHECK(residual_csf(shrinking_circle(1.0), -1.0, 2048) < 1e-6);
  CHECK(residual_csf(grim_reaper(), -1.0, 4096, -6.0, 6.0) < 1e-5);
  CHECK(residual_csf(static_line(0.7, 1.3), 0.0, 256, -5.0, 5.0) < 1e-9);
  CHECK(residual_csf(angenent_oval(), -0.5, 4096) < 1e-5);

  // A deliberately wrong "solution" fails the same gate: the circle formula
  // with the wrong shrinking rate.
  AnalyticFlow bogus = shrinking_circle(1.0);
  bogus.position = [](double u, double t) {
    const double r = std::sqrt(1.0 - 1.0 * t);  // rate should be 2t
    return Vec2{r * std::cos(2.0 * kPi * u), r * std::sin(2.0 * kPi * u)};
  };
  CHECK(residual_csf(bogus, -1.0, 2048) > 0.1);
}

TEST_CASE("shrinking circle facts") {
  const AnalyticFlow f = shrinking_circle(2.0);
  CHECK(f.t_max == doctest::Approx(2.0));
  CHECK_THROWS_AS(f.sample(2.5, 64), std::invalid_argument);

  const DiscreteCurve c = f.sample(0.0, 64);
  CHECK(c.closed());
  CHECK(c.size() == 64);
  // No endpoint repeat: last sample is one spacing short of the first.
  CHECK(dist(c.pts.back(), c.pts.front()) == doctest::Approx(dist(c.pts[0], c.pts[1])));

  CHECK(f.known.entropy == doctest::Approx(std::sqrt(2.0 * kPi / std::exp(1.0))));
  CHECK(f.known.total_curvature == doctest::Approx(2.0 * kPi));
  CHECK(f.known.entropy_attained);
}

TEST_CASE("grim reaper parametrization") {
  const AnalyticFlow f = grim_reaper();

  SUBCASE("height and width helpers invert the profile") {
    for (double hgt : {1.0, 10.0, 120.0}) {
      const double u = grim_reaper_param_for_height(hgt);
      const Vec2 p = f.position(u, 0.0);
      CHECK(p.y == doctest::Approx(hgt).epsilon(1e-9));
    }
    const double u = grim_reaper_param_for_x(1.0);
    CHECK(f.position(u, 0.0).x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(grim_reaper_param_for_x(kPi / 2.0), std::invalid_argument);
  }

  SUBCASE("translates upward at unit speed, confined to |x| < pi/2") {
    const DiscreteCurve a = f.sample(0.0, 101, -5.0, 5.0);
    const DiscreteCurve b = f.sample(1.0, 101, -5.0, 5.0);
    for (int i = 0; i < 101; ++i) {
      CHECK(b.pts[i].x == doctest::Approx(a.pts[i].x).epsilon(1e-14));
      CHECK(b.pts[i].y - a.pts[i].y == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(a.pts[i].x) < kPi / 2.0);
    }
  }

  SUBCASE("rotation and shift move the solution rigidly") {
    const AnalyticFlow g = grim_reaper(kPi / 2.0, {3.0, -1.0});
    const Vec2 p0 = f.position(0.7, 0.2);
    const Vec2 p1 = g.position(0.7, 0.2);
    CHECK(p1.x == doctest::Approx(3.0 - p0.y).epsilon(1e-13));
    CHECK(p1.y == doctest::Approx(-1.0 + p0.x).epsilon(1e-13));
  }

  SUBCASE("known facts") {
    CHECK(f.known.entropy == doctest::Approx(2.0));
    CHECK_FALSE(f.known.entropy_attained);
    CHECK(f.known.total_curvature == doctest::Approx(kPi));
    CHECK(f.known.multiplicity == 2);
  }
}

TEST_CASE("angenent oval geometry") {
  const AnalyticFlow f = angenent_oval();
  CHECK_THROWS_AS(f.sample(0.0, 64), std::invalid_argument);  // only defined for t < 0

  const double t = -0.5;
  const DiscreteCurve c = f.sample(t, 400);
  CHECK(c.closed());
  CHECK(check_embedded(c));

  // Width comes from cos x = e^t at y = 0, height from cosh y = e^{-t} at x = 0.
  const double x_max = std::acos(std::exp(t));
  const double y_max = std::acosh(std::exp(-t));
  double wx = 0.0, wy = 0.0;
  for (const Vec2& p : c.pts) {
    wx = std::max(wx, std::abs(p.x));
    wy = std::max(wy, std::abs(p.y));
  }
  CHECK(wx == doctest::Approx(x_max).epsilon(1e-9));
  CHECK(wy == doctest::Approx(y_max).epsilon(1e-6));

  const GeometryField g = compute_geometry(c);
  CHECK(total_curvature(c, g) == doctest::Approx(2.0 * kPi).epsilon(1e-4));
}

TEST_CASE("static line and multiplicity") {
  const AnalyticFlow f = static_line(kPi / 4.0, std::sqrt(2.0), 2);
  const DiscreteCurve c = f.sample(0.0, 65, -3.0, 3.0);  // odd count puts a sample at u = 0
  CHECK(c.multiplicity == 2);
  // offset moves the line along its normal: distance from origin is |offset|.
  double closest = 1e300;
  for (const Vec2& p : c.pts) closest = std::min(closest, norm(p));
  CHECK(closest == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // Doubling multiplicity doubles the gaussian weighted length.
  DiscreteCurve single = c;
  single.multiplicity = 1;
  CHECK(gaussian_length(c, {0, 0}, 1.0) ==
        doctest::Approx(2.0 * gaussian_length(single, {0, 0}, 1.0)).epsilon(1e-14));
}

TEST_CASE("static example curves") {
  const DiscreteCurve sp = log_spiral(1.0, 1.0, 0.0, std::log(5.0), 257);
  CHECK_FALSE(sp.closed());
  CHECK(sp.size() == 257);
  // r = e^phi: endpoint radii 1 and 5; arclength (r1 - r0) * sqrt(2) for k=1.
  CHECK(norm(sp.pts.front()) == doctest::Approx(1.0));
  CHECK(norm(sp.pts.back()) == doctest::Approx(5.0));
  CHECK(curve_length(sp) == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-4));

  const DiscreteCurve sn = sine_graph(0.0, 2.0 * kPi, 128);
  CHECK(sn.size() == 128);
  CHECK(sn.pts.front().x == 0.0);
  CHECK(sn.pts.back().x == doctest::Approx(2.0 * kPi));
  CHECK(sn.pts[0].y == doctest::Approx(std::sin(0.0)));
}

TEST_CASE("sampled analytic histories") {
  const FlowHistory h = sample_history(shrinking_circle(1.0), 0.0, 0.4, 5, 64);
  REQUIRE(h.size() == 5);
  CHECK(h.times.front() == 0.0);
  CHECK(h.times.back() == doctest::Approx(0.4));
  CHECK(h.meta.status == "analytic");
  CHECK_FALSE(h.meta.pinned_ends);
  for (int i = 0; i < 5; ++i)
    CHECK(norm(h.slices[i].pts[0]) == doctest::Approx(std::sqrt(1.0 - 2.0 * h.times[i])));
}
