#include "abem/error.hpp"
#include "abem/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace abem;

namespace {

// Even-odd ray casting against the sampled curve.
bool inside(const BoundaryCurve& c, const Vec2& p) {
  bool in = false;
  for (const auto& s : c.segments()) {
    const int n = s.kind == SegmentMap::Kind::line ? 1 : 400;
    for (int i = 0; i < n; ++i) {
      const Vec2 a = s.position(s.t0 + (s.t1 - s.t0) * i / n);
      const Vec2 b = s.position(s.t0 + (s.t1 - s.t0) * (i + 1) / n);
      if ((a.y() > p.y()) != (b.y() > p.y())) {
        const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
        if (x > p.x()) in = !in;
      }
    }
  }
  return in;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("circle") {
    const CurvePtr c = make_circle(0.4);
    CHECK(c->closed());
    CHECK(c->segment_count() == 4);
    CHECK(c->total_length() == doctest::Approx(2.0 * std::numbers::pi * 0.4).epsilon(1e-14));
    CHECK(c->diameter() == doctest::Approx(0.8).epsilon(1e-12));
    for (int s = 0; s < 4; ++s) {
      const auto& seg = c->segment(s);
      const double t = 0.3 * seg.t0 + 0.7 * seg.t1;
      const Vec2 x = c->position(s, t);
      CHECK(x.norm() == doctest::Approx(0.4).epsilon(1e-15));
      CHECK((c->normal(s, t) - x / x.norm()).norm() < 1e-14);
      CHECK(seg.curvature(t) == doctest::Approx(2.5));
    }
  }

  TEST_CASE("lshape orientation and exterior normals") {
    const CurvePtr c = make_lshape();
    double area = 0.0;
    for (const auto& s : c->segments()) area += 0.5 * (s.p0.x() * s.p1.y() - s.p1.x() * s.p0.y());
    CHECK(area == doctest::Approx(3.0 * 0.175 * 0.175).epsilon(1e-14));
    CHECK(c->diameter() < 0.5);
    for (const auto& s : c->segments()) {
      const double t = 0.5 * (s.t0 + s.t1);
      const Vec2 x = s.position(t);
      const Vec2 n = c->normal(s.id, t);
      CHECK(!inside(*c, x + 1e-4 * n));
      CHECK(inside(*c, x - 1e-4 * n));
    }
  }

  TEST_CASE("slit") {
    const CurvePtr c = make_slit();
    CHECK(!c->closed());
    CHECK(c->total_length() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK((c->normal(0, 0.3) - Vec2(0, 1)).norm() < 1e-15);
    CHECK((c->position(0, 0.0) - Vec2(-0.25, 0)).norm() < 1e-15);
  }

  TEST_CASE("diameter must stay below one") {
    CHECK_THROWS_AS(make_circle(0.5), Error);
    CHECK_THROWS_AS(make_lshape(0.36), Error);
    CHECK_NOTHROW(make_slit(0.95));
    CHECK_THROWS_AS(make_slit(1.0), Error);
  }

  TEST_CASE("arclength") {
    const CurvePtr c = make_circle(0.3);
    CHECK(arclength(*c, 1, 2.0, 2.5) == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(arclength(*c, 1, 2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(arclength(*c, 1, 0.0, 2.0), Error);
  }
}
