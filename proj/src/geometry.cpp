// SPDX-License-Identifier: Apache-2.0
#include "abem/geometry.hpp"

#include "abem/error.hpp"
#include "abem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace abem {

Vec2 SegmentMap::position(double t) const {
  if (kind == Kind::line) {
    const double u = (t - t0) / (t1 - t0);
    return p0 + u * (p1 - p0);
  }
  return center + radius * Vec2(std::cos(t), std::sin(t));
}

Vec2 SegmentMap::tangent(double t) const {
  if (kind == Kind::line) return (p1 - p0) / (t1 - t0);
  return radius * Vec2(-std::sin(t), std::cos(t));
}

double SegmentMap::curvature(double /*t*/) const {
  return kind == Kind::line ? 0.0 : 1.0 / radius;
}

namespace {

double sampled_diameter(const std::vector<SegmentMap>& segments) {
  constexpr int samples = 64;
  std::vector<Vec2> pts;
  for (const auto& s : segments) {
    for (int i = 0; i <= samples; ++i) pts.push_back(s.position(s.t0 + (s.t1 - s.t0) * i / samples));
  }
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

}  // namespace

BoundaryCurve::BoundaryCurve(std::string name, std::vector<SegmentMap> segments, bool closed,
                             double scale)
    : name_(std::move(name)), segments_(std::move(segments)), closed_(closed), scale_(scale) {
  if (segments_.empty()) fail(ErrorKind::invalid_argument, "curve without segments");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    segments_[i].id = static_cast<int>(i);
    if (!(segments_[i].t1 > segments_[i].t0))
      fail(ErrorKind::invalid_argument, "segment with empty parameter interval");
  }
  constexpr double tol = 1e-12;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const auto& a = segments_[i];
    const auto& b = segments_[i + 1];
    if ((a.position(a.t1) - b.position(b.t0)).norm() > tol)
      fail(ErrorKind::invalid_argument, "consecutive segments do not join");
  }
  if (closed_) {
    const auto& a = segments_.back();
    const auto& b = segments_.front();
    if ((a.position(a.t1) - b.position(b.t0)).norm() > tol)
      fail(ErrorKind::invalid_argument, "closed curve does not close up");
  }
  diameter_ = sampled_diameter(segments_);
  if (!(diameter_ < 1.0))
    fail(ErrorKind::invalid_argument,
         "curve diameter must be below 1 for an elliptic single-layer operator (got " +
             std::to_string(diameter_) + ")");
}

const SegmentMap& BoundaryCurve::segment(int id) const {
  if (id < 0 || id >= segment_count()) fail(ErrorKind::invalid_argument, "segment id out of range");
  return segments_[static_cast<std::size_t>(id)];
}

double BoundaryCurve::total_length() const {
  double sum = 0.0;
  for (const auto& s : segments_) sum += arclength(*this, s.id, s.t0, s.t1);
  return sum;
}

Vec2 BoundaryCurve::normal(int seg, double t) const {
  const Vec2 tau = tangent(seg, t).normalized();
  return closed_ ? Vec2(tau.y(), -tau.x()) : Vec2(-tau.y(), tau.x());
}

CurvePtr make_circle(double radius, double scale) {
  if (!(radius > 0.0)) fail(ErrorKind::invalid_argument, "circle radius must be positive");
  if (!(scale > 0.0)) fail(ErrorKind::invalid_argument, "scale must be positive");
  std::vector<SegmentMap> segs;
  constexpr double quarter = std::numbers::pi / 2;
  for (int q = 0; q < 4; ++q) {
    SegmentMap s;
    s.kind = SegmentMap::Kind::arc;
    s.t0 = q * quarter;
    s.t1 = (q + 1) * quarter;
    s.radius = radius * scale;
    segs.push_back(s);
  }
  return std::make_shared<BoundaryCurve>("circle", std::move(segs), true, scale);
}

namespace {

CurvePtr make_polygon(std::string name, const std::vector<Vec2>& vertices, bool closed, double scale) {
  if (!(scale > 0.0)) fail(ErrorKind::invalid_argument, "scale must be positive");
  std::vector<SegmentMap> segs;
  const std::size_t n = vertices.size();
  const std::size_t edges = closed ? n : n - 1;
  for (std::size_t i = 0; i < edges; ++i) {
    SegmentMap s;
    s.kind = SegmentMap::Kind::line;
    s.p0 = scale * vertices[i];
    s.p1 = scale * vertices[(i + 1) % n];
    segs.push_back(s);
  }
  return std::make_shared<BoundaryCurve>(std::move(name), std::move(segs), closed, scale);
}

}  // namespace

CurvePtr make_lshape(double scale) {
  return make_polygon("lshape",
                      {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(-1, 1), Vec2(-1, -1), Vec2(0, -1)},
                      true, scale);
}

CurvePtr make_slit(double scale) {
  return make_polygon("slit", {Vec2(-0.5, 0), Vec2(0.5, 0)}, false, scale);
}

double arclength(const BoundaryCurve& curve, int seg, double lo, double hi) {
  const auto& s = curve.segment(seg);
  constexpr double slack = 1e-14;
  const double span = s.t1 - s.t0;
  if (lo < s.t0 - slack * span || hi > s.t1 + slack * span || lo > hi)
    fail(ErrorKind::invalid_argument, "interval outside segment parameter range");
  if (hi == lo) return 0.0;
  const auto& rule = gauss_legendre(16);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * s.speed(lo + (hi - lo) * rule.nodes[i]);
  return sum * (hi - lo);
}

}  // namespace abem
