// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <memory>
#include <string>
#include <vector>

namespace abem {

using Vec2 = Eigen::Vector2d;

/// One smooth piece of the boundary. Lines are parametrized over [0,1],
/// arcs by the polar angle; both have constant speed.
struct SegmentMap {
  enum class Kind { line, arc };

  int id = 0;
  Kind kind = Kind::line;
  double t0 = 0.0;
  double t1 = 1.0;
  Vec2 p0 = Vec2::Zero();  // line start
  Vec2 p1 = Vec2::Zero();  // line end
  Vec2 center = Vec2::Zero();
  double radius = 0.0;

  Vec2 position(double t) const;
  Vec2 tangent(double t) const;
  double speed(double t) const { return tangent(t).norm(); }
  double curvature(double t) const;
};

/// Piecewise smooth parametric curve. Closed curves run counterclockwise.
class BoundaryCurve {
 public:
  BoundaryCurve(std::string name, std::vector<SegmentMap> segments, bool closed, double scale);

  const std::string& name() const { return name_; }
  const std::vector<SegmentMap>& segments() const { return segments_; }
  const SegmentMap& segment(int id) const;
  int segment_count() const { return static_cast<int>(segments_.size()); }
  bool closed() const { return closed_; }
  double scale() const { return scale_; }
  double diameter() const { return diameter_; }
  double total_length() const;

  Vec2 position(int seg, double t) const { return segment(seg).position(t); }
  Vec2 tangent(int seg, double t) const { return segment(seg).tangent(t); }
  /// Unit normal. Closed curves: exterior normal (clockwise rotation of the
  /// tangent). Open arcs: counterclockwise rotation, so the slit has (0,1).
  Vec2 normal(int seg, double t) const;

 private:
  std::string name_;
  std::vector<SegmentMap> segments_;
  bool closed_;
  double scale_;
  double diameter_;
};

using CurvePtr = std::shared_ptr<const BoundaryCurve>;

/// Circle of the given radius centred at the origin, four quarter arcs.
CurvePtr make_circle(double radius, double scale = 1.0);

/// L-shaped polygon with the reentrant corner at the origin.
CurvePtr make_lshape(double scale = 0.175);

/// Open straight arc from (-1/2,0) to (1/2,0).
CurvePtr make_slit(double scale = 0.5);

/// Integral of |tangent| over [lo,hi] inside the parameter interval of `seg`.
double arclength(const BoundaryCurve& curve, int seg, double lo, double hi);

}  // namespace abem
