// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/geometry.hpp"

#include <vector>

namespace abem {

/// Quadrature rule on the reference interval [0,1].
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with n points on [0,1], 1 <= n <= 64.
const QuadRule& gauss_legendre(int n);

/// Gauss rule for the weight -log(t) on [0,1], 1 <= n <= 32.
const QuadRule& gauss_log(int n);

struct QuadOrders {
  int regular = 8;  // well separated pairs, upper bound of the distance-driven order
  int near = 12;    // smooth direction of singular plans and subdivided near pairs
  int log = 10;     // log-weighted direction of singular plans
};

/// Geometry of one boundary element: parameter subinterval [a,b] of a segment.
/// Reference coordinate s in [0,1] maps to a + s (b - a).
struct ElementGeometry {
  const SegmentMap* map = nullptr;
  double a = 0.0;
  double b = 1.0;
  double h = 0.0;  // arclength

  double param(double s) const { return a + s * (b - a); }
  Vec2 position(double s) const { return map->position(param(s)); }
  /// ds_physical / ds_reference
  double jacobian(double s) const { return map->speed(param(s)) * (b - a); }
  Vec2 midpoint() const { return position(0.5); }
};

enum class PairRelation { identical, adjacent, separated };

/// Which element ends coincide for a touching pair.
struct SharedNode {
  bool present = false;
  bool a_at_end = false;  // shared node is s = 1 on Ta (otherwise s = 0)
  bool b_at_end = false;  // shared node is t = 1 on Tb
};

/// Lower bound on the distance between two elements.
double distance_lower_bound(const ElementGeometry& ta, const ElementGeometry& tb);

/// Classification by dist >= max(h_a, h_b); ties go to adjacent.
PairRelation classify_pair(const ElementGeometry& ta, const ElementGeometry& tb, bool same_element,
                           const SharedNode& shared);

/// A node of a pair plan in reference coordinates (s on Ta, t on Tb). It
/// contributes weight * c(r) when log_only is set, and
/// weight * (c(r) * (log r - log_shift) + smooth(r)) otherwise, where the
/// kernel is split as G = c(r) log r + smooth(r). Regular nodes have
/// log_shift = 0 and therefore contribute weight * G(r).
struct PairNode {
  double s = 0.0;
  double t = 0.0;
  double weight = 0.0;
  bool log_only = false;
  double log_shift = 0.0;
};

struct PairPlan {
  PairRelation relation = PairRelation::separated;
  std::vector<PairNode> nodes;
};

/// Gauss-Legendre order for a separated pair with distance/size ratio
/// `ratio` and oscillation parameter k*h, capped by `cap`.
int separated_order(double ratio, double kh, int cap);

/// Smallest order resolving exp(i k h s) on the reference interval to ~1e-13.
int oscillation_order(double kh);

/// Quadrature plan for the double integral over Ta x Tb of a kernel with a
/// logarithmic singularity. Jacobians of the element maps are not included.
PairPlan pair_rule(const ElementGeometry& ta, const ElementGeometry& tb, PairRelation relation,
                   const SharedNode& shared, const QuadOrders& orders, double k);

}  // namespace abem
