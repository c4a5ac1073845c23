// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/mesh.hpp"
#include "abem/special_functions.hpp"

#include <Eigen/Core>

#include <span>

namespace abem {

using CoeffVector = Eigen::VectorXcd;

enum class SpaceKind { P0, S1 };

/// Lowest-order boundary element space on a mesh. S1 on a closed curve is
/// periodic; on an open arc the endpoint values are fixed to zero.
class DiscreteSpace {
 public:
  DiscreteSpace(SpaceKind kind, Mesh mesh);

  SpaceKind kind() const { return kind_; }
  const Mesh& mesh() const { return mesh_; }
  std::size_t dof_count() const { return dofs_; }

  /// S1 only: dof of the start / end node of an element, -1 if constrained.
  long start_dof(std::size_t elem) const;
  long end_dof(std::size_t elem) const;

  /// Value of a discrete function at reference coordinate s of an element.
  cplx value(std::span<const cplx> coeffs, std::size_t elem, double s) const;
  /// Arclength derivative (S1), zero for P0.
  cplx derivative(std::span<const cplx> coeffs, std::size_t elem) const;

 private:
  SpaceKind kind_;
  Mesh mesh_;
  std::size_t dofs_;
};

/// Represent a coarse discrete function on a refinement of its mesh.
CoeffVector prolong(const DiscreteSpace& coarse, const CoeffVector& coeffs, const DiscreteSpace& fine);

enum class Equation { weakly_singular, hypersingular };

struct IncidentField {
  enum class Kind { plane_wave, point_source, none };  // none: zero data
  Kind kind = Kind::plane_wave;
  Vec2 direction = Vec2(-std::sqrt(0.5), std::sqrt(0.5));
  Vec2 source = Vec2(0.6, 0.8);
};

/// Indirect scattering formulation: V_k phi = -u_inc (sound-soft) or
/// W_k u = -d_n u_inc (sound-hard).
struct WaveProblem {
  CurvePtr curve;
  double k = 0.0;
  Equation equation = Equation::weakly_singular;
  IncidentField incident;
  bool stabilize = false;  // add <1,u><1,v> to the hypersingular form

  SpaceKind space_kind() const { return equation == Equation::weakly_singular ? SpaceKind::P0 : SpaceKind::S1; }
  cplx incident_value(const Vec2& x) const;
  /// Right-hand side data g at a boundary point.
  cplx data(int seg, double t) const;
};

}  // namespace abem
