// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/discrete_space.hpp"
#include "abem/quadrature.hpp"

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace abem {

namespace detail {
class ElementNodes;
}

/// Single-layer potentials of discrete densities evaluated at points on the
/// boundary, identified by element and reference coordinate.
class PotentialEvaluator {
 public:
  PotentialEvaluator(const Mesh& mesh, double k, const QuadOrders& orders = {});
  ~PotentialEvaluator();
  PotentialEvaluator(PotentialEvaluator&&) noexcept;

  /// V_k psi for a piecewise constant psi (one value per element).
  cplx single_layer(std::span<const cplx> density, std::size_t elem, double s) const;

  /// Both at once: V_k psi and the vector potential V_k(u n) of a continuous
  /// piecewise linear u given by its values at element start / end nodes.
  struct Combined {
    cplx scalar;
    std::array<cplx, 2> vector;
  };
  Combined combined(std::span<const cplx> density, std::span<const cplx> start_values,
                    std::span<const cplx> end_values, std::size_t elem, double s) const;

  const Mesh& mesh() const { return mesh_; }

 private:
  const Mesh& mesh_;
  double k_;
  QuadOrders orders_;
  std::unique_ptr<detail::ElementNodes> nodes_;
};

/// Residual of a discrete solution: V_k phi - g (weakly singular) or
/// W_k u - g (hypersingular, plus <1,u> when stabilized), evaluated element-wise.
class ResidualEvaluator {
 public:
  ResidualEvaluator(const DiscreteSpace& space, const CoeffVector& coeffs, const WaveProblem& problem,
                    const QuadOrders& orders = {});

  /// r at reference points strictly inside the element.
  std::vector<cplx> residual(std::size_t elem, std::span<const double> pts) const;

  /// Arclength derivative of r at the q Gauss points of the element, from the
  /// degree q+1 interpolant of r at q+2 Chebyshev points.
  std::vector<cplx> residual_derivative(std::size_t elem, int q) const;

  const DiscreteSpace& space() const { return space_; }

 private:
  const DiscreteSpace& space_;
  const WaveProblem& problem_;
  PotentialEvaluator potential_;
  std::vector<cplx> density_;  // phi (P0) or u' (S1), per element
  std::vector<cplx> start_, end_;
  cplx mean_ = 0.0;             // <1,u> for the stabilized form
};

std::vector<cplx> eval_residual(const DiscreteSpace& space, const CoeffVector& coeffs, const WaveProblem& problem,
                                std::size_t elem, std::span<const double> pts, const QuadOrders& orders = {});

std::vector<cplx> eval_residual_derivative(const DiscreteSpace& space, const CoeffVector& coeffs,
                                           const WaveProblem& problem, std::size_t elem, int q,
                                           const QuadOrders& orders = {});

/// Reference points of the first-kind Chebyshev grid with m points on [0,1].
std::vector<double> chebyshev_points(int m);

/// Values of d/ds of the interpolant through (chebyshev_points(m), values) at pts.
std::vector<cplx> chebyshev_derivative(std::span<const cplx> values, std::span<const double> pts);

}  // namespace abem
