// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/potential.hpp"

#include <span>
#include <vector>

namespace abem {

/// Squared local indicators eta(T)^2, aligned with the mesh elements.
struct Indicators {
  std::vector<double> per_element;
  double total_sq = 0.0;

  double total() const;
  /// sqrt of the sum over a subset of elements.
  double subset(std::span<const std::size_t> elems) const;
};

/// Weakly singular: eta(T)^2 = h(T) ||d_s (V_k phi - g)||^2_{L2(T)}.
/// Hypersingular: eta(T)^2 = h(T) ||g - W_k u||^2_{L2(T)}.
/// Both by a q-point Gauss rule on each element.
Indicators compute_indicators(const ResidualEvaluator& residual, int q = 4);

Indicators compute_indicators(const DiscreteSpace& space, const CoeffVector& coeffs, const WaveProblem& problem,
                              int q = 4, const QuadOrders& orders = {});

}  // namespace abem
