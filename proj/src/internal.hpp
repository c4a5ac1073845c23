// SPDX-License-Identifier: Apache-2.0
// Shared helpers of the assembly and potential evaluation code.
#pragma once

#include "abem/mesh.hpp"
#include "abem/quadrature.hpp"
#include "abem/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace abem::detail {

inline constexpr double laplace_log_part = -0.5 / std::numbers::pi;

/// Kernel contribution of one plan node for G_k and G_0 (see PairNode).
struct NodeKernel {
  cplx gk;
  double g0;
};

inline NodeKernel eval_node(double r, double k, bool log_only, double log_shift) {
  if (log_only) return {k == 0.0 ? cplx(laplace_log_part) : cplx(kernel_log_part(r, k)), laplace_log_part};
  const double lr = std::log(r) - log_shift;
  const double g0 = laplace_log_part * lr;
  if (k == 0.0) return {g0, g0};
  const KernelSplit kv = kernel_split(r, k);
  return {kv.log_part * lr + kv.smooth, g0};
}

/// Gauss-Legendre nodes of every element, for every order up to a bound.
class ElementNodes {
 public:
  struct Node {
    Vec2 x;
    Vec2 normal;
    double s;  // reference coordinate
    double w;  // reference weight times jacobian
  };

  ElementNodes(const Mesh& mesh, int max_order) : n_elem_(mesh.size()), max_order_(max_order) {
    offsets_.assign(static_cast<std::size_t>(max_order + 1), 0);
    std::size_t total = 0;
    for (int n = 1; n <= max_order; ++n) {
      offsets_[static_cast<std::size_t>(n)] = total;
      total += n_elem_ * static_cast<std::size_t>(n);
    }
    nodes_.resize(total);
    for (int n = 1; n <= max_order; ++n) {
      const auto& g = gauss_legendre(n);
      for (std::size_t e = 0; e < n_elem_; ++e) {
        const ElementGeometry eg = mesh.geometry(e);
        const Element& el = mesh.element(e);
        for (int q = 0; q < n; ++q) {
          const double s = g.nodes[static_cast<std::size_t>(q)];
          Node& nd = nodes_[offsets_[static_cast<std::size_t>(n)] + e * static_cast<std::size_t>(n) +
                            static_cast<std::size_t>(q)];
          nd.x = eg.position(s);
          nd.normal = mesh.curve().normal(el.seg, eg.param(s));
          nd.s = s;
          nd.w = g.weights[static_cast<std::size_t>(q)] * eg.jacobian(s);
        }
      }
    }
  }

  int max_order() const { return max_order_; }

  std::span<const Node> nodes(std::size_t elem, int order) const {
    const std::size_t n = static_cast<std::size_t>(order);
    return {nodes_.data() + offsets_[n] + elem * n, n};
  }

 private:
  std::size_t n_elem_;
  int max_order_;
  std::vector<std::size_t> offsets_;
  std::vector<Node> nodes_;
};

inline int max_node_order(const Mesh& mesh, double k, const QuadOrders& orders) {
  int m = std::max(orders.regular, orders.near);
  m = std::max(m, oscillation_order(k * mesh.max_h()));
  return std::min(std::max(m, 2), 32);
}

}  // namespace abem::detail
