// SPDX-License-Identifier: Apache-2.0
#include "abem/estimator.hpp"

#include "abem/error.hpp"

#include <cmath>
#include <exception>

namespace abem {

double Indicators::total() const { return std::sqrt(total_sq); }

double Indicators::subset(std::span<const std::size_t> elems) const {
  double s = 0.0;
  for (std::size_t e : elems) s += per_element.at(e);
  return std::sqrt(s);
}

Indicators compute_indicators(const ResidualEvaluator& residual, int q) {
  if (q < 3) fail(ErrorKind::invalid_argument, "indicator quadrature needs at least three points");
  const DiscreteSpace& space = residual.space();
  const Mesh& mesh = space.mesh();
  const auto& gl = gauss_legendre(q);
  const auto n = static_cast<long>(mesh.size());
  Indicators ind;
  ind.per_element.assign(mesh.size(), 0.0);
  std::exception_ptr error;
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 8)
#endif
  for (long e = 0; e < n; ++e) {
    try {
      const auto idx = static_cast<std::size_t>(e);
      const ElementGeometry eg = mesh.geometry(idx);
      const auto vals = space.kind() == SpaceKind::P0 ? residual.residual_derivative(idx, q)
                                                      : residual.residual(idx, gl.nodes);
      double sum = 0.0;
      for (std::size_t j = 0; j < gl.size(); ++j) sum += gl.weights[j] * eg.jacobian(gl.nodes[j]) * std::norm(vals[j]);
      ind.per_element[idx] = eg.h * sum;
    } catch (...) {
#if defined(_OPENMP)
#pragma omp critical
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  for (double v : ind.per_element) ind.total_sq += v;
  return ind;
}

Indicators compute_indicators(const DiscreteSpace& space, const CoeffVector& coeffs, const WaveProblem& problem,
                              int q, const QuadOrders& orders) {
  const ResidualEvaluator residual(space, coeffs, problem, orders);
  return compute_indicators(residual, q);
}

}  // namespace abem
