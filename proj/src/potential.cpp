// SPDX-License-Identifier: Apache-2.0
#include "abem/potential.hpp"

#include "abem/error.hpp"
#include "internal.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace abem {

namespace {

using detail::eval_node;

// Pieces shorter than the resolution of point coordinates: the target sits on
// the piece for all practical purposes, so integrate c(0) log|tau| + smooth
// over [0, len] in closed form. Returns the mean kernel value on the piece.
bool unresolved(double len, const Vec2& x) {
  return len <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + x.norm());
}

cplx tiny_piece_mean(double len, double k) {
  const KernelSplit ks = kernel_split(len, k);
  return ks.log_part * (std::log(len) - 1.0) + ks.smooth;
}

// Visits quadrature nodes (t, weight incl. jacobian, G_k(x, y(t))) of one
// source element for a target point x. `same` marks x = y(s_x) on this element.
template <class F>
void log_piece(const ElementGeometry& eg, const Vec2& x, double t_sing, double t_other, double k,
               const QuadOrders& orders, F&& f) {
  const double len = std::abs(t_other - t_sing);
  if (len == 0.0) return;
  const double dir = t_other > t_sing ? 1.0 : -1.0;
  if (const double phys = eg.jacobian(t_sing) * len; unresolved(phys, x)) {
    f(0.5 * (t_sing + t_other), phys, tiny_piece_mean(phys, k));
    return;
  }
  const int n_gl = std::max(orders.near, oscillation_order(k * eg.h * len));
  const auto& lg = gauss_log(orders.log);
  const auto& gl = gauss_legendre(n_gl);
  for (std::size_t i = 0; i < lg.size(); ++i) {
    const double t = t_sing + dir * len * lg.nodes[i];
    const double r = (x - eg.position(t)).norm();
    const auto g = eval_node(r, k, true, 0.0);
    f(t, -lg.weights[i] * len * eg.jacobian(t), g.gk);
  }
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double u = gl.nodes[i];
    const double t = t_sing + dir * len * u;
    const double r = (x - eg.position(t)).norm();
    const auto g = eval_node(r, k, false, std::log(u));
    f(t, gl.weights[i] * len * eg.jacobian(t), g.gk);
  }
}

template <class F>
void subdivided(const ElementGeometry& eg, const Vec2& x, double t0, double t1, double k, const QuadOrders& orders,
                int depth, F&& f) {
  if (depth > 80) fail(ErrorKind::numerical, "evaluation point lies on a source element");
  const double tm = 0.5 * (t0 + t1);
  const double len = eg.jacobian(tm) * (t1 - t0);
  if (unresolved(len, x)) {
    f(tm, len, tiny_piece_mean(len, k));
    return;
  }
  const double dist = (x - eg.position(tm)).norm() - 0.5 * len;
  if (dist >= len) {
    const auto& gl = gauss_legendre(separated_order(dist / len, k * len, orders.regular));
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double t = t0 + (t1 - t0) * gl.nodes[i];
      const auto g = eval_node((x - eg.position(t)).norm(), k, false, 0.0);
      f(t, gl.weights[i] * (t1 - t0) * eg.jacobian(t), g.gk);
    }
    return;
  }
  subdivided(eg, x, t0, tm, k, orders, depth + 1, f);
  subdivided(eg, x, tm, t1, k, orders, depth + 1, f);
}

}  // namespace

PotentialEvaluator::PotentialEvaluator(const Mesh& mesh, double k, const QuadOrders& orders)
    : mesh_(mesh), k_(k), orders_(orders),
      nodes_(std::make_unique<detail::ElementNodes>(mesh, detail::max_node_order(mesh, k, orders))) {
  if (!(k >= 0.0) || !std::isfinite(k)) fail(ErrorKind::invalid_argument, "wavenumber must be finite and >= 0");
}

PotentialEvaluator::~PotentialEvaluator() = default;
PotentialEvaluator::PotentialEvaluator(PotentialEvaluator&&) noexcept = default;

cplx PotentialEvaluator::single_layer(std::span<const cplx> density, std::size_t elem, double s) const {
  return combined(density, {}, {}, elem, s).scalar;
}

PotentialEvaluator::Combined PotentialEvaluator::combined(std::span<const cplx> density,
                                                          std::span<const cplx> start_values,
                                                          std::span<const cplx> end_values, std::size_t elem,
                                                          double s) const {
  if (!(s > 0.0 && s < 1.0)) fail(ErrorKind::invalid_argument, "evaluation point must be interior to its element");
  const std::size_t n = mesh_.size();
  if (density.size() != n) fail(ErrorKind::invalid_argument, "density size does not match the mesh");
  const bool vec = !start_values.empty();
  if (vec && (start_values.size() != n || end_values.size() != n))
    fail(ErrorKind::invalid_argument, "nodal values do not match the mesh");
  const ElementGeometry ex = mesh_.geometry(elem);
  const Vec2 x = ex.position(s);
  Combined out{0.0, {0.0, 0.0}};
  for (std::size_t e = 0; e < n; ++e) {
    const ElementGeometry eg = mesh_.geometry(e);
    const int seg = mesh_.element(e).seg;
    cplx scalar = 0.0;
    std::array<cplx, 2> v{0.0, 0.0};
    auto add = [&](double t, double w, cplx g) {
      const cplx wg = w * g;
      scalar += wg;
      if (!vec) return;
      const Vec2 ny = mesh_.curve().normal(seg, eg.param(t));
      const cplx u = (1.0 - t) * start_values[e] + t * end_values[e];
      v[0] += wg * u * ny.x();
      v[1] += wg * u * ny.y();
    };
    if (e == elem) {
      log_piece(eg, x, s, 0.0, k_, orders_, add);
      log_piece(eg, x, s, 1.0, k_, orders_, add);
    } else {
      const double dist = (x - eg.midpoint()).norm() - 0.5 * eg.h;
      if (dist >= eg.h) {
        const int order = separated_order(dist / eg.h, k_ * eg.h, orders_.regular);
        for (const auto& nd : nodes_->nodes(e, order)) {
          const cplx wg = nd.w * eval_node((x - nd.x).norm(), k_, false, 0.0).gk;
          scalar += wg;
          if (!vec) continue;
          const cplx u = (1.0 - nd.s) * start_values[e] + nd.s * end_values[e];
          v[0] += wg * u * nd.normal.x();
          v[1] += wg * u * nd.normal.y();
        }
      } else {
        subdivided(eg, x, 0.0, 1.0, k_, orders_, 0, add);
      }
    }
    out.scalar += density[e] * scalar;
    out.vector[0] += v[0];
    out.vector[1] += v[1];
  }
  return out;
}

std::vector<double> chebyshev_points(int m) {
  if (m < 2) fail(ErrorKind::invalid_argument, "Chebyshev interpolation needs at least two points");
  std::vector<double> pts(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j)
    pts[static_cast<std::size_t>(j)] = 0.5 * (1.0 + std::cos(std::numbers::pi * (2 * j + 1) / (2.0 * m)));
  return pts;
}

std::vector<cplx> chebyshev_derivative(std::span<const cplx> values, std::span<const double> pts) {
  const int m = static_cast<int>(values.size());
  if (m < 2) fail(ErrorKind::invalid_argument, "Chebyshev interpolation needs at least two points");
  std::vector<cplx> c(static_cast<std::size_t>(m), 0.0);
  for (int n = 0; n < m; ++n) {
    cplx sum = 0.0;
    for (int j = 0; j < m; ++j)
      sum += values[static_cast<std::size_t>(j)] * std::cos(n * std::numbers::pi * (2 * j + 1) / (2.0 * m));
    c[static_cast<std::size_t>(n)] = (n == 0 ? 1.0 : 2.0) / m * sum;
  }
  std::vector<cplx> out;
  out.reserve(pts.size());
  for (double s : pts) {
    const double x = 2.0 * s - 1.0;
    // T_n' = n U_{n-1}
    double u_prev = 0.0, u = 1.0;
    cplx d = 0.0;
    for (int n = 1; n < m; ++n) {
      d += static_cast<double>(n) * c[static_cast<std::size_t>(n)] * u;
      const double next = 2.0 * x * u - u_prev;
      u_prev = u;
      u = next;
    }
    out.push_back(2.0 * d);
  }
  return out;
}

ResidualEvaluator::ResidualEvaluator(const DiscreteSpace& space, const CoeffVector& coeffs,
                                     const WaveProblem& problem, const QuadOrders& orders)
    : space_(space), problem_(problem), potential_(space.mesh(), problem.k, orders) {
  if (space.kind() != problem.space_kind()) fail(ErrorKind::invalid_argument, "space does not match the equation");
  if (static_cast<std::size_t>(coeffs.size()) != space.dof_count())
    fail(ErrorKind::invalid_argument, "coefficient vector does not match the space");
  const Mesh& mesh = space.mesh();
  const std::span<const cplx> c(coeffs.data(), static_cast<std::size_t>(coeffs.size()));
  density_.resize(mesh.size());
  if (space.kind() == SpaceKind::P0) {
    for (std::size_t e = 0; e < mesh.size(); ++e) density_[e] = c[e];
    return;
  }
  start_.resize(mesh.size());
  end_.resize(mesh.size());
  for (std::size_t e = 0; e < mesh.size(); ++e) {
    start_[e] = space.value(c, e, 0.0);
    end_[e] = space.value(c, e, 1.0);
    density_[e] = space.derivative(c, e);
    mean_ += 0.5 * mesh.element(e).h * (start_[e] + end_[e]);
  }
}

std::vector<cplx> ResidualEvaluator::residual(std::size_t elem, std::span<const double> pts) const {
  const Mesh& mesh = space_.mesh();
  const Element& el = mesh.element(elem);
  const ElementGeometry eg = mesh.geometry(elem);
  std::vector<cplx> out;
  out.reserve(pts.size());
  if (space_.kind() == SpaceKind::P0) {
    for (double s : pts) out.push_back(potential_.single_layer(density_, elem, s) - problem_.data(el.seg, eg.param(s)));
    return out;
  }
  // W_k u = -d/ds V_k(u') - k^2 n . V_k(u n)
  const int m = std::max<int>(6, static_cast<int>(pts.size()) + 2);
  const auto cheb = chebyshev_points(m);
  std::vector<cplx> vals;
  vals.reserve(cheb.size());
  for (double s : cheb) vals.push_back(potential_.single_layer(density_, elem, s));
  const auto dv = chebyshev_derivative(vals, pts);
  const double k2 = problem_.k * problem_.k;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double s = pts[i];
    cplx w = -dv[i] / eg.jacobian(s);
    if (k2 > 0.0) {
      const auto comb = potential_.combined(density_, start_, end_, elem, s);
      const Vec2 nx = mesh.curve().normal(el.seg, eg.param(s));
      w -= k2 * (nx.x() * comb.vector[0] + nx.y() * comb.vector[1]);
    }
    if (problem_.stabilize) w += mean_;
    out.push_back(w - problem_.data(el.seg, eg.param(s)));
  }
  return out;
}

std::vector<cplx> ResidualEvaluator::residual_derivative(std::size_t elem, int q) const {
  if (q < 3) fail(ErrorKind::invalid_argument, "residual derivative needs at least three Gauss points");
  const auto cheb = chebyshev_points(q + 2);
  const auto vals = residual(elem, cheb);
  const auto& gl = gauss_legendre(q);
  auto d = chebyshev_derivative(vals, gl.nodes);
  const ElementGeometry eg = space_.mesh().geometry(elem);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] /= eg.jacobian(gl.nodes[i]);
  return d;
}

std::vector<cplx> eval_residual(const DiscreteSpace& space, const CoeffVector& coeffs, const WaveProblem& problem,
                                std::size_t elem, std::span<const double> pts, const QuadOrders& orders) {
  return ResidualEvaluator(space, coeffs, problem, orders).residual(elem, pts);
}

std::vector<cplx> eval_residual_derivative(const DiscreteSpace& space, const CoeffVector& coeffs,
                                           const WaveProblem& problem, std::size_t elem, int q,
                                           const QuadOrders& orders) {
  return ResidualEvaluator(space, coeffs, problem, orders).residual_derivative(elem, q);
}

}  // namespace abem
