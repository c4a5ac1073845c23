// SPDX-License-Identifier: Apache-2.0
#include "abem/assembly.hpp"

#include "abem/error.hpp"
#include "internal.hpp"

#include <array>
#include <exception>
#include <map>
#include <tuple>

namespace abem {

namespace {

using detail::ElementNodes;
using detail::eval_node;

// Double-integral moments of one element pair. Index 0 is the plain kernel
// integral, 1..4 carry n(x).n(y) psi_a(s) psi_b(t) for (a,b) = 00, 01, 10, 11.
struct PairMoments {
  std::array<cplx, 5> k{};
  double zero = 0.0;  // plain integral of the k = 0 kernel
};

struct ElementMatrices {
  ComplexDenseMatrix plain;
  std::array<ComplexDenseMatrix, 4> normal;  // only for S1 with k > 0
  Eigen::MatrixXd laplace;
};

class PairIntegrator {
 public:
  PairIntegrator(const Mesh& mesh, double k, const QuadOrders& orders, bool with_normals)
      : mesh_(mesh), k_(k), orders_(orders), normals_(with_normals),
        nodes_(mesh, detail::max_node_order(mesh, k, orders)) {
    // Singular plans only depend on the orders and the touching configuration,
    // so they are built once up front and shared read-only by all threads.
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const double h = mesh.element(i).h;
      singular_plan(0, n_gl(h), true);
      for (long j : {mesh.prev(i), mesh.next(i)}) {
        if (j < 0) continue;
        const int n = n_gl(std::max(h, mesh.element(static_cast<std::size_t>(j)).h));
        singular_plan(1, n, true);
        singular_plan(2, n, true);
      }
    }
  }

  PairMoments integrate(std::size_t i, std::size_t j) const {
    const ElementGeometry ta = mesh_.geometry(i);
    const ElementGeometry tb = mesh_.geometry(j);
    if (i == j) return from_plan(i, j, ta, tb, singular_plan(0, n_gl(ta.h), false));
    if (static_cast<long>(j) == mesh_.next(i))
      return from_plan(i, j, ta, tb, singular_plan(1, n_gl(std::max(ta.h, tb.h)), false));
    if (static_cast<long>(j) == mesh_.prev(i))
      return from_plan(i, j, ta, tb, singular_plan(2, n_gl(std::max(ta.h, tb.h)), false));
    const SharedNode none;
    if (classify_pair(ta, tb, false, none) == PairRelation::separated) {
      const double hmax = std::max(ta.h, tb.h);
      const int n = separated_order(distance_lower_bound(ta, tb) / hmax, k_ * hmax, orders_.regular);
      return separated(i, j, n);
    }
    const PairPlan plan = pair_rule(ta, tb, PairRelation::adjacent, none, orders_, k_);
    return from_plan(i, j, ta, tb, plan.nodes);
  }

 private:
  int n_gl(double h) const { return std::max(orders_.near, oscillation_order(k_ * h)); }

  // kind 0: identical, 1: Tb follows Ta, 2: Tb precedes Ta
  const std::vector<PairNode>& singular_plan(int kind, int n, bool build) const {
    const auto key = std::make_pair(kind, n);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    if (!build) fail(ErrorKind::numerical, "missing singular quadrature plan");
    const ElementGeometry dummy;
    QuadOrders o = orders_;
    o.near = n;
    SharedNode shared;
    PairRelation rel = PairRelation::identical;
    if (kind > 0) {
      shared.present = true;
      shared.a_at_end = kind == 1;
      shared.b_at_end = kind == 2;
      rel = PairRelation::adjacent;
    }
    // k = 0 keeps pair_rule from raising the smooth order again.
    return plans_.emplace(key, pair_rule(dummy, dummy, rel, shared, o, 0.0).nodes).first->second;
  }

  PairMoments from_plan(std::size_t i, std::size_t j, const ElementGeometry& ta, const ElementGeometry& tb,
                        const std::vector<PairNode>& plan) const {
    PairMoments m;
    const Element& ea = mesh_.element(i);
    const Element& eb = mesh_.element(j);
    for (const PairNode& nd : plan) {
      const Vec2 x = ta.position(nd.s);
      const Vec2 y = tb.position(nd.t);
      const double w = nd.weight * ta.jacobian(nd.s) * tb.jacobian(nd.t);
      const detail::NodeKernel g = eval_node((x - y).norm(), k_, nd.log_only, nd.log_shift);
      double nn = 0.0;
      if (normals_)
        nn = mesh_.curve().normal(ea.seg, ta.param(nd.s)).dot(mesh_.curve().normal(eb.seg, tb.param(nd.t)));
      accumulate(m, w, g, nn, nd.s, nd.t);
    }
    return m;
  }

  PairMoments separated(std::size_t i, std::size_t j, int n) const {
    PairMoments m;
    const auto na = nodes_.nodes(i, n);
    const auto nb = nodes_.nodes(j, n);
    for (const auto& p : na)
      for (const auto& q : nb) {
        const detail::NodeKernel g = eval_node((p.x - q.x).norm(), k_, false, 0.0);
        accumulate(m, p.w * q.w, g, normals_ ? p.normal.dot(q.normal) : 0.0, p.s, q.s);
      }
    return m;
  }

  void accumulate(PairMoments& m, double w, const detail::NodeKernel& g, double nn, double s, double t) const {
    const cplx wg = w * g.gk;
    m.k[0] += wg;
    m.zero += w * g.g0;
    if (!normals_) return;
    const cplx c = wg * nn;
    m.k[1] += c * ((1.0 - s) * (1.0 - t));
    m.k[2] += c * ((1.0 - s) * t);
    m.k[3] += c * (s * (1.0 - t));
    m.k[4] += c * (s * t);
  }

  const Mesh& mesh_;
  double k_;
  QuadOrders orders_;
  bool normals_;
  ElementNodes nodes_;
  mutable std::map<std::pair<int, int>, std::vector<PairNode>> plans_;
};

ElementMatrices element_matrices(const Mesh& mesh, double k, const QuadOrders& orders, bool with_normals) {
  const auto n = static_cast<Eigen::Index>(mesh.size());
  const PairIntegrator integrator(mesh, k, orders, with_normals);
  ElementMatrices em;
  em.plain.resize(n, n);
  em.laplace.resize(n, n);
  if (with_normals)
    for (auto& m : em.normal) m.resize(n, n);
  std::exception_ptr error;
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 4)
#endif
  for (Eigen::Index i = 0; i < n; ++i) {
    try {
      for (Eigen::Index j = i; j < n; ++j) {
        const PairMoments pm = integrator.integrate(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        em.plain(i, j) = em.plain(j, i) = pm.k[0];
        em.laplace(i, j) = em.laplace(j, i) = pm.zero;
        if (!with_normals) continue;
        // (a,b) on (i,j) is (b,a) on (j,i)
        em.normal[0](i, j) = pm.k[1];
        em.normal[1](i, j) = pm.k[2];
        em.normal[2](i, j) = pm.k[3];
        em.normal[3](i, j) = pm.k[4];
        em.normal[0](j, i) = pm.k[1];
        em.normal[1](j, i) = pm.k[3];
        em.normal[2](j, i) = pm.k[2];
        em.normal[3](j, i) = pm.k[4];
      }
    } catch (...) {
#if defined(_OPENMP)
#pragma omp critical
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return em;
}

// Integrals <1, psi_p> of the S1 basis.
Eigen::VectorXd hat_masses(const DiscreteSpace& space) {
  const Mesh& mesh = space.mesh();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.dof_count()));
  const auto& g = gauss_legendre(4);
  for (std::size_t e = 0; e < mesh.size(); ++e) {
    const ElementGeometry eg = mesh.geometry(e);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) {
      const double w = g.weights[q] * eg.jacobian(g.nodes[q]);
      m0 += w * (1.0 - g.nodes[q]);
      m1 += w * g.nodes[q];
    }
    if (const long d = space.start_dof(e); d >= 0) m(d) += m0;
    if (const long d = space.end_dof(e); d >= 0) m(d) += m1;
  }
  return m;
}

template <class Matrix>
Matrix scatter_derivatives(const DiscreteSpace& space, const Matrix& plain) {
  const Mesh& mesh = space.mesh();
  const auto nd = static_cast<Eigen::Index>(space.dof_count());
  Matrix out = Matrix::Zero(nd, nd);
  const std::size_t n = mesh.size();
  for (std::size_t i = 0; i < n; ++i) {
    const long di[2] = {space.start_dof(i), space.end_dof(i)};
    const double si[2] = {-1.0 / mesh.element(i).h, 1.0 / mesh.element(i).h};
    for (std::size_t j = 0; j < n; ++j) {
      const long dj[2] = {space.start_dof(j), space.end_dof(j)};
      const double sj[2] = {-1.0 / mesh.element(j).h, 1.0 / mesh.element(j).h};
      const auto v = plain(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      for (int a = 0; a < 2; ++a) {
        if (di[a] < 0) continue;
        for (int b = 0; b < 2; ++b)
          if (dj[b] >= 0) out(di[a], dj[b]) += si[a] * sj[b] * v;
      }
    }
  }
  return out;
}

void scatter_normals(const DiscreteSpace& space, const ElementMatrices& em, double factor, ComplexDenseMatrix& out) {
  const Mesh& mesh = space.mesh();
  const std::size_t n = mesh.size();
  for (std::size_t i = 0; i < n; ++i) {
    const long di[2] = {space.start_dof(i), space.end_dof(i)};
    for (std::size_t j = 0; j < n; ++j) {
      const long dj[2] = {space.start_dof(j), space.end_dof(j)};
      for (int a = 0; a < 2; ++a) {
        if (di[a] < 0) continue;
        for (int b = 0; b < 2; ++b)
          if (dj[b] >= 0)
            out(di[a], dj[b]) +=
                factor * em.normal[static_cast<std::size_t>(2 * a + b)](static_cast<Eigen::Index>(i),
                                                                         static_cast<Eigen::Index>(j));
      }
    }
  }
}

void check_k(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) fail(ErrorKind::invalid_argument, "wavenumber must be finite and >= 0");
}

struct Assembled {
  ComplexDenseMatrix A;
  Eigen::MatrixXd gram;
};

Assembled assemble_operator(const DiscreteSpace& space, double k, bool stabilize, const QuadOrders& orders) {
  check_k(k);
  const Mesh& mesh = space.mesh();
  Assembled out;
  if (space.kind() == SpaceKind::P0) {
    if (stabilize) fail(ErrorKind::invalid_argument, "stabilization applies to the hypersingular operator only");
    ElementMatrices em = element_matrices(mesh, k, orders, false);
    out.A = std::move(em.plain);
    out.gram = std::move(em.laplace);
    return out;
  }
  if (stabilize && !mesh.closed())
    fail(ErrorKind::invalid_argument, "stabilization is only defined on closed curves");
  const ElementMatrices em = element_matrices(mesh, k, orders, k > 0.0);
  out.A = scatter_derivatives(space, em.plain);
  if (k > 0.0) scatter_normals(space, em, -k * k, out.A);
  out.gram = scatter_derivatives(space, em.laplace);
  if (mesh.closed()) {
    const Eigen::VectorXd m = hat_masses(space);
    const Eigen::MatrixXd mm = m * m.transpose();
    out.gram += mm;
    if (stabilize) out.A += mm.cast<cplx>();
  }
  return out;
}

}  // namespace

ComplexDenseMatrix assemble_V(const DiscreteSpace& space, double k, const QuadOrders& orders) {
  if (space.kind() != SpaceKind::P0) fail(ErrorKind::invalid_argument, "the single-layer matrix needs P0");
  return assemble_operator(space, k, false, orders).A;
}

ComplexDenseMatrix assemble_W(const DiscreteSpace& space, double k, bool stabilize, const QuadOrders& orders) {
  if (space.kind() != SpaceKind::S1) fail(ErrorKind::invalid_argument, "the hypersingular matrix needs S1");
  return assemble_operator(space, k, stabilize, orders).A;
}

Eigen::VectorXcd assemble_rhs(const DiscreteSpace& space, const WaveProblem& problem, const QuadOrders& orders) {
  check_k(problem.k);
  if (space.kind() != problem.space_kind()) fail(ErrorKind::invalid_argument, "space does not match the equation");
  const Mesh& mesh = space.mesh();
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dof_count()));
  for (std::size_t e = 0; e < mesh.size(); ++e) {
    const Element& el = mesh.element(e);
    const ElementGeometry eg = mesh.geometry(e);
    const int n = std::min(std::max(orders.regular, oscillation_order(problem.k * el.h)), 64);
    const auto& g = gauss_legendre(n);
    cplx b0 = 0.0, b1 = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) {
      const double s = g.nodes[q];
      const cplx v = g.weights[q] * eg.jacobian(s) * problem.data(el.seg, eg.param(s));
      b0 += (1.0 - s) * v;
      b1 += s * v;
    }
    if (space.kind() == SpaceKind::P0) {
      b(static_cast<Eigen::Index>(e)) += b0 + b1;
      continue;
    }
    if (const long d = space.start_dof(e); d >= 0) b(d) += b0;
    if (const long d = space.end_dof(e); d >= 0) b(d) += b1;
  }
  return b;
}

GalerkinSystem assemble_system(const DiscreteSpace& space, const WaveProblem& problem, const QuadOrders& orders) {
  if (space.kind() != problem.space_kind()) fail(ErrorKind::invalid_argument, "space does not match the equation");
  Assembled op = assemble_operator(space, problem.k, problem.stabilize, orders);
  GalerkinSystem sys;
  sys.A = std::move(op.A);
  sys.energy_gram = std::move(op.gram);
  sys.b = assemble_rhs(space, problem, orders);
  return sys;
}

Eigen::MatrixXd assemble_energy_gram(const DiscreteSpace& space, const QuadOrders& orders) {
  return assemble_operator(space, 0.0, false, orders).gram;
}

}  // namespace abem
