// SPDX-License-Identifier: Apache-2.0
#include "abem/quadrature.hpp"

#include "abem/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace abem {

namespace {

QuadRule build_gauss_legendre(int n) {
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const long double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(static_cast<double>(dx)) < 1e-19) break;
    }
    {
      long double p0 = 1.0L, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const long double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
    }
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    // map [-1,1] -> [0,1]; x is the i-th largest root
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = static_cast<double>((1.0L - x) / 2);
    rule.nodes[hi] = static_cast<double>((1.0L + x) / 2);
    rule.weights[lo] = rule.weights[hi] = static_cast<double>(w / 2);
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.5;
  return rule;
}

// Modified Chebyshev algorithm on shifted monic Legendre moments of -log(t),
// followed by Golub-Welsch.
QuadRule build_gauss_log(int n) {
  const int m = 2 * n;
  std::vector<long double> mom(static_cast<std::size_t>(m));
  mom[0] = 1.0L;
  long double fact_ratio = 1.0L;  // (k!)^2 / (2k)!
  for (int k = 1; k < m; ++k) {
    fact_ratio *= static_cast<long double>(k) * k / ((2.0L * k - 1) * (2.0L * k));
    const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
    mom[static_cast<std::size_t>(k)] = sign * fact_ratio / (static_cast<long double>(k) * (k + 1));
  }
  auto a_leg = [](int) { return 0.5L; };
  auto b_leg = [](int k) {
    return k == 0 ? 1.0L : static_cast<long double>(k) * k / (4.0L * (4.0L * k * k - 1.0L));
  };
  std::vector<long double> alpha(static_cast<std::size_t>(n)), beta(static_cast<std::size_t>(n));
  std::vector<long double> sig_prev(static_cast<std::size_t>(m), 0.0L), sig(mom), sig_next(static_cast<std::size_t>(m));
  alpha[0] = a_leg(0) + mom[1] / mom[0];
  beta[0] = mom[0];
  for (int k = 1; k < n; ++k) {
    std::fill(sig_next.begin(), sig_next.end(), 0.0L);
    for (int l = k; l < m - k; ++l) {
      const auto ul = static_cast<std::size_t>(l);
      sig_next[ul] = sig[ul + 1] - (alpha[static_cast<std::size_t>(k - 1)] - a_leg(l)) * sig[ul] -
                     beta[static_cast<std::size_t>(k - 1)] * sig_prev[ul] + b_leg(l) * sig[ul - 1];
    }
    const auto uk = static_cast<std::size_t>(k);
    alpha[uk] = a_leg(k) + sig_next[uk + 1] / sig_next[uk] - sig[uk] / sig[uk - 1];
    beta[uk] = sig_next[uk] / sig[uk - 1];
    sig_prev = sig;
    sig = sig_next;
  }
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = static_cast<double>(alpha[static_cast<std::size_t>(k)]);
  for (int k = 1; k < n; ++k) sub(k - 1) = static_cast<double>(std::sqrt(beta[static_cast<std::size_t>(k)]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  QuadRule rule;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(es.eigenvalues()(i));
    const double v0 = es.eigenvectors()(0, i);
    rule.weights.push_back(static_cast<double>(beta[0]) * v0 * v0);
  }
  return rule;
}

double sub_length(const ElementGeometry& e, double s0, double s1) {
  const auto& rule = gauss_legendre(8);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * e.jacobian(s0 + (s1 - s0) * rule.nodes[i]);
  return sum * (s1 - s0);
}

void append_tensor(std::vector<PairNode>& out, int n, double s0, double s1, double t0, double t1) {
  const auto& g = gauss_legendre(n);
  const double area = (s1 - s0) * (t1 - t0);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      out.push_back({s0 + (s1 - s0) * g.nodes[i], t0 + (t1 - t0) * g.nodes[j], area * g.weights[i] * g.weights[j],
                     false, 0.0});
}

// Identical elements: each triangle of [0,1]^2 is mapped to (w, tau) with w = |s - t|.
void append_identical(std::vector<PairNode>& out, int n_log, int n_gl) {
  const auto& lg = gauss_log(n_log);
  const auto& gl = gauss_legendre(n_gl);
  for (int tri = 0; tri < 2; ++tri) {
    auto emit = [&](double w, double tau, double weight, bool log_only, double shift) {
      const double lo = (1.0 - w) * tau;
      const double hi = lo + w;
      if (tri == 0)
        out.push_back({hi, lo, weight, log_only, shift});
      else
        out.push_back({lo, hi, weight, log_only, shift});
    };
    for (std::size_t i = 0; i < lg.size(); ++i)
      for (std::size_t j = 0; j < gl.size(); ++j)
        emit(lg.nodes[i], gl.nodes[j], -lg.weights[i] * (1.0 - lg.nodes[i]) * gl.weights[j], true, 0.0);
    for (std::size_t i = 0; i < gl.size(); ++i)
      for (std::size_t j = 0; j < gl.size(); ++j)
        emit(gl.nodes[i], gl.nodes[j], gl.weights[i] * (1.0 - gl.nodes[i]) * gl.weights[j], false,
             std::log(gl.nodes[i]));
  }
}

// Elements sharing one node: Duffy split around the shared corner, rho = max distance
// from the corner in reference coordinates.
void append_touching(std::vector<PairNode>& out, const SharedNode& shared, int n_log, int n_gl) {
  const auto& lg = gauss_log(n_log);
  const auto& gl = gauss_legendre(n_gl);
  for (int tri = 0; tri < 2; ++tri) {
    auto emit = [&](double rho, double u, double weight, bool log_only, double shift) {
      double sigma = rho, tau = rho * u;
      if (tri == 1) std::swap(sigma, tau);
      const double s = shared.a_at_end ? 1.0 - sigma : sigma;
      const double t = shared.b_at_end ? 1.0 - tau : tau;
      out.push_back({s, t, weight, log_only, shift});
    };
    for (std::size_t i = 0; i < lg.size(); ++i)
      for (std::size_t j = 0; j < gl.size(); ++j)
        emit(lg.nodes[i], gl.nodes[j], -lg.weights[i] * lg.nodes[i] * gl.weights[j], true, 0.0);
    for (std::size_t i = 0; i < gl.size(); ++i)
      for (std::size_t j = 0; j < gl.size(); ++j)
        emit(gl.nodes[i], gl.nodes[j], gl.weights[i] * gl.nodes[i] * gl.weights[j], false, std::log(gl.nodes[i]));
  }
}

void append_subdivided(std::vector<PairNode>& out, const ElementGeometry& ta, const ElementGeometry& tb, double s0,
                       double s1, double t0, double t1, int cap, double k, int depth) {
  if (depth > 48) fail(ErrorKind::numerical, "near-field subdivision did not separate the pair");
  const double la = sub_length(ta, s0, s1);
  const double lb = sub_length(tb, t0, t1);
  const double dist = (ta.position(0.5 * (s0 + s1)) - tb.position(0.5 * (t0 + t1))).norm() - 0.5 * (la + lb);
  const double size = std::max(la, lb);
  if (dist >= size) {
    append_tensor(out, separated_order(dist / size, k * size, cap), s0, s1, t0, t1);
    return;
  }
  if (la >= lb) {
    const double sm = 0.5 * (s0 + s1);
    append_subdivided(out, ta, tb, s0, sm, t0, t1, cap, k, depth + 1);
    append_subdivided(out, ta, tb, sm, s1, t0, t1, cap, k, depth + 1);
  } else {
    const double tm = 0.5 * (t0 + t1);
    append_subdivided(out, ta, tb, s0, s1, t0, tm, cap, k, depth + 1);
    append_subdivided(out, ta, tb, s0, s1, tm, t1, cap, k, depth + 1);
  }
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  static const std::array<QuadRule, 65> rules = [] {
    std::array<QuadRule, 65> r;
    for (int i = 1; i <= 64; ++i) r[static_cast<std::size_t>(i)] = build_gauss_legendre(i);
    return r;
  }();
  if (n < 1 || n > 64) fail(ErrorKind::invalid_argument, "Gauss-Legendre order must be in [1,64]");
  return rules[static_cast<std::size_t>(n)];
}

const QuadRule& gauss_log(int n) {
  static const std::array<QuadRule, 33> rules = [] {
    std::array<QuadRule, 33> r;
    for (int i = 1; i <= 32; ++i) r[static_cast<std::size_t>(i)] = build_gauss_log(i);
    return r;
  }();
  if (n < 1 || n > 32) fail(ErrorKind::invalid_argument, "log-weighted Gauss order must be in [1,32]");
  return rules[static_cast<std::size_t>(n)];
}

double distance_lower_bound(const ElementGeometry& ta, const ElementGeometry& tb) {
  return (ta.midpoint() - tb.midpoint()).norm() - 0.5 * (ta.h + tb.h);
}

PairRelation classify_pair(const ElementGeometry& ta, const ElementGeometry& tb, bool same_element,
                           const SharedNode& shared) {
  if (same_element) return PairRelation::identical;
  if (shared.present) return PairRelation::adjacent;
  return distance_lower_bound(ta, tb) > std::max(ta.h, tb.h) ? PairRelation::separated : PairRelation::adjacent;
}

int oscillation_order(double kh) {
  const double half = 0.5 * std::abs(kh);
  for (int n = 1; n < 32; ++n) {
    // (kh/2)^(2n) / (2n)!
    double term = 1.0;
    for (int j = 1; j <= 2 * n; ++j) term *= half / j;
    if (term <= 1e-13) return n;
  }
  return 32;
}

int separated_order(double ratio, double kh, int cap) {
  const double rho = 2.0 * ratio + std::sqrt(4.0 * ratio * ratio + 1.0);
  int n = static_cast<int>(std::ceil(15.0 / std::log(std::max(rho, 1.0 + 1e-12))));
  n = std::clamp(n, 2, std::max(cap, 2));
  return std::min(std::max(n, oscillation_order(kh)), 32);
}

PairPlan pair_rule(const ElementGeometry& ta, const ElementGeometry& tb, PairRelation relation,
                   const SharedNode& shared, const QuadOrders& orders, double k) {
  PairPlan plan;
  plan.relation = relation;
  const double hmax = std::max(ta.h, tb.h);
  const int n_gl = std::max(orders.near, oscillation_order(k * hmax));
  switch (relation) {
    case PairRelation::identical:
      append_identical(plan.nodes, orders.log, n_gl);
      break;
    case PairRelation::adjacent:
      if (shared.present)
        append_touching(plan.nodes, shared, orders.log, n_gl);
      else
        append_subdivided(plan.nodes, ta, tb, 0.0, 1.0, 0.0, 1.0, orders.near, k, 0);
      break;
    case PairRelation::separated: {
      const double dist = distance_lower_bound(ta, tb);
      if (shared.present || !(dist > 0.0))
        fail(ErrorKind::numerical, "pair classified as separated but the elements touch");
      append_tensor(plan.nodes, separated_order(dist / hmax, k * hmax, orders.regular), 0.0, 1.0, 0.0, 1.0);
      break;
    }
  }
  return plan;
}

}  // namespace abem
