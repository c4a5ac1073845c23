// SPDX-License-Identifier: Apache-2.0
#include "abem/diagnostics.hpp"

#include "abem/assembly.hpp"
#include "abem/error.hpp"
#include "abem/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abem {

namespace {

// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::invalid_argument, "degenerate window for the rate fit");
  return sxy / sxx;
}

}  // namespace

double fitted_rate(std::span<const double> N, std::span<const double> eta) {
  if (N.size() != eta.size() || N.size() < 2) fail(ErrorKind::invalid_argument, "rate fit needs matching samples");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (!(N[i] > 0.0) || !(eta[i] > 0.0)) fail(ErrorKind::invalid_argument, "rate fit needs positive samples");
    x.push_back(std::log(N[i]));
    y.push_back(std::log(eta[i]));
  }
  const double s = -ls_slope(x, y);
  return s == 0.0 ? 0.0 : s;
}

double empirical_rate(std::span<const IterationRecord> records, std::size_t window) {
  if (window < 4 || records.size() < window) fail(ErrorKind::invalid_argument, "rate window needs at least 4 records");
  std::vector<double> N, eta;
  for (std::size_t i = records.size() - window; i < records.size(); ++i) {
    N.push_back(static_cast<double>(records[i].N));
    eta.push_back(records[i].eta);
  }
  return fitted_rate(N, eta);
}

LinearFit linear_convergence_fit(std::span<const IterationRecord> records) {
  std::size_t start = 0;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].step_i) start = i + 1;
  const auto tail = records.subspan(start);
  if (tail.size() < 6) fail(ErrorKind::invalid_argument, "linear convergence fit needs 6 records after the last fallback");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (!(tail[i].eta > 0.0)) fail(ErrorKind::invalid_argument, "linear convergence fit needs positive estimators");
    x.push_back(static_cast<double>(i));
    y.push_back(std::log(tail[i].eta));
  }
  LinearFit fit;
  fit.used = tail.size();
  fit.q = std::exp(ls_slope(x, y));
  double logc = 0.0;
  for (std::size_t l = 0; l < tail.size(); ++l)
    for (std::size_t m = l; m < tail.size(); ++m)
      logc = std::max(logc, y[m] - y[l] - static_cast<double>(m - l) * std::log(fit.q));
  fit.C = std::exp(logc);
  return fit;
}

ReductionFit reduction_fit(std::span<const AxiomReport> reports) {
  ReductionFit fit;
  bool any = false;
  for (const AxiomReport& r : reports) {
    if (!(r.refined_sq > 0.0)) continue;
    any = true;
    fit.q = std::max(fit.q, r.reduced_sq / r.refined_sq);
    const double excess = r.reduced_sq - 0.5 * r.refined_sq;
    if (excess > 0.0)
      fit.C_half = std::max(fit.C_half, r.delta_sq > 0.0 ? excess / r.delta_sq : std::numeric_limits<double>::infinity());
  }
  if (!any) fail(ErrorKind::invalid_argument, "no refinement step to fit the reduction on");
  return fit;
}

Spread spread(std::span<const double> values) {
  Spread s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || !(v > 0.0)) continue;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    ++s.count;
  }
  if (s.count == 0) {
    s.min = s.max = s.ratio = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.ratio = s.max / s.min;
  return s;
}

double inverse_estimate_ratio(const DiscreteSpace& space, double k, const CoeffVector& psi, int q,
                              const QuadOrders& orders) {
  if (space.kind() != SpaceKind::P0) fail(ErrorKind::invalid_argument, "inverse estimate is evaluated on P0");
  WaveProblem zero;
  zero.curve = space.mesh().curve_ptr();
  zero.k = k;
  zero.equation = Equation::weakly_singular;
  zero.incident.kind = IncidentField::Kind::none;
  const Indicators ind = compute_indicators(space, psi, zero, q, orders);
  const double den = energy_norm(assemble_energy_gram(space, orders), psi);
  if (!(den > 0.0)) fail(ErrorKind::invalid_argument, "density has zero energy norm");
  return ind.total() / den;
}

}  // namespace abem
