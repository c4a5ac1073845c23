// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/adaptive.hpp"

#include <span>

namespace abem {

/// Negated least-squares slope of log(eta) against log(N).
double fitted_rate(std::span<const double> N, std::span<const double> eta);

/// fitted_rate over the last `window` records (window >= 4).
double empirical_rate(std::span<const IterationRecord> records, std::size_t window);

struct LinearFit {
  double C = 0.0;
  double q = 0.0;
  std::size_t used = 0;  // records in the fitted tail
  bool converging() const { return q < 1.0; }
};

/// Fit eta_{l+n} <= C q^n eta_l on the records after the last uniform fallback:
/// q from the least-squares slope of log(eta) against l, C the smallest
/// constant making the bound hold for every pair in the tail. Needs 6 records.
LinearFit linear_convergence_fit(std::span<const IterationRecord> records);

struct ReductionFit {
  double q = 0.0;  // max over steps of eta_fine(new)^2 / eta_coarse(refined)^2
  double C_half = 0.0;  // smallest C with q = 1/2
};

ReductionFit reduction_fit(std::span<const AxiomReport> reports);

struct Spread {
  double min = 0.0;
  double max = 0.0;
  double ratio = 0.0;  // max / min
  std::size_t count = 0;
};

/// Spread of the finite positive values.
Spread spread(std::span<const double> values);

/// ||h^{1/2} d_s V_k psi||_{L2} / ||psi||_energy for a P0 density psi.
double inverse_estimate_ratio(const DiscreteSpace& space, double k, const CoeffVector& psi, int q = 4,
                              const QuadOrders& orders = {});

}  // namespace abem
