// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <optional>

namespace abem {

/// Reciprocal condition number below which a Galerkin system counts as singular.
inline constexpr double tol_singular = 1e-12;

struct SolveReport {
  std::optional<Eigen::VectorXcd> solution;
  double rcond = 0.0;  // of the diagonally equilibrated matrix
  bool solvable = false;
  double residual_norm = 0.0;  // ||A x - b|| / ||b||, NaN when unsolvable
};

/// Partial-pivoting LU with a 1-norm reciprocal condition estimate.
SolveReport lu_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b);

/// Discrete inf-sup constant of A in the energy norm of G:
/// beta^2 = lambda_min(G^-1 A^H G^-1 A).
double inf_sup_beta(const Eigen::MatrixXcd& A, const Eigen::MatrixXd& G);

/// sqrt(Re c^H G c).
double energy_norm(const Eigen::MatrixXd& G, const Eigen::VectorXcd& c);

}  // namespace abem
