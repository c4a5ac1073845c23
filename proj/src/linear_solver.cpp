// SPDX-License-Identifier: Apache-2.0
#include "abem/linear_solver.hpp"

#include "abem/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace abem {

SolveReport lu_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) fail(ErrorKind::invalid_argument, "system dimensions do not match");
  SolveReport rep;
  rep.residual_norm = std::numeric_limits<double>::quiet_NaN();
  if (A.rows() == 0) {
    rep.solvable = true;
    rep.rcond = 1.0;
    rep.solution = Eigen::VectorXcd();
    rep.residual_norm = 0.0;
    return rep;
  }
  // Symmetric diagonal equilibration: the element bases are not normalized, so
  // on strongly graded meshes the raw matrix has a tiny rcond without being
  // anywhere near singular. Singularity is judged on S A S instead.
  Eigen::VectorXd scale(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double d = std::abs(A(i, i));
    if (!(d > 0.0) || !std::isfinite(d)) d = A.row(i).norm();
    scale(i) = d > 0.0 && std::isfinite(d) ? 1.0 / std::sqrt(d) : 1.0;
  }
  const Eigen::MatrixXcd As = scale.asDiagonal() * A * scale.asDiagonal();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(As);
  double rc = lu.rcond();
  if (!std::isfinite(rc)) rc = 0.0;  // exactly zero pivot
  rep.rcond = std::clamp(rc, 0.0, 1.0);
  if (rep.rcond < tol_singular) return rep;
  const Eigen::VectorXcd sb = scale.cast<std::complex<double>>().cwiseProduct(b);
  Eigen::VectorXcd x = scale.cast<std::complex<double>>().cwiseProduct(lu.solve(sb));
  if (!x.allFinite()) {
    rep.rcond = 0.0;
    return rep;
  }
  const double nb = b.norm();
  rep.residual_norm = (A * x - b).norm() / (nb > 0.0 ? nb : 1.0);
  rep.solvable = true;
  rep.solution = std::move(x);
  return rep;
}

double inf_sup_beta(const Eigen::MatrixXcd& A, const Eigen::MatrixXd& G) {
  if (A.rows() != A.cols() || G.rows() != G.cols() || A.rows() != G.rows())
    fail(ErrorKind::invalid_argument, "matrix dimensions do not match");
  if (A.rows() == 0) return 0.0;
  const Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) fail(ErrorKind::numerical, "energy Gram matrix is not positive definite");
  // M = L^-1 A L^-T has singular values equal to the generalized ones. L is
  // real, so the real and imaginary parts are transformed separately.
  const Eigen::MatrixXd L = llt.matrixL();
  const auto lower = L.triangularView<Eigen::Lower>();
  const Eigen::MatrixXd re = lower.solve(lower.solve(A.real()).transpose()).transpose();
  const Eigen::MatrixXd im = lower.solve(lower.solve(A.imag()).transpose()).transpose();
  Eigen::MatrixXcd M(A.rows(), A.cols());
  M.real() = re;
  M.imag() = im;
  const Eigen::MatrixXcd H = M.adjoint() * M;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "eigenvalue iteration did not converge");
  return std::sqrt(std::max(es.eigenvalues()(0), 0.0));
}

double energy_norm(const Eigen::MatrixXd& G, const Eigen::VectorXcd& c) {
  if (G.rows() != G.cols() || G.rows() != c.size()) fail(ErrorKind::invalid_argument, "dimensions do not match");
  const std::complex<double> q = c.dot(G.cast<std::complex<double>>() * c);
  if (std::abs(q.imag()) > 1e-10 * std::max(c.squaredNorm(), std::numeric_limits<double>::min()) &&
      std::abs(q.imag()) > 1e-10 * std::abs(q.real()))
    fail(ErrorKind::numerical, "energy form has a nonzero imaginary part");
  return std::sqrt(std::max(q.real(), 0.0));
}

}  // namespace abem
