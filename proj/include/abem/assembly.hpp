// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/discrete_space.hpp"
#include "abem/quadrature.hpp"

#include <Eigen/Core>

namespace abem {

using ComplexDenseMatrix = Eigen::MatrixXcd;

/// Galerkin matrix, load vector and the real SPD Gram matrix of the energy
/// inner product (V_0 on P0, stabilized W_0 on closed-curve S1, W_0 on open-arc S1).
struct GalerkinSystem {
  ComplexDenseMatrix A;
  Eigen::VectorXcd b;
  Eigen::MatrixXd energy_gram;
};

/// Single-layer matrix <V_k chi_j, chi_i> on piecewise constants.
ComplexDenseMatrix assemble_V(const DiscreteSpace& space, double k, const QuadOrders& orders = {});

/// Hypersingular matrix on S1 through the Maue identity
/// <W_k u, v> = <V_k u', v'> - k^2 <V_k (u n), v n>, plus <1,u><1,v> if stabilized.
ComplexDenseMatrix assemble_W(const DiscreteSpace& space, double k, bool stabilize, const QuadOrders& orders = {});

/// b_i = <g, psi_i>.
Eigen::VectorXcd assemble_rhs(const DiscreteSpace& space, const WaveProblem& problem, const QuadOrders& orders = {});

/// Matrix, load vector and energy Gram in one pass over the element pairs.
GalerkinSystem assemble_system(const DiscreteSpace& space, const WaveProblem& problem, const QuadOrders& orders = {});

/// Only the energy Gram matrix of a space.
Eigen::MatrixXd assemble_energy_gram(const DiscreteSpace& space, const QuadOrders& orders = {});

}  // namespace abem
