// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/estimator.hpp"
#include "abem/marking.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace abem {

enum class MarkingVariant { doerfler, expanded, uniform };

struct MarkingConfig {
  double theta = 0.4;
  MarkingVariant variant = MarkingVariant::expanded;
};

struct LoopOptions {
  std::size_t max_N = 512;  // stop once a refinement exceeds this many elements
  int estimator_points = 4;
  QuadOrders orders;
  bool compute_beta = true;
  bool axioms = true;
  int reference_levels = 0;  // uniform refinements of the finest mesh for the reference solution, 0 = none
};

struct IterationRecord {
  int ell = 0;
  std::size_t N = 0;
  double eta = 0.0;
  double eta_sq = 0.0;
  double rcond = 0.0;
  double beta = std::numeric_limits<double>::quiet_NaN();
  std::size_t marked = 0;
  bool step_i = false;
  std::optional<double> energy_error;
};

/// Empirical constants of the estimator axioms for one coarse/fine pair of
/// solved levels. Norms of discrete differences use the fine energy norm.
struct AxiomReport {
  int ell = 0;  // coarse level
  double C_stb = std::numeric_limits<double>::quiet_NaN();
  double q_red = std::numeric_limits<double>::quiet_NaN();  // eta_fine(new)^2 / eta_coarse(refined)^2
  double C_red = std::numeric_limits<double>::quiet_NaN();  // smallest C with q = 1/2
  double C_rel = std::numeric_limits<double>::quiet_NaN();
  double C_drel = std::numeric_limits<double>::quiet_NaN();
  double reduced_sq = 0.0;  // eta_fine(T_fine \ T_coarse)^2
  double refined_sq = 0.0;  // eta_coarse(T_coarse \ T_fine)^2
  double delta_sq = 0.0;    // ||Phi_fine - Phi_coarse||^2
};

struct LevelState {
  Mesh mesh;
  std::optional<CoeffVector> coeffs;
  Indicators indicators;
  std::vector<std::size_t> marked;
  double galerkin_defect = std::numeric_limits<double>::quiet_NaN();  // max_i |(A c - b)_i| / ||b||
};

struct LoopResult {
  std::vector<IterationRecord> records;
  std::vector<LevelState> levels;
  std::vector<AxiomReport> axioms;
};

/// The adaptive loop: solve, estimate, mark, refine, with the uniform
/// fallback when a Galerkin system is singular.
LoopResult adaptive_loop(const WaveProblem& problem, const MarkingConfig& marking, const Mesh& mesh0,
                         const LoopOptions& options);

/// Galerkin solution on `levels` uniform refinements of the finest solved mesh;
/// fills energy_error of every solved record and C_rel of the axiom reports.
void attach_reference(LoopResult& result, const WaveProblem& problem, int levels, const QuadOrders& orders = {});

/// Refined elements of the coarse mesh and their neighbours.
std::vector<std::size_t> refined_patch(const Mesh& coarse, const std::vector<std::size_t>& child_count);

}  // namespace abem
