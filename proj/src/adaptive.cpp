// SPDX-License-Identifier: Apache-2.0
#include "abem/adaptive.hpp"

#include "abem/assembly.hpp"
#include "abem/error.hpp"
#include "abem/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abem {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::vector<std::size_t> child_counts(const Mesh& fine, const Mesh& coarse, const std::vector<std::size_t>& amap) {
  std::vector<std::size_t> count(coarse.size(), 0);
  for (std::size_t f = 0; f < fine.size(); ++f) ++count[amap[f]];
  return count;
}

AxiomReport axioms_for(int ell, const DiscreteSpace& coarse_space, const LevelState& coarse,
                       const DiscreteSpace& fine_space, const LevelState& fine, const Eigen::MatrixXd& fine_gram,
                       double fine_beta) {
  AxiomReport rep;
  rep.ell = ell;
  const auto amap = ancestor_map(fine.mesh, coarse.mesh);
  const auto count = child_counts(fine.mesh, coarse.mesh, amap);
  double kept_coarse = 0.0, kept_fine = 0.0;
  for (std::size_t c = 0; c < coarse.mesh.size(); ++c) {
    if (count[c] == 1)
      kept_coarse += coarse.indicators.per_element[c];
    else
      rep.refined_sq += coarse.indicators.per_element[c];
  }
  for (std::size_t f = 0; f < fine.mesh.size(); ++f) {
    if (count[amap[f]] == 1)
      kept_fine += fine.indicators.per_element[f];
    else
      rep.reduced_sq += fine.indicators.per_element[f];
  }
  const CoeffVector delta = *fine.coeffs - prolong(coarse_space, *coarse.coeffs, fine_space);
  const double d = energy_norm(fine_gram, delta);
  rep.delta_sq = d * d;
  if (d > 0.0) {
    rep.C_stb = std::abs(std::sqrt(kept_fine) - std::sqrt(kept_coarse)) / d;
    rep.C_red = std::max(0.0, rep.reduced_sq - 0.5 * rep.refined_sq) / rep.delta_sq;
  }
  if (rep.refined_sq > 0.0) rep.q_red = rep.reduced_sq / rep.refined_sq;
  const auto patch = refined_patch(coarse.mesh, count);
  const double eta_patch = coarse.indicators.subset(patch);
  if (eta_patch > 0.0) rep.C_drel = d * fine_beta / eta_patch;
  return rep;
}

}  // namespace

std::vector<std::size_t> refined_patch(const Mesh& coarse, const std::vector<std::size_t>& child_count) {
  std::vector<char> in(coarse.size(), 0);
  for (std::size_t c = 0; c < coarse.size(); ++c) {
    if (child_count[c] == 1) continue;
    in[c] = 1;
    if (const long p = coarse.prev(c); p >= 0) in[static_cast<std::size_t>(p)] = 1;
    if (const long n = coarse.next(c); n >= 0) in[static_cast<std::size_t>(n)] = 1;
  }
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < coarse.size(); ++c)
    if (in[c]) out.push_back(c);
  return out;
}

LoopResult adaptive_loop(const WaveProblem& problem, const MarkingConfig& marking, const Mesh& mesh0,
                         const LoopOptions& options) {
  if (!(marking.theta > 0.0 && marking.theta <= 1.0)) fail(ErrorKind::invalid_argument, "theta must lie in (0,1]");
  if (mesh0.curve_ptr() != problem.curve) fail(ErrorKind::invalid_argument, "initial mesh is not on the problem curve");
  LoopResult result;
  Mesh mesh = mesh0;
  double prev_eta = 1.0;  // eta_{-1}
  // Previous solved level, kept for the axiom diagnostics.
  std::optional<DiscreteSpace> prev_space;
  bool prev_solved = false;
  for (int ell = 0;; ++ell) {
    DiscreteSpace space(problem.space_kind(), mesh);
    const GalerkinSystem sys = assemble_system(space, problem, options.orders);
    SolveReport rep = lu_solve(sys.A, sys.b);
    IterationRecord rec;
    rec.ell = ell;
    rec.N = mesh.size();
    rec.rcond = rep.rcond;
    LevelState state{mesh, std::nullopt, Indicators{}, {}, nan_value};
    Mesh next = mesh;
    if (!rep.solvable) {
      rec.step_i = true;
      rec.eta = prev_eta;
      rec.eta_sq = prev_eta * prev_eta;
      rec.marked = mesh.size();
      state.marked.resize(mesh.size());
      for (std::size_t i = 0; i < mesh.size(); ++i) state.marked[i] = i;
      next = uniform_refine(mesh);
      prev_solved = false;
    } else {
      const CoeffVector& c = *rep.solution;
      const double nb = sys.b.norm();
      state.galerkin_defect = (sys.A * c - sys.b).cwiseAbs().maxCoeff() / (nb > 0.0 ? nb : 1.0);
      if (options.compute_beta) rec.beta = inf_sup_beta(sys.A, sys.energy_gram);
      const ResidualEvaluator residual(space, c, problem, options.orders);
      state.indicators = compute_indicators(residual, options.estimator_points);
      state.coeffs = c;
      rec.eta_sq = state.indicators.total_sq;
      rec.eta = std::sqrt(rec.eta_sq);
      prev_eta = rec.eta;
      if (options.axioms && prev_solved) {
        const LevelState& coarse = result.levels.back();
        result.axioms.push_back(axioms_for(ell - 1, *prev_space, coarse, space, state, sys.energy_gram, rec.beta));
      }
      if (rec.eta_sq > 0.0) {
        switch (marking.variant) {
          case MarkingVariant::uniform:
            state.marked.resize(mesh.size());
            for (std::size_t i = 0; i < mesh.size(); ++i) state.marked[i] = i;
            break;
          case MarkingVariant::doerfler:
            state.marked = doerfler_mark(state.indicators, marking.theta);
            break;
          case MarkingVariant::expanded:
            state.marked = expand_mark(mesh, doerfler_mark(state.indicators, marking.theta));
            break;
        }
        rec.marked = state.marked.size();
        next = marking.variant == MarkingVariant::uniform ? uniform_refine(mesh) : refine(mesh, state.marked);
      }
      prev_solved = true;
      prev_space.emplace(space);
    }
    result.records.push_back(rec);
    result.levels.push_back(std::move(state));
    if (!rec.step_i && rec.eta_sq == 0.0) break;
    if (next.size() > options.max_N) break;
    mesh = std::move(next);
  }
  return result;
}

void attach_reference(LoopResult& result, const WaveProblem& problem, int levels, const QuadOrders& orders) {
  if (levels < 1) fail(ErrorKind::invalid_argument, "reference solution needs at least one refinement level");
  long last = -1;
  for (std::size_t i = 0; i < result.levels.size(); ++i)
    if (result.levels[i].coeffs) last = static_cast<long>(i);
  if (last < 0) fail(ErrorKind::numerical, "no solved level to refine for the reference solution");
  Mesh ref_mesh = result.levels[static_cast<std::size_t>(last)].mesh;
  for (int l = 0; l < levels; ++l) ref_mesh = uniform_refine(ref_mesh);
  const DiscreteSpace ref_space(problem.space_kind(), ref_mesh);
  const GalerkinSystem sys = assemble_system(ref_space, problem, orders);
  const SolveReport rep = lu_solve(sys.A, sys.b);
  if (!rep.solvable) fail(ErrorKind::numerical, "reference Galerkin system is singular");
  for (std::size_t i = 0; i < result.levels.size(); ++i) {
    const LevelState& st = result.levels[i];
    if (!st.coeffs) continue;
    const DiscreteSpace space(problem.space_kind(), st.mesh);
    const CoeffVector diff = *rep.solution - prolong(space, *st.coeffs, ref_space);
    result.records[i].energy_error = energy_norm(sys.energy_gram, diff);
  }
  for (AxiomReport& ax : result.axioms) {
    const IterationRecord& r = result.records[static_cast<std::size_t>(ax.ell)];
    if (r.energy_error && r.eta > 0.0) ax.C_rel = *r.energy_error / r.eta;
  }
}

}  // namespace abem
