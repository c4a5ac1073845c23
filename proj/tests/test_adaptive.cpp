// SPDX-License-Identifier: Apache-2.0
#include "abem/adaptive.hpp"
#include "abem/diagnostics.hpp"
#include "abem/error.hpp"
#include "abem/estimator.hpp"
#include "abem/experiment.hpp"
#include "abem/linear_solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace abem;

namespace {

std::vector<IterationRecord> synthetic(double rate, double c, int levels) {
  std::vector<IterationRecord> out;
  for (int l = 0; l < levels; ++l) {
    IterationRecord r;
    r.ell = l;
    r.N = std::size_t{4} << l;
    r.eta = c * std::pow(static_cast<double>(r.N), -rate);
    r.eta_sq = r.eta * r.eta;
    out.push_back(r);
  }
  return out;
}

LoopOptions quick(std::size_t max_N) {
  LoopOptions o;
  o.max_N = max_N;
  return o;
}

}  // namespace

TEST_SUITE("adaptive") {
  TEST_CASE("theta = 1 reproduces uniform refinement") {
    const CurvePtr c = make_circle(0.4);
    const WaveProblem p{c, 1.0, Equation::weakly_singular, IncidentField{}, false};
    const Mesh m0 = Mesh::initial(c);
    const LoopResult a = adaptive_loop(p, {1.0, MarkingVariant::doerfler}, m0, quick(64));
    const LoopResult u = adaptive_loop(p, {0.4, MarkingVariant::uniform}, m0, quick(64));
    REQUIRE(a.records.size() == u.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].N == u.records[i].N);
      CHECK(a.records[i].N == (std::size_t{4} << i));
      CHECK(a.records[i].eta == doctest::Approx(u.records[i].eta).epsilon(1e-12));
    }
  }

  TEST_CASE("loop bookkeeping on the slit") {
    const CurvePtr c = make_slit();
    const WaveProblem p{c, 0.0, Equation::weakly_singular, IncidentField{}, false};
    LoopResult r = adaptive_loop(p, {0.4, MarkingVariant::expanded}, Mesh::initial(c), quick(96));
    REQUIRE(r.records.size() == r.levels.size());
    REQUIRE(r.records.size() >= 8);
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      const auto& rec = r.records[i];
      const auto& st = r.levels[i];
      CHECK(rec.ell == static_cast<int>(i));
      CHECK(rec.N == st.mesh.size());
      CHECK_FALSE(rec.step_i);
      CHECK(rec.eta_sq == doctest::Approx(rec.eta * rec.eta));
      CHECK(rec.marked == st.marked.size());
      CHECK(st.galerkin_defect <= 1e-8);
      CHECK(rec.beta > 0.0);
      CHECK(rec.rcond > tol_singular);
      // indicators are those of the stored solution
      const DiscreteSpace space(SpaceKind::P0, st.mesh);
      const Indicators again = compute_indicators(space, *st.coeffs, p);
      CHECK(again.total_sq == doctest::Approx(rec.eta_sq).epsilon(1e-12));
      if (i + 1 < r.records.size()) CHECK(is_refinement(r.levels[i + 1].mesh, st.mesh));
    }
    CHECK(r.records.back().eta < 0.5 * r.records[2].eta);
    CHECK(linear_convergence_fit(r.records).converging());
    CHECK(r.axioms.size() == r.records.size() - 1);
    for (const auto& ax : r.axioms) {
      CHECK(std::isfinite(ax.C_stb));
      CHECK(ax.refined_sq > 0.0);
      CHECK(ax.delta_sq > 0.0);
    }
    attach_reference(r, p, 2);
    for (const auto& rec : r.records) {
      REQUIRE(rec.energy_error.has_value());
      CHECK(*rec.energy_error > 0.0);
    }
    for (const auto& ax : r.axioms) CHECK(std::isfinite(ax.C_rel));
  }

  TEST_CASE("expanded marking drives the largest element size to zero") {
    for (const CurvePtr& c : {make_slit(), make_lshape()}) {
      const WaveProblem p{c, 1.0, Equation::weakly_singular, IncidentField{}, false};
      LoopOptions o = quick(400);
      o.compute_beta = false;
      o.axioms = false;
      const LoopResult r = adaptive_loop(p, {0.4, MarkingVariant::expanded}, Mesh::initial(c), o);
      std::size_t checked = 0;
      for (std::size_t l = 0; l < r.levels.size(); ++l) {
        const auto& st = r.levels[l];
        const std::size_t span = (st.mesh.size() + st.marked.size() - 1) / st.marked.size() + 1;
        if (l + span >= r.levels.size()) break;
        CAPTURE(l);
        CHECK(r.levels[l + span].mesh.max_h() <= 0.5 * st.mesh.max_h() * (1 + 1e-12));
        ++checked;
      }
      CHECK(checked >= 5);
      CHECK(r.levels.back().mesh.max_h() < 0.25 * r.levels.front().mesh.max_h());
    }
  }

  TEST_CASE("singular systems fall back to uniform refinement") {
    const double R = 0.4;
    const CurvePtr c = make_circle(R);
    const WaveProblem p{c, bessel_j0_zero(1) / R, Equation::weakly_singular, IncidentField{}, false};
    const LoopResult r = adaptive_loop(p, {0.4, MarkingVariant::expanded}, Mesh::initial(c), quick(64));
    double prev = 1.0;
    bool any = false;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      const auto& rec = r.records[i];
      if (rec.step_i) {
        any = true;
        CHECK(rec.eta == prev);
        CHECK(rec.marked == rec.N);
        CHECK_FALSE(r.levels[i].coeffs.has_value());
        CHECK(rec.rcond < tol_singular);
        if (i + 1 < r.records.size()) CHECK(r.records[i + 1].N == 2 * rec.N);
      }
      prev = rec.eta;
    }
    CHECK(any);
  }

  TEST_CASE("refined patch") {
    const Mesh m = uniform_refine(Mesh::initial(make_circle(0.4)));
    std::vector<std::size_t> count(m.size(), 1);
    count[0] = 2;
    CHECK(refined_patch(m, count) == std::vector<std::size_t>{0, 1, 7});
    const Mesh s = uniform_refine(Mesh::initial(make_slit()));
    CHECK(refined_patch(s, {2, 1}) == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("rates and fits on synthetic data") {
    const auto rec = synthetic(1.5, 2.0, 8);
    CHECK(empirical_rate(rec, 5) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(tail_rate(rec) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK_THROWS_AS(empirical_rate(rec, 3), Error);

    // eta_l = 3 * 0.5^l with an early fallback level that must be ignored
    std::vector<IterationRecord> lin;
    for (int l = 0; l < 9; ++l) {
      IterationRecord r;
      r.ell = l;
      r.N = 10 + l;
      r.eta = l == 1 ? 50.0 : 3.0 * std::pow(0.5, l);
      r.step_i = l == 1;
      lin.push_back(r);
    }
    const LinearFit fit = linear_convergence_fit(lin);
    CHECK(fit.used == 7);
    CHECK(fit.q == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.C == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.converging());
    lin[5].step_i = true;
    CHECK_THROWS_AS(linear_convergence_fit(lin), Error);

    AxiomReport a, b;
    a.reduced_sq = 0.2;
    a.refined_sq = 1.0;
    a.delta_sq = 0.1;
    b.reduced_sq = 0.6;
    b.refined_sq = 1.0;
    b.delta_sq = 0.5;
    const AxiomReport reps[] = {a, b};
    const ReductionFit rf = reduction_fit(reps);
    CHECK(rf.q == doctest::Approx(0.6));
    CHECK(rf.C_half == doctest::Approx(0.2));

    const double vals[] = {2.0, std::nan(""), 0.5, -1.0, 1.0};
    const Spread sp = spread(vals);
    CHECK(sp.count == 3);
    CHECK(sp.ratio == doctest::Approx(4.0));
  }

  TEST_CASE("run comparison") {
    const auto a = synthetic(2.0, 1.0, 8);
    const auto b = synthetic(1.0, 1.0, 8);
    const Comparison c = compare_runs(a, b, 0.5);
    CHECK(c.difference == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.margin_met);
    CHECK_FALSE(compare_runs(a, b, 1.5).margin_met);
    CHECK(c.table.find("row,N_a,eta_a,N_b,eta_b") == 0);
  }
}
