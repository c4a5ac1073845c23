// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. One line per criterion: PASS|FAIL <n> <name>: details.
#include "abem/adaptive.hpp"
#include "abem/assembly.hpp"
#include "abem/config.hpp"
#include "abem/diagnostics.hpp"
#include "abem/error.hpp"
#include "abem/estimator.hpp"
#include "abem/experiment.hpp"
#include "abem/linear_solver.hpp"
#include "abem/marking.hpp"
#include "abem/potential.hpp"

#include <CLI11.hpp>
#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace abem;

namespace {

struct Outcome {
  bool pass = false;
  std::string details;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Preset runs are shared between criteria when several run in one process.
const ExperimentResult& preset_run(const std::string& name) {
  static std::map<std::string, ExperimentResult> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, run_experiment(preset(name))).first;
  return it->second;
}

std::vector<std::string> adaptive_presets() {
  std::vector<std::string> out;
  for (const auto& n : preset_names())
    if (preset(n).marking != MarkingVariant::uniform && !preset(n).k_idp) out.push_back(n);
  return out;
}

LoopResult run_loop(CurvePtr curve, double k, Equation eq, IncidentField inc, MarkingVariant variant,
                    std::size_t max_N) {
  WaveProblem p;
  p.curve = curve;
  p.k = k;
  p.equation = eq;
  p.incident = inc;
  LoopOptions o;
  o.max_N = max_N;
  o.compute_beta = false;
  o.axioms = false;
  return adaptive_loop(p, {0.4, variant}, Mesh::initial(curve), o);
}

// ---------------------------------------------------------------------------

Outcome smooth_rate() {
  Outcome o{true, ""};
  for (double k : {0.0, 1.0, 4.0}) {
    IncidentField inc;
    // a constant is resolved exactly at k = 0, so use a point source there
    if (k == 0.0) inc.kind = IncidentField::Kind::point_source;
    const auto t0 = std::chrono::steady_clock::now();
    const LoopResult r = run_loop(make_circle(0.4), k, Equation::weakly_singular, inc, MarkingVariant::uniform, 2048);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double rate = empirical_rate(r.records, 5);
    const bool ok = std::abs(rate - 1.5) <= 0.15 && r.records.back().N == 2048 && secs <= 300.0;
    o.pass = o.pass && ok;
    o.details += "k=" + fmt(k) + " rate " + fmt(rate) + " (" + fmt(secs, 3) + " s); ";
  }
  return o;
}

Outcome singularity_recovery() {
  Outcome o{true, ""};
  for (double k : {0.0, 1.0}) {
    const CurvePtr slit = make_slit();
    const LoopResult a = run_loop(slit, k, Equation::weakly_singular, {}, MarkingVariant::expanded, 2048);
    const LoopResult u = run_loop(slit, k, Equation::weakly_singular, {}, MarkingVariant::uniform, 2048);
    const Comparison c = compare_runs(a.records, u.records, 0.5);
    const bool ok = c.margin_met && c.rate_a >= 1.3;
    o.pass = o.pass && ok;
    o.details += "k=" + fmt(k) + " adaptive " + fmt(c.rate_a) + " (N " + std::to_string(a.records.back().N) +
                 ") uniform " + fmt(c.rate_b) + "; ";
  }
  return o;
}

Outcome linear_convergence() {
  Outcome o{true, ""};
  for (const auto& name : adaptive_presets()) {
    const auto& r = preset_run(name);
    try {
      const LinearFit fit = linear_convergence_fit(r.loop.records);
      o.pass = o.pass && fit.converging();
      o.details += name + " q_lin " + fmt(fit.q) + " C_lin " + fmt(fit.C) + " over " + std::to_string(fit.used) + "; ";
    } catch (const Error& e) {
      o.pass = false;
      o.details += name + " " + e.what() + "; ";
    }
  }
  o.details += "(idp-trigger excluded: its wavenumber is an interior eigenvalue)";
  return o;
}

// Longest run of consecutive levels whose values stay within a factor `band`.
std::size_t longest_band(const std::vector<double>& v, double band, double& lo, double& hi) {
  std::size_t best = 0;
  for (std::size_t s = 0; s < v.size(); ++s) {
    double mn = v[s], mx = v[s];
    std::size_t e = s;
    while (e < v.size()) {
      const double nmn = std::min(mn, v[e]), nmx = std::max(mx, v[e]);
      if (!(nmx <= band * nmn)) break;
      mn = nmn;
      mx = nmx;
      ++e;
    }
    if (e - s > best) {
      best = e - s;
      lo = mn;
      hi = mx;
    }
  }
  return best;
}

Outcome reliability() {
  Outcome o{true, ""};
  for (const std::string name : {"smooth-circle", "slit"}) {
    const auto& r = preset_run(name);
    std::vector<double> ratio;
    for (const auto& rec : r.loop.records)
      if (rec.energy_error && rec.eta > 0.0) ratio.push_back(*rec.energy_error / rec.eta);
    double lo = 0.0, hi = 0.0;
    const std::size_t run = longest_band(ratio, 5.0, lo, hi);
    o.pass = o.pass && run >= 6;
    o.details += name + " " + std::to_string(run) + "/" + std::to_string(ratio.size()) + " levels in [" + fmt(lo) +
                 ", " + fmt(hi) + "]; ";
  }
  return o;
}

Outcome axioms() {
  Outcome o{true, ""};
  for (const auto& name : adaptive_presets()) {
    const auto& ax = preset_run(name).loop.axioms;
    if (ax.size() < 6) {
      o.pass = false;
      o.details += name + " only " + std::to_string(ax.size()) + " steps; ";
      continue;
    }
    const std::span<const AxiomReport> last(ax.data() + ax.size() - 6, 6);
    std::vector<double> stb, drel;
    bool finite = true;
    for (const auto& a : last) {
      stb.push_back(a.C_stb);
      drel.push_back(a.C_drel);
      finite = finite && std::isfinite(a.C_stb) && std::isfinite(a.C_drel);
    }
    const Spread s1 = spread(stb), s2 = spread(drel);
    const ReductionFit red = reduction_fit(last);
    const bool ok = finite && s1.count == 6 && s2.count == 6 && s1.ratio < 10 && s2.ratio < 10 && red.q < 1.0;
    o.pass = o.pass && ok;
    o.details += name + " C_stb spread " + fmt(s1.ratio) + " C_drel spread " + fmt(s2.ratio) + " q_red " +
                 fmt(red.q) + "; ";
  }
  return o;
}

// ---------------------------------------------------------------------------

std::size_t brute_force_min(const std::vector<double>& v, double theta) {
  double total = 0.0;
  for (double x : v) total += x;
  std::size_t best = v.size();
  for (unsigned mask = 1; mask < (1u << v.size()); ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (mask & (1u << i)) s += v[i];
    if (s >= theta * total) best = std::min<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
  }
  return best;
}

// Every mesh with at most `limit` elements reachable by single-element refinement.
std::vector<Mesh> small_meshes(const CurvePtr& c, std::size_t limit) {
  std::vector<Mesh> out{Mesh::initial(c)};
  std::set<std::string> seen{serialize(out[0])};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t e = 0; e < out[i].size(); ++e) {
      const std::size_t marked[] = {e};
      Mesh m = refine(out[i], marked);
      if (m.size() > limit) continue;
      if (seen.insert(serialize(m)).second) out.push_back(std::move(m));
    }
  }
  return out;
}

Outcome marking_optimality() {
  std::size_t meshes = 0, cases = 0, mismatches = 0;
  std::mt19937_64 rng(2024);
  std::exponential_distribution<double> dist(1.0);
  for (const CurvePtr& c : {make_circle(0.4), make_lshape(), make_slit()}) {
    WaveProblem p;
    p.curve = c;
    p.k = 1.0;
    for (const Mesh& m : small_meshes(c, 12)) {
      ++meshes;
      const DiscreteSpace space(SpaceKind::P0, m);
      const GalerkinSystem sys = assemble_system(space, p);
      const SolveReport sol = lu_solve(sys.A, sys.b);
      std::vector<std::vector<double>> samples;
      if (sol.solvable) samples.push_back(compute_indicators(space, *sol.solution, p).per_element);
      std::vector<double> random(m.size());
      for (auto& x : random) x = dist(rng) * dist(rng);
      samples.push_back(random);
      for (const auto& v : samples) {
        Indicators ind;
        ind.per_element = v;
        for (double x : v) ind.total_sq += x;
        for (double theta : {0.3, 0.5, 0.8}) {
          ++cases;
          if (doerfler_mark(ind, theta).size() != brute_force_min(v, theta)) ++mismatches;
        }
      }
    }
  }
  return {mismatches == 0, std::to_string(meshes) + " meshes, " + std::to_string(cases) + " cases, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome mesh_calculus() {
  std::mt19937_64 rng(99);
  std::size_t son_violations = 0, overlay_violations = 0, pairs = 0;
  double worst_contraction = 0.0, worst_closure = 0.0;
  auto random_refinement = [&](const Mesh& m0, int steps) {
    Mesh m = m0;
    for (int s = 0; s < steps; ++s) {
      std::uniform_int_distribution<std::size_t> pick(0, m.size() - 1);
      const std::size_t marked[] = {pick(rng), pick(rng)};
      m = refine(m, marked);
    }
    return m;
  };
  for (const CurvePtr& c : {make_circle(0.4), make_lshape(), make_slit()}) {
    const Mesh m0 = Mesh::initial(c);
    // son bound and contraction
    Mesh m = m0;
    for (int step = 0; step < 30; ++step) {
      std::uniform_int_distribution<std::size_t> pick(0, m.size() - 1);
      const std::size_t marked[] = {pick(rng)};
      const Mesh fine = refine(m, marked);
      const auto amap = ancestor_map(fine, m);
      std::vector<std::size_t> children(m.size(), 0);
      for (std::size_t a : amap) ++children[a];
      std::size_t refined = 0;
      for (std::size_t x : children) refined += x > 1 ? 1 : 0;
      if (refined + m.size() > fine.size()) ++son_violations;
      for (std::size_t f = 0; f < fine.size(); ++f)
        if (children[amap[f]] > 1)
          worst_contraction = std::max(worst_contraction, fine.element(f).h / m.element(amap[f]).h);
      m = fine;
    }
    // overlay estimate
    for (int t = 0; t < 200; ++t) {
      const Mesh a = random_refinement(m0, 1 + t % 10);
      const Mesh b = random_refinement(m0, 1 + (3 * t) % 13);
      const Mesh o = overlay(a, b);
      ++pairs;
      if (o.size() > a.size() + b.size() - m0.size() || !is_refinement(o, a) || !is_refinement(o, b))
        ++overlay_violations;
    }
    // closure under adversarial marking: keep hitting the deepest element
    for (int variant = 0; variant < 2; ++variant) {
      std::vector<Mesh> hist{m0};
      std::vector<std::size_t> counts;
      for (int step = 0; step < 12; ++step) {
        const Mesh& cur = hist.back();
        std::size_t best = variant == 0 ? 0 : cur.size() - 1;
        for (std::size_t i = 0; i < cur.size(); ++i) {
          const std::size_t k = variant == 0 ? i : cur.size() - 1 - i;
          if (cur.element(k).generation > cur.element(best).generation) best = k;
        }
        const std::size_t marked[] = {best};
        hist.push_back(refine(cur, marked));
        counts.push_back(1);
      }
      worst_closure = std::max(worst_closure, count_accounting(hist, counts).ratio);
    }
  }
  const bool ok = son_violations == 0 && overlay_violations == 0 && worst_closure <= 4.0 && worst_contraction <= 0.75;
  return {ok, "son bound violations " + std::to_string(son_violations) + ", overlay violations " +
                  std::to_string(overlay_violations) + "/" + std::to_string(pairs) + ", closure ratio " +
                  fmt(worst_closure) + ", contraction " + fmt(worst_contraction)};
}

Outcome step_i_exercise() {
  ExperimentResult r;
  try {
    r = run_experiment(preset("idp-trigger"));
  } catch (const Error& e) {
    return {false, std::string("run aborted: ") + e.what()};
  }
  const auto& rec = r.loop.records;
  std::size_t triggered = 0;
  long last = -1;
  for (std::size_t i = 0; i < rec.size(); ++i)
    if (rec[i].step_i) {
      ++triggered;
      last = static_cast<long>(i);
    }
  std::vector<double> after;
  for (std::size_t i = static_cast<std::size_t>(last + 1); i < rec.size(); ++i) after.push_back(rec[i].eta);
  bool decreasing = after.size() >= 2;
  for (std::size_t i = 1; i < after.size(); ++i) decreasing = decreasing && after[i] < after[i - 1];
  std::ostringstream d;
  d << "step (i) on " << triggered << " of " << rec.size() << " levels (last at ell " << last << "), "
    << after.size() << " solved levels afterwards";
  if (!rec.empty()) d << ", final rcond " << fmt(rec.back().rcond);
  return {triggered > 0 && decreasing, d.str()};
}

// Integral over [0,1], Gauss-Legendre graded toward both ends.
template <class F>
cplx graded_both(F f) {
  const auto& g = gauss_legendre(20);
  cplx sum = 0.0;
  for (int side = 0; side < 2; ++side) {
    double hi = 0.5;
    for (int level = 0; level < 20; ++level) {
      const double lo = 0.25 * hi;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double u = lo + (hi - lo) * g.nodes[i];
        sum += (hi - lo) * g.weights[i] * f(side == 0 ? u : 1.0 - u);
      }
      hi = lo;
    }
  }
  return sum;
}

Outcome galerkin_orthogonality() {
  double worst = 0.0;
  std::size_t solves = 0;
  for (const auto& name : preset_names()) {
    for (const auto& st : preset_run(name).loop.levels) {
      if (!st.coeffs) continue;
      ++solves;
      worst = std::max(worst, st.galerkin_defect);
    }
  }
  // residual tested against each basis function by quadrature of the evaluated residual
  double worst_direct = 0.0;
  std::size_t direct = 0;
  for (const std::string name : {"lshape-nonconvex", "slit"}) {
    const ExperimentResult& r = preset_run(name);
    const WaveProblem p = make_problem(r.config, r.loop.levels.front().mesh.curve_ptr());
    for (const auto& st : r.loop.levels) {
      if (!st.coeffs || st.mesh.size() > 48) continue;
      const DiscreteSpace space(SpaceKind::P0, st.mesh);
      const double nb = assemble_rhs(space, p).norm();
      const ResidualEvaluator res(space, *st.coeffs, p);
      for (std::size_t e = 0; e < st.mesh.size(); ++e) {
        const ElementGeometry g = st.mesh.geometry(e);
        const cplx integral = graded_both([&](double s) {
          const double pt[] = {s};
          return res.residual(e, pt)[0] * g.jacobian(s);
        });
        worst_direct = std::max(worst_direct, std::abs(integral) / nb);
      }
      ++direct;
    }
  }
  return {worst <= 1e-8 && worst_direct <= 1e-8,
          "max |<r, psi_i>| / ||b|| = " + fmt(worst) + " over " + std::to_string(solves) +
              " solves; by quadrature of the residual " + fmt(worst_direct) + " over " + std::to_string(direct) +
              " solves"};
}

Outcome hypersingular_kernel() {
  double worst_sum = 0.0;
  bool all_spd = true;
  std::size_t matrices = 0;
  std::mt19937_64 rng(1);
  for (const CurvePtr& c : {make_circle(0.4), make_lshape()}) {
    Mesh m = Mesh::initial(c);
    while (m.size() <= 256) {
      const DiscreteSpace s1(SpaceKind::S1, m);
      const ComplexDenseMatrix W0 = assemble_W(s1, 0.0, false);
      for (Eigen::Index i = 0; i < W0.rows(); ++i) worst_sum = std::max(worst_sum, std::abs(W0.row(i).sum()));
      const ComplexDenseMatrix Ws = assemble_W(s1, 0.0, true);
      Eigen::LLT<Eigen::MatrixXd> llt(Ws.real());
      all_spd = all_spd && llt.info() == Eigen::Success && Ws.imag().norm() == 0.0 &&
                (Ws.real() - Ws.real().transpose()).norm() <= 1e-14 * Ws.norm();
      ++matrices;
      std::uniform_int_distribution<std::size_t> pick(0, m.size() - 1);
      const std::size_t marked[] = {pick(rng), pick(rng), 0};
      m = refine(m, marked);
    }
  }
  return {worst_sum <= 1e-9 && all_spd, std::to_string(matrices) + " meshes, max |row sum| " + fmt(worst_sum) +
                                            (all_spd ? ", stabilized SPD" : ", stabilized NOT SPD")};
}

Outcome inverse_estimate() {
  Outcome o{true, ""};
  for (double k : {0.0, 4.0}) {
    std::mt19937_64 rng(31337);
    std::normal_distribution<double> n;
    std::vector<double> x, y;
    Mesh m = Mesh::initial(make_lshape());
    std::string seq;
    for (int level = 0; level < 8; ++level) {
      const DiscreteSpace space(SpaceKind::P0, m);
      double avg = 0.0;
      constexpr int samples = 3;
      for (int s = 0; s < samples; ++s) {
        CoeffVector psi(static_cast<Eigen::Index>(m.size()));
        for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = cplx(n(rng), n(rng));
        avg += inverse_estimate_ratio(space, k, psi) / samples;
      }
      x.push_back(level);
      y.push_back(std::log(avg));
      seq += fmt(avg, 3) + (level < 7 ? " " : "");
      m = uniform_refine(m);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i] / x.size();
      my += y[i] / y.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double slope = sxy / sxx;  // growth of log(ratio) per level
    o.pass = o.pass && slope <= 0.05;
    o.details += "k=" + fmt(k) + " ratios [" + seq + "] slope " + fmt(slope, 3) + "; ";
  }
  return o;
}

Outcome determinism() {
  Outcome o{true, ""};
  for (const auto& name : preset_names()) {
    const std::string a = csv_text(preset_run(name).loop.records);
    const std::string b = csv_text(run_experiment(preset(name)).loop.records);
    const bool same = a == b;
    o.pass = o.pass && same;
    o.details += name + (same ? " identical" : " DIFFERS") + "; ";
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "smooth-geometry rate", smooth_rate},
      {2, "singularity recovery", singularity_recovery},
      {3, "linear convergence", linear_convergence},
      {4, "reliability", reliability},
      {5, "axioms", axioms},
      {6, "marking optimality", marking_optimality},
      {7, "mesh calculus", mesh_calculus},
      {8, "step (i) exercise", step_i_exercise},
      {9, "Galerkin orthogonality", galerkin_orthogonality},
      {10, "hypersingular kernel", hypersingular_kernel},
      {11, "inverse-estimate diagnostic", inverse_estimate},
      {12, "determinism", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-12)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (const Criterion& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.details.c_str(), secs);
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
