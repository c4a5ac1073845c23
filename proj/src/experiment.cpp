// SPDX-License-Identifier: Apache-2.0
#include "abem/experiment.hpp"

#include "abem/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace abem {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_field(const std::string& s, int line, const char* name) {
  if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size())
    fail(ErrorKind::config, "csv line " + std::to_string(line) + ": bad value '" + s + "' in column " + name);
  return v;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const CurvePtr curve = make_curve(cfg);
  const WaveProblem problem = make_problem(cfg, curve);
  const LoopOptions options = loop_options(cfg);
  MarkingConfig marking;
  marking.theta = cfg.theta;
  marking.variant = cfg.marking;
  ExperimentResult res;
  res.config = cfg;
  res.loop = adaptive_loop(problem, marking, Mesh::initial(curve, cfg.mesh_splits), options);
  if (cfg.reference_levels > 0) attach_reference(res.loop, problem, cfg.reference_levels, cfg.quad);
  res.summary = summarize(res.loop);
  if (!cfg.out.empty()) write_csv(cfg.out, res.loop.records);
  return res;
}

std::string csv_text(const std::vector<IterationRecord>& records) {
  std::string out = csv_header;
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.ell) + ',' + std::to_string(r.N) + ',' + fmt(r.eta) + ',' + fmt(r.eta_sq) + ',' +
           fmt(r.rcond) + ',' + fmt(r.beta) + ',' + std::to_string(r.marked) + ',' + (r.step_i ? "1" : "0") + ',' +
           (r.energy_error ? fmt(*r.energy_error) : std::string("nan")) + '\n';
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<IterationRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
  out << csv_text(records);
  if (!out) fail(ErrorKind::io, "write to '" + path + "' failed");
}

std::vector<IterationRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::config, "csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header) fail(ErrorKind::config, "csv header does not match the record schema");
  std::vector<IterationRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 9) fail(ErrorKind::config, "csv line " + std::to_string(lineno) + ": expected 9 columns");
    IterationRecord r;
    r.ell = static_cast<int>(parse_field(f[0], lineno, "ell"));
    r.N = static_cast<std::size_t>(parse_field(f[1], lineno, "N"));
    r.eta = parse_field(f[2], lineno, "eta");
    r.eta_sq = parse_field(f[3], lineno, "eta_sq");
    r.rcond = parse_field(f[4], lineno, "rcond");
    r.beta = parse_field(f[5], lineno, "beta");
    r.marked = static_cast<std::size_t>(parse_field(f[6], lineno, "marked"));
    r.step_i = parse_field(f[7], lineno, "step_i") != 0.0;
    const double e = parse_field(f[8], lineno, "energy_error");
    if (!std::isnan(e)) r.energy_error = e;
    out.push_back(r);
  }
  return out;
}

std::vector<IterationRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

double tail_rate(const std::vector<IterationRecord>& records) {
  const std::size_t n = records.size();
  const std::size_t window = std::max<std::size_t>(4, (n + 1) / 2);
  return empirical_rate(records, window);
}

std::string summarize(const LoopResult& loop) {
  std::ostringstream s;
  const auto& rec = loop.records;
  std::size_t step_i = 0;
  for (const auto& r : rec) step_i += r.step_i ? 1 : 0;
  s << "levels " << rec.size() << ", final N " << (rec.empty() ? 0 : rec.back().N) << ", step (i) fallbacks "
    << step_i << "\n";
  if (!rec.empty()) s << "final eta " << fmt(rec.back().eta) << "\n";
  try {
    s << "rate of eta over the tail: " << fmt(tail_rate(rec)) << "\n";
  } catch (const Error&) {
    s << "rate of eta over the tail: n/a\n";
  }
  try {
    const LinearFit fit = linear_convergence_fit(rec);
    s << "linear convergence: q_lin " << fmt(fit.q) << ", C_lin " << fmt(fit.C) << " over " << fit.used
      << " levels\n";
  } catch (const Error&) {
    s << "linear convergence: n/a (fewer than 6 levels after the last fallback)\n";
  }
  if (!loop.axioms.empty()) {
    std::vector<double> stb, drel, rel;
    for (const auto& a : loop.axioms) {
      stb.push_back(a.C_stb);
      drel.push_back(a.C_drel);
      rel.push_back(a.C_rel);
    }
    auto line = [&](const char* name, const std::vector<double>& v) {
      const Spread sp = spread(v);
      s << name << ": min " << fmt(sp.min) << ", max " << fmt(sp.max) << "\n";
    };
    line("C_stb", stb);
    line("C_drel", drel);
    if (spread(rel).count > 0) line("C_rel", rel);
    try {
      const ReductionFit rf = reduction_fit(loop.axioms);
      s << "reduction: q " << fmt(rf.q) << ", C at q=1/2 " << fmt(rf.C_half) << "\n";
    } catch (const Error&) {
    }
  }
  return s.str();
}

Comparison compare_runs(const std::vector<IterationRecord>& a, const std::vector<IterationRecord>& b, double margin) {
  Comparison c;
  c.rate_a = tail_rate(a);
  c.rate_b = tail_rate(b);
  c.difference = c.rate_a - c.rate_b;
  c.margin_met = c.difference >= margin;
  std::ostringstream t;
  t << "row,N_a,eta_a,N_b,eta_b\n";
  const std::size_t rows = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < rows; ++i) {
    t << i << ',';
    if (i < a.size())
      t << a[i].N << ',' << fmt(a[i].eta);
    else
      t << ',';
    t << ',';
    if (i < b.size())
      t << b[i].N << ',' << fmt(b[i].eta);
    else
      t << ',';
    t << '\n';
  }
  t << "rate_a " << fmt(c.rate_a) << "\nrate_b " << fmt(c.rate_b) << "\ndifference " << fmt(c.difference) << "\n";
  c.table = t.str();
  return c;
}

}  // namespace abem
