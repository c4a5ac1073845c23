// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/config.hpp"
#include "abem/diagnostics.hpp"

#include <string>
#include <vector>

namespace abem {

inline constexpr const char* csv_header = "ell,N,eta,eta_sq,rcond,beta,marked,step_i,energy_error";

struct ExperimentResult {
  ExperimentConfig config;
  LoopResult loop;
  std::string summary;
};

/// Run the adaptive loop of a config, attach the reference solution when
/// configured, and write the CSV when cfg.out is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string csv_text(const std::vector<IterationRecord>& records);
void write_csv(const std::string& path, const std::vector<IterationRecord>& records);
std::vector<IterationRecord> parse_csv(const std::string& text);
std::vector<IterationRecord> read_csv(const std::string& path);

/// Human-readable rates, linear convergence fit and axiom constants.
std::string summarize(const LoopResult& loop);

struct Comparison {
  double rate_a = 0.0;
  double rate_b = 0.0;
  double difference = 0.0;  // rate_a - rate_b
  bool margin_met = false;
  std::string table;
};

/// Rates fitted over the second half (at least four records) of each run.
Comparison compare_runs(const std::vector<IterationRecord>& a, const std::vector<IterationRecord>& b, double margin);

/// The tail used by compare_runs: last max(4, ceil(n/2)) records.
double tail_rate(const std::vector<IterationRecord>& records);

}  // namespace abem
