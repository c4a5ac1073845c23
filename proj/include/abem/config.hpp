// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/adaptive.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace abem {

/// Flat key=value experiment description. Every key is documented in README.md.
struct ExperimentConfig {
  std::string geometry = "circle";  // circle | lshape | slit
  double radius = 0.4;               // circle only
  std::optional<double> scale;       // curve-specific default when absent
  int mesh_splits = 0;
  Equation equation = Equation::weakly_singular;
  double k = 0.0;
  bool k_idp = false;  // k = first zero of J0 divided by the radius
  double theta = 0.4;
  MarkingVariant marking = MarkingVariant::expanded;
  std::size_t max_dofs = 512;
  QuadOrders quad;
  IncidentField incident;
  std::optional<bool> stabilize;  // default: only for k = 0 on closed curves
  int reference_levels = 0;
  int estimator_points = 4;
  bool beta = true;
  bool axioms = true;
  std::string out;

  double wavenumber() const;
};

/// Apply one key; throws Error(config) naming the key when the key is unknown
/// or the value is malformed.
void set_option(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

std::vector<std::string> preset_names();
/// Config text of a built-in preset.
const std::string& preset_text(const std::string& name);
ExperimentConfig preset(const std::string& name);

/// Consistency checks across keys (direction normalization, source placement, ...).
void validate(const ExperimentConfig& cfg);

CurvePtr make_curve(const ExperimentConfig& cfg);
WaveProblem make_problem(const ExperimentConfig& cfg, CurvePtr curve);
LoopOptions loop_options(const ExperimentConfig& cfg);

}  // namespace abem
