// SPDX-License-Identifier: Apache-2.0
// Command line front end over the C API.
#include "abem/abem.h"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace {

int exit_code(abem_status s) {
  switch (s) {
    case ABEM_OK: return 0;
    case ABEM_ERR_NUMERICAL: return 2;
    default: return 1;
  }
}

int report(abem_status s) {
  if (s != ABEM_OK) std::fprintf(stderr, "error: %s\n", abem_last_error());
  return exit_code(s);
}

struct Overrides {
  std::optional<std::string> k, theta, marking, max_dofs, out;
};

int run(const std::string& config, const Overrides& ov) {
  abem_experiment* exp = nullptr;
  if (const abem_status s = abem_experiment_from_file(config.c_str(), &exp); s != ABEM_OK) return report(s);
  const std::pair<const char*, const std::optional<std::string>*> keys[] = {
      {"k", &ov.k}, {"theta", &ov.theta}, {"marking", &ov.marking}, {"max_dofs", &ov.max_dofs}, {"out", &ov.out}};
  for (const auto& [key, value] : keys) {
    if (!*value) continue;
    if (const abem_status s = abem_experiment_set(exp, key, (*value)->c_str()); s != ABEM_OK) {
      abem_experiment_destroy(exp);
      return report(s);
    }
  }
  const abem_status s = abem_experiment_run(exp);
  if (s == ABEM_OK) {
    std::printf("ell,N,eta,marked,step_i\n");
    const size_t n = abem_experiment_record_count(exp);
    for (size_t i = 0; i < n; ++i) {
      abem_record r;
      abem_experiment_record(exp, i, &r);
      std::printf("%d,%zu,%.6e,%zu,%d\n", r.ell, r.n, r.eta, r.marked, r.step_i);
    }
    std::printf("%s", abem_experiment_summary(exp));
  }
  abem_experiment_destroy(exp);
  return report(s);
}

int compare(const std::string& a, const std::string& b, double margin) {
  abem_comparison c;
  size_t need = 0;
  abem_status s = abem_compare_csv(a.c_str(), b.c_str(), margin, &c, nullptr, 0, &need);
  if (s != ABEM_OK) return report(s);
  std::vector<char> table(need);
  s = abem_compare_csv(a.c_str(), b.c_str(), margin, &c, table.data(), table.size(), nullptr);
  if (s != ABEM_OK) return report(s);
  std::printf("%s", table.data());
  std::printf("margin %.3f %s\n", margin, c.margin_met ? "met" : "not met");
  return c.margin_met ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive boundary element solver for 2D Helmholtz problems"};
  app.require_subcommand(1);

  std::string config;
  Overrides ov;
  auto* run_cmd = app.add_subcommand("run", "run the adaptive loop of a config file");
  run_cmd->add_option("config", config, "key=value config file")->required();
  run_cmd->add_option_function<std::string>("--k", [&](const std::string& v) { ov.k = v; }, "wavenumber");
  run_cmd->add_option_function<std::string>("--theta", [&](const std::string& v) { ov.theta = v; }, "bulk parameter");
  run_cmd->add_option_function<std::string>("--marking", [&](const std::string& v) { ov.marking = v; },
                                            "doerfler, expanded or uniform");
  run_cmd->add_option_function<std::string>("--max-dofs", [&](const std::string& v) { ov.max_dofs = v; },
                                            "element budget");
  run_cmd->add_option_function<std::string>("--out", [&](const std::string& v) { ov.out = v; }, "CSV output path");

  std::string csv_a, csv_b;
  double margin = 0.5;
  auto* cmp_cmd = app.add_subcommand("compare", "compare fitted rates of two CSV logs");
  cmp_cmd->add_option("csv_a", csv_a)->required();
  cmp_cmd->add_option("csv_b", csv_b)->required();
  cmp_cmd->add_option("--margin", margin, "required rate advantage of the first run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (*run_cmd) return run(config, ov);
  return compare(csv_a, csv_b, margin);
}
