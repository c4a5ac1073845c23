// SPDX-License-Identifier: Apache-2.0
#include "abem/abem.h"

#include "abem/error.hpp"
#include "abem/experiment.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>

struct abem_experiment {
  abem::ExperimentConfig config;
  std::optional<abem::ExperimentResult> result;
};

namespace {

thread_local std::string last_error;

abem_status status_of(abem::ErrorKind k) {
  switch (k) {
    case abem::ErrorKind::invalid_argument: return ABEM_ERR_INVALID_ARGUMENT;
    case abem::ErrorKind::config: return ABEM_ERR_CONFIG;
    case abem::ErrorKind::numerical: return ABEM_ERR_NUMERICAL;
    case abem::ErrorKind::io: return ABEM_ERR_IO;
    case abem::ErrorKind::incompatible: return ABEM_ERR_INCOMPATIBLE;
  }
  return ABEM_ERR_INTERNAL;
}

template <class F>
abem_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const abem::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ABEM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ABEM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return ABEM_ERR_INTERNAL;
  }
}

abem_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return ABEM_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

abem_status abem_experiment_from_file(const char* path, abem_experiment** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] {
    *out = new abem_experiment{abem::load_config(path), std::nullopt};
    return ABEM_OK;
  });
}

abem_status abem_experiment_from_preset(const char* name, abem_experiment** out) {
  if (!name || !out) return null_argument("name/out");
  return guarded([&] {
    *out = new abem_experiment{abem::preset(name), std::nullopt};
    return ABEM_OK;
  });
}

abem_status abem_experiment_from_text(const char* text, abem_experiment** out) {
  if (!text || !out) return null_argument("text/out");
  return guarded([&] {
    *out = new abem_experiment{abem::parse_config(text), std::nullopt};
    return ABEM_OK;
  });
}

abem_status abem_experiment_set(abem_experiment* exp, const char* key, const char* value) {
  if (!exp || !key || !value) return null_argument("experiment/key/value");
  return guarded([&] {
    abem::set_option(exp->config, key, value);
    return ABEM_OK;
  });
}

abem_status abem_experiment_run(abem_experiment* exp) {
  if (!exp) return null_argument("experiment");
  return guarded([&] {
    exp->result.reset();
    exp->result = abem::run_experiment(exp->config);
    return ABEM_OK;
  });
}

size_t abem_experiment_record_count(const abem_experiment* exp) {
  if (!exp || !exp->result) return 0;
  return exp->result->loop.records.size();
}

abem_status abem_experiment_record(const abem_experiment* exp, size_t index, abem_record* out) {
  if (!exp || !out) return null_argument("experiment/out");
  if (!exp->result) {
    last_error = "experiment has not been run";
    return ABEM_ERR_STATE;
  }
  const auto& recs = exp->result->loop.records;
  if (index >= recs.size()) {
    last_error = "record index out of range";
    return ABEM_ERR_INVALID_ARGUMENT;
  }
  const auto& r = recs[index];
  out->ell = r.ell;
  out->n = r.N;
  out->eta = r.eta;
  out->eta_sq = r.eta_sq;
  out->rcond = r.rcond;
  out->beta = r.beta;
  out->marked = r.marked;
  out->step_i = r.step_i ? 1 : 0;
  out->energy_error = r.energy_error.value_or(std::numeric_limits<double>::quiet_NaN());
  return ABEM_OK;
}

abem_status abem_experiment_write_csv(const abem_experiment* exp, const char* path) {
  if (!exp || !path) return null_argument("experiment/path");
  if (!exp->result) {
    last_error = "experiment has not been run";
    return ABEM_ERR_STATE;
  }
  return guarded([&] {
    abem::write_csv(path, exp->result->loop.records);
    return ABEM_OK;
  });
}

const char* abem_experiment_summary(const abem_experiment* exp) {
  if (!exp || !exp->result) return "";
  return exp->result->summary.c_str();
}

void abem_experiment_destroy(abem_experiment* exp) { delete exp; }

size_t abem_preset_count(void) { return abem::preset_names().size(); }

const char* abem_preset_name(size_t index) {
  static const std::vector<std::string> names = abem::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

abem_status abem_compare_csv(const char* path_a, const char* path_b, double margin, abem_comparison* out, char* table,
                             size_t capacity, size_t* required) {
  if (!path_a || !path_b || !out) return null_argument("path_a/path_b/out");
  return guarded([&] {
    const auto c = abem::compare_runs(abem::read_csv(path_a), abem::read_csv(path_b), margin);
    out->rate_a = c.rate_a;
    out->rate_b = c.rate_b;
    out->difference = c.difference;
    out->margin_met = c.margin_met ? 1 : 0;
    if (required) *required = c.table.size() + 1;
    if (table && capacity > 0) {
      const size_t n = std::min(capacity - 1, c.table.size());
      std::memcpy(table, c.table.data(), n);
      table[n] = '\0';
    }
    return ABEM_OK;
  });
}

const char* abem_last_error(void) { return last_error.c_str(); }

}  // extern "C"
