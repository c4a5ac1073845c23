/* SPDX-License-Identifier: Apache-2.0 */
/* C interface of the adaptive BEM library. All handles are opaque; every
 * fallible call returns an abem_status and leaves a message retrievable with
 * abem_last_error() on the calling thread. */
#ifndef ABEM_ABEM_H
#define ABEM_ABEM_H

#include <stddef.h>

#if defined(ABEM_BUILDING_LIBRARY)
#define ABEM_API __attribute__((visibility("default")))
#else
#define ABEM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum abem_status {
  ABEM_OK = 0,
  ABEM_ERR_INVALID_ARGUMENT = 1,
  ABEM_ERR_CONFIG = 2,
  ABEM_ERR_NUMERICAL = 3,
  ABEM_ERR_IO = 4,
  ABEM_ERR_INCOMPATIBLE = 5,
  ABEM_ERR_STATE = 6, /* e.g. results requested before a run */
  ABEM_ERR_INTERNAL = 7
} abem_status;

typedef struct abem_experiment abem_experiment;

typedef struct abem_record {
  int ell;
  size_t n;
  double eta;
  double eta_sq;
  double rcond;
  double beta;         /* NaN when not computed */
  size_t marked;
  int step_i;          /* 1 if the uniform fallback was taken */
  double energy_error; /* NaN without a reference solution */
} abem_record;

typedef struct abem_comparison {
  double rate_a;
  double rate_b;
  double difference;
  int margin_met;
} abem_comparison;

ABEM_API abem_status abem_experiment_from_file(const char* path, abem_experiment** out);
ABEM_API abem_status abem_experiment_from_preset(const char* name, abem_experiment** out);
ABEM_API abem_status abem_experiment_from_text(const char* text, abem_experiment** out);
/* Override one config key; the same keys as in config files. */
ABEM_API abem_status abem_experiment_set(abem_experiment* exp, const char* key, const char* value);
/* Runs the adaptive loop; writes the CSV if the 'out' key is set. */
ABEM_API abem_status abem_experiment_run(abem_experiment* exp);
ABEM_API size_t abem_experiment_record_count(const abem_experiment* exp);
ABEM_API abem_status abem_experiment_record(const abem_experiment* exp, size_t index, abem_record* out);
ABEM_API abem_status abem_experiment_write_csv(const abem_experiment* exp, const char* path);
/* Valid until the next run or destroy; empty before a run. */
ABEM_API const char* abem_experiment_summary(const abem_experiment* exp);
ABEM_API void abem_experiment_destroy(abem_experiment* exp);

ABEM_API size_t abem_preset_count(void);
ABEM_API const char* abem_preset_name(size_t index);

/* Compare the fitted rates of two CSV logs. If table is non-null, the aligned
 * (N, eta) table is copied into it (NUL terminated); *required receives the
 * needed capacity including the terminator. */
ABEM_API abem_status abem_compare_csv(const char* path_a, const char* path_b, double margin, abem_comparison* out,
                                      char* table, size_t capacity, size_t* required);

ABEM_API const char* abem_last_error(void);

#ifdef __cplusplus
}
#endif

#endif
