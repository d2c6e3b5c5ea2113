/*
 * clustercap: uplink throughput of clustered multicell joint decoding
 * Copyright (C) 2026 clustercap developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *

 */

#ifndef CLUSTERCAP_H
#define CLUSTERCAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(CLUSTERCAP_BUILDING_LIBRARY)
#define CCAP_API __attribute__((visibility("default")))
#else
#define CCAP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every call returns one; ccap_last_error() holds the message
 * of the most recent failure on the calling thread. */
typedef enum ccap_status {
  CCAP_OK = 0,
  CCAP_ERR_INVALID_PARAMETER = 1,
  CCAP_ERR_ILL_CONDITIONED = 2,
  CCAP_ERR_POLE = 3,
  CCAP_ERR_NO_PHYSICAL_ROOT = 4,
  CCAP_ERR_NONFINITE_LOGDET = 5,
  CCAP_ERR_UNMATCHED_PAIR = 6,
  CCAP_ERR_EMPTY_INPUT = 7,
  CCAP_ERR_IO = 8,
  CCAP_ERR_PARSE = 9,
  CCAP_ERR_INTERNAL = 10
} ccap_status;

typedef enum ccap_scheme {
  CCAP_SCHEME_MJD = 0,
  CCAP_SCHEME_IA = 1,
  CCAP_SCHEME_RDMA = 2,
  CCAP_SCHEME_CI = 3
} ccap_scheme;

typedef enum ccap_route { CCAP_ROUTE_ANALYTIC = 0, CCAP_ROUTE_MONTE_CARLO = 1 } ccap_route;

/* Scenario: M cells per cluster, K users per cell, n = K + 1 antennas,
 * intercell gain alpha, per-antenna SNR gamma (linear). */
typedef struct ccap_params {
  int M;
  int K;
  int n;
  double alpha;
  double gamma;
} ccap_params;

typedef struct ccap_result {
  double value_nats;
  double value_bits;
  double stderr_nats;          /* Monte Carlo only, else 0 */
  uint64_t iterations;
  uint64_t seed;
  uint64_t redraws;
  double max_interference_ratio;
} ccap_result;

typedef struct ccap_row {
  ccap_scheme scheme;
  ccap_route route;
  int M, K, n;
  double alpha;
  double gamma_db;
  int has_value;               /* 0 marks an error row */
  double value_bits;
  double value_nats;
  int has_stderr;
  double stderr_nats;
  uint64_t iterations;
  uint64_t seed;
  int has_runtime;
  double runtime_ms;
} ccap_row;

typedef struct ccap_experiment ccap_experiment;
typedef struct ccap_rows ccap_rows;
typedef struct ccap_report ccap_report;

CCAP_API const char* ccap_version(void);
CCAP_API const char* ccap_last_error(void);
CCAP_API const char* ccap_status_name(ccap_status status);
CCAP_API void ccap_string_free(char* text);

CCAP_API ccap_status ccap_params_init(int M, int K, double alpha, double gamma, ccap_params* out);
CCAP_API ccap_status ccap_scheme_parse(const char* text, ccap_scheme* out);
CCAP_API const char* ccap_scheme_name(ccap_scheme scheme);

CCAP_API ccap_status ccap_mp_shannon(double g, double beta, double* out);
CCAP_API ccap_status ccap_analytic(ccap_scheme scheme, const ccap_params* params, ccap_result* out);
CCAP_API ccap_status ccap_monte_carlo(ccap_scheme scheme, const ccap_params* params, uint64_t iterations,
                                      uint64_t seed, ccap_result* out);
CCAP_API ccap_status ccap_dof(ccap_scheme scheme, const ccap_params* params, int64_t* num, int64_t* den);

/* Experiments: create empty (single point, all schemes, both routes) or
 * from a named preset, then adjust with key/value settings or a config
 * file. Keys: preset, scheme, route, M, K, alpha, gamma_db, iters, seed,
 * workers, timing. */
CCAP_API ccap_status ccap_experiment_create(ccap_experiment** out);
CCAP_API ccap_status ccap_experiment_preset(const char* name, ccap_experiment** out);
CCAP_API ccap_status ccap_experiment_set(ccap_experiment* exp, const char* key, const char* value);
CCAP_API ccap_status ccap_experiment_load_config(ccap_experiment* exp, const char* path);
CCAP_API ccap_status ccap_experiment_is_dof_table(const ccap_experiment* exp, int* out);
CCAP_API ccap_status ccap_experiment_run(const ccap_experiment* exp, ccap_rows** out);
/* Degrees-of-freedom table as CSV text; free with ccap_string_free. */
CCAP_API ccap_status ccap_experiment_dof_csv(const ccap_experiment* exp, char** out);
CCAP_API ccap_status ccap_experiment_gnuplot(const ccap_experiment* exp, const char* csv_path, char** out);
CCAP_API void ccap_experiment_free(ccap_experiment* exp);

CCAP_API size_t ccap_rows_count(const ccap_rows* rows);
CCAP_API ccap_status ccap_rows_get(const ccap_rows* rows, size_t index, ccap_row* out);
/* Failure message of an error row, "" otherwise. Owned by rows. */
CCAP_API const char* ccap_rows_error(const ccap_rows* rows, size_t index);
CCAP_API ccap_status ccap_rows_csv(const ccap_rows* rows, char** out);
CCAP_API ccap_status ccap_rows_write_csv(const ccap_rows* rows, const char* path);
CCAP_API ccap_status ccap_rows_read_csv(const char* path, ccap_rows** out);
CCAP_API void ccap_rows_free(ccap_rows* rows);

CCAP_API ccap_status ccap_compare(const ccap_rows* rows, ccap_report** out);
CCAP_API int ccap_report_passed(const ccap_report* report);
CCAP_API const char* ccap_report_text(const ccap_report* report);
CCAP_API void ccap_report_free(ccap_report* report);

CCAP_API ccap_status ccap_write_text(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* CLUSTERCAP_H */
