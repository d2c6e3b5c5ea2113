// clustercap: uplink throughput of clustered multicell joint decoding
// Copyright (C) 2026 clustercap developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "clustercap/clustercap.h"

#include "bench.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

struct ccap_experiment {
  clustercap::ExperimentSpec spec;
};

struct ccap_rows {
  std::vector<clustercap::ResultRow> rows;
};

struct ccap_report {
  clustercap::CompareReport report;
};

namespace {

using namespace clustercap;

thread_local std::string g_last_error;

ccap_status map_code(ErrorCode c) {
  switch (c) {
  case ErrorCode::InvalidParameter: return CCAP_ERR_INVALID_PARAMETER;
  case ErrorCode::IllConditionedChannel: return CCAP_ERR_ILL_CONDITIONED;
  case ErrorCode::PoleEncountered: return CCAP_ERR_POLE;
  case ErrorCode::NoPhysicalRoot: return CCAP_ERR_NO_PHYSICAL_ROOT;
  case ErrorCode::NonFiniteLogDet: return CCAP_ERR_NONFINITE_LOGDET;
  case ErrorCode::UnmatchedPair: return CCAP_ERR_UNMATCHED_PAIR;
  case ErrorCode::EmptyInput: return CCAP_ERR_EMPTY_INPUT;
  case ErrorCode::Io: return CCAP_ERR_IO;
  case ErrorCode::Parse: return CCAP_ERR_PARSE;
  }
  return CCAP_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
ccap_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CCAP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CCAP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CCAP_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidParameter, std::string(what) + " must not be null");
}

SchemeKind to_scheme(ccap_scheme s) {
  switch (s) {
  case CCAP_SCHEME_MJD: return SchemeKind::GlobalMJD;
  case CCAP_SCHEME_IA: return SchemeKind::IA;
  case CCAP_SCHEME_RDMA: return SchemeKind::RDMA;
  case CCAP_SCHEME_CI: return SchemeKind::CI;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown scheme value");
}

ccap_scheme from_scheme(SchemeKind s) {
  switch (s) {
  case SchemeKind::GlobalMJD: return CCAP_SCHEME_MJD;
  case SchemeKind::IA: return CCAP_SCHEME_IA;
  case SchemeKind::RDMA: return CCAP_SCHEME_RDMA;
  case SchemeKind::CI: return CCAP_SCHEME_CI;
  }
  return CCAP_SCHEME_MJD;
}

SystemParams to_params(const ccap_params* p) {
  require(p, "params");
  return SystemParams::make(p->M, p->K, p->n, p->alpha, p->gamma);
}

void fill(const ThroughputResult& r, ccap_result* out) {
  out->value_nats = r.value_nats;
  out->value_bits = r.value_bits();
  out->stderr_nats = r.stderr_nats;
  out->iterations = r.iterations;
  out->seed = r.seed;
  out->redraws = r.redraws;
  out->max_interference_ratio = r.max_interference_ratio;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

} // namespace

extern "C" {

const char* ccap_version(void) { return "0.1.0"; }

const char* ccap_last_error(void) { return g_last_error.c_str(); }

const char* ccap_status_name(ccap_status status) {
  switch (status) {
  case CCAP_OK: return "ok";
  case CCAP_ERR_INVALID_PARAMETER: return "invalid parameter";
  case CCAP_ERR_ILL_CONDITIONED: return "ill-conditioned channel";
  case CCAP_ERR_POLE: return "pole encountered";
  case CCAP_ERR_NO_PHYSICAL_ROOT: return "no physical root";
  case CCAP_ERR_NONFINITE_LOGDET: return "non-finite log-determinant";
  case CCAP_ERR_UNMATCHED_PAIR: return "unmatched pair";
  case CCAP_ERR_EMPTY_INPUT: return "empty input";
  case CCAP_ERR_IO: return "i/o error";
  case CCAP_ERR_PARSE: return "parse error";
  case CCAP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void ccap_string_free(char* text) { std::free(text); }

ccap_status ccap_params_init(int M, int K, double alpha, double gamma, ccap_params* out) {
  return guarded([&] {
    require(out, "out");
    const auto p = SystemParams::make(M, K, alpha, gamma);
    *out = ccap_params{p.M, p.K, p.n, p.alpha, p.gamma};
  });
}

ccap_status ccap_scheme_parse(const char* text, ccap_scheme* out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = from_scheme(parse_scheme(text));
  });
}

const char* ccap_scheme_name(ccap_scheme scheme) {
  switch (scheme) {
  case CCAP_SCHEME_MJD: return "mjd";
  case CCAP_SCHEME_IA: return "ia";
  case CCAP_SCHEME_RDMA: return "rdma";
  case CCAP_SCHEME_CI: return "ci";
  }
  return "?";
}

ccap_status ccap_mp_shannon(double g, double beta, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = mp_shannon_transform(g, beta);
  });
}

ccap_status ccap_analytic(ccap_scheme scheme, const ccap_params* params, ccap_result* out) {
  return guarded([&] {
    require(out, "out");
    fill(capacity(to_scheme(scheme), to_params(params)), out);
  });
}

ccap_status ccap_monte_carlo(ccap_scheme scheme, const ccap_params* params, uint64_t iterations, uint64_t seed,
                             ccap_result* out) {
  return guarded([&] {
    require(out, "out");
    MonteCarloConfig cfg;
    cfg.scheme = to_scheme(scheme);
    cfg.params = to_params(params);
    cfg.iterations = iterations;
    cfg.master_seed = seed;
    fill(simulate(cfg), out);
  });
}

ccap_status ccap_dof(ccap_scheme scheme, const ccap_params* params, int64_t* num, int64_t* den) {
  return guarded([&] {
    require(num, "num");
    require(den, "den");
    const auto d = degrees_of_freedom_exact(to_scheme(scheme), to_params(params));
    *num = d.num();
    *den = d.den();
  });
}

ccap_status ccap_experiment_create(ccap_experiment** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ccap_experiment{};
  });
}

ccap_status ccap_experiment_preset(const char* name, ccap_experiment** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new ccap_experiment{preset(name)};
  });
}

ccap_status ccap_experiment_set(ccap_experiment* exp, const char* key, const char* value) {
  return guarded([&] {
    require(exp, "experiment");
    require(key, "key");
    require(value, "value");
    apply_setting(exp->spec, key, value);
  });
}

ccap_status ccap_experiment_load_config(ccap_experiment* exp, const char* path) {
  return guarded([&] {
    require(exp, "experiment");
    require(path, "path");
    load_config(exp->spec, path);
  });
}

ccap_status ccap_experiment_is_dof_table(const ccap_experiment* exp, int* out) {
  return guarded([&] {
    require(exp, "experiment");
    require(out, "out");
    *out = exp->spec.dof_table ? 1 : 0;
  });
}

ccap_status ccap_experiment_run(const ccap_experiment* exp, ccap_rows** out) {
  return guarded([&] {
    require(exp, "experiment");
    require(out, "out");
    *out = new ccap_rows{run_experiment(exp->spec)};
  });
}

ccap_status ccap_experiment_dof_csv(const ccap_experiment* exp, char** out) {
  return guarded([&] {
    require(exp, "experiment");
    require(out, "out");
    *out = dup_string(format_dof_csv(emit_dof_table(exp->spec)));
  });
}

ccap_status ccap_experiment_gnuplot(const ccap_experiment* exp, const char* csv_path, char** out) {
  return guarded([&] {
    require(exp, "experiment");
    require(csv_path, "csv_path");
    require(out, "out");
    *out = dup_string(gnuplot_script(exp->spec, csv_path));
  });
}

void ccap_experiment_free(ccap_experiment* exp) { delete exp; }

size_t ccap_rows_count(const ccap_rows* rows) { return rows ? rows->rows.size() : 0; }

ccap_status ccap_rows_get(const ccap_rows* rows, size_t index, ccap_row* out) {
  return guarded([&] {
    require(rows, "rows");
    require(out, "out");
    if (index >= rows->rows.size()) throw Error(ErrorCode::InvalidParameter, "row index out of range");
    const auto& r = rows->rows[index];
    ccap_row c{};
    c.scheme = from_scheme(r.scheme);
    c.route = r.route == Route::Analytic ? CCAP_ROUTE_ANALYTIC : CCAP_ROUTE_MONTE_CARLO;
    c.M = r.M;
    c.K = r.K;
    c.n = r.n;
    c.alpha = r.alpha;
    c.gamma_db = r.gamma_db;
    c.has_value = r.ok() ? 1 : 0;
    c.value_bits = r.value_bits.value_or(0.0);
    c.value_nats = r.value_nats.value_or(0.0);
    c.has_stderr = r.stderr_nats ? 1 : 0;
    c.stderr_nats = r.stderr_nats.value_or(0.0);
    c.iterations = r.iterations;
    c.seed = r.seed;
    c.has_runtime = r.runtime_ms ? 1 : 0;
    c.runtime_ms = r.runtime_ms.value_or(0.0);
    *out = c;
  });
}

const char* ccap_rows_error(const ccap_rows* rows, size_t index) {
  if (!rows || index >= rows->rows.size()) return "";
  return rows->rows[index].error.c_str();
}

ccap_status ccap_rows_csv(const ccap_rows* rows, char** out) {
  return guarded([&] {
    require(rows, "rows");
    require(out, "out");
    *out = dup_string(format_csv(rows->rows));
  });
}

ccap_status ccap_rows_write_csv(const ccap_rows* rows, const char* path) {
  return guarded([&] {
    require(rows, "rows");
    require(path, "path");
    emit_csv(rows->rows, path);
  });
}

ccap_status ccap_rows_read_csv(const char* path, ccap_rows** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ccap_rows{read_csv(path)};
  });
}

void ccap_rows_free(ccap_rows* rows) { delete rows; }

ccap_status ccap_compare(const ccap_rows* rows, ccap_report** out) {
  return guarded([&] {
    require(rows, "rows");
    require(out, "out");
    *out = new ccap_report{compare_report(rows->rows)};
  });
}

int ccap_report_passed(const ccap_report* report) { return report && report->report.passed ? 1 : 0; }

const char* ccap_report_text(const ccap_report* report) { return report ? report->report.text.c_str() : ""; }

void ccap_report_free(ccap_report* report) { delete report; }

ccap_status ccap_write_text(const char* path, const char* text) {
  return guarded([&] {
    require(path, "path");
    require(text, "text");
    write_text_file(path, text);
  });
}

} // extern "C"
