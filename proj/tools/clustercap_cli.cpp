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


// Command-line front end. Talks to the library only through the C API.

#include <clustercap/clustercap.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

namespace {

int fail(const char* what, ccap_status st) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", what, ccap_last_error(), ccap_status_name(st));
  return 2;
}

std::string default_output(const std::string& name) {
  const char* dir = std::getenv("CLUSTERCAP_OUT_DIR");
  const std::string file = name + ".csv";
  if (dir && *dir) return (std::filesystem::path(dir) / file).string();
  return file;
}

struct RunArgs {
  std::string preset, out, config, gnuplot, scheme, route;
  std::string M, K, alpha, gamma_db, iters, seed, workers;
  bool timing = false;
};

// Settings given on the command line, applied after the config file.
std::vector<std::pair<std::string, std::string>> flag_settings(const RunArgs& a) {
  std::vector<std::pair<std::string, std::string>> kv;
  auto add = [&](const char* key, const std::string& v) {
    if (!v.empty()) kv.emplace_back(key, v);
  };
  add("scheme", a.scheme);
  add("route", a.route);
  add("M", a.M);
  add("K", a.K);
  add("alpha", a.alpha);
  add("gamma_db", a.gamma_db);
  add("iters", a.iters);
  add("seed", a.seed);
  add("workers", a.workers);
  if (a.timing) kv.emplace_back("timing", "1");
  return kv;
}

int cmd_run(const RunArgs& a) {
  ccap_experiment* exp = nullptr;
  ccap_status st = ccap_experiment_create(&exp);
  if (st != CCAP_OK) return fail("create experiment", st);
  struct Guard {
    ccap_experiment* e;
    ~Guard() { ccap_experiment_free(e); }
  } guard{exp};

  if (!a.config.empty() && (st = ccap_experiment_load_config(exp, a.config.c_str())) != CCAP_OK)
    return fail("config", st);
  if (!a.preset.empty() && (st = ccap_experiment_set(exp, "preset", a.preset.c_str())) != CCAP_OK)
    return fail("preset", st);
  for (const auto& [k, v] : flag_settings(a))
    if ((st = ccap_experiment_set(exp, k.c_str(), v.c_str())) != CCAP_OK) return fail(k.c_str(), st);

  const std::string name = a.preset.empty() ? "single" : a.preset;
  const std::string out = a.out.empty() ? default_output(name) : a.out;

  int dof = 0;
  ccap_experiment_is_dof_table(exp, &dof);
  if (dof) {
    char* csv = nullptr;
    if ((st = ccap_experiment_dof_csv(exp, &csv)) != CCAP_OK) return fail("dof table", st);
    st = ccap_write_text(out.c_str(), csv);
    ccap_string_free(csv);
    if (st != CCAP_OK) return fail("write", st);
  } else {
    ccap_rows* rows = nullptr;
    if ((st = ccap_experiment_run(exp, &rows)) != CCAP_OK) return fail("run", st);
    int errors = 0;
    for (size_t i = 0; i < ccap_rows_count(rows); ++i) {
      ccap_row r;
      ccap_rows_get(rows, i, &r);
      if (!r.has_value) {
        ++errors;
        std::fprintf(stderr, "row %zu (%s M=%d K=%d alpha=%g) failed: %s\n", i, ccap_scheme_name(r.scheme), r.M, r.K,
                     r.alpha, ccap_rows_error(rows, i));
      }
    }
    st = ccap_rows_write_csv(rows, out.c_str());
    ccap_rows_free(rows);
    if (st != CCAP_OK) return fail("write", st);
    if (errors) {
      std::fprintf(stderr, "%d error rows written to %s\n", errors, out.c_str());
      return 3;
    }
  }
  std::printf("wrote %s\n", out.c_str());

  if (!a.gnuplot.empty()) {
    char* script = nullptr;
    if ((st = ccap_experiment_gnuplot(exp, out.c_str(), &script)) != CCAP_OK) return fail("gnuplot", st);
    st = ccap_write_text(a.gnuplot.c_str(), script);
    ccap_string_free(script);
    if (st != CCAP_OK) return fail("write", st);
    std::printf("wrote %s\n", a.gnuplot.c_str());
  }
  return 0;
}

int cmd_compare(const std::string& in) {
  ccap_rows* rows = nullptr;
  ccap_status st = ccap_rows_read_csv(in.c_str(), &rows);
  if (st != CCAP_OK) return fail("read", st);
  ccap_report* rep = nullptr;
  st = ccap_compare(rows, &rep);
  ccap_rows_free(rows);
  if (st != CCAP_OK) return fail("compare", st);
  std::fputs(ccap_report_text(rep), stdout);
  const int passed = ccap_report_passed(rep);
  ccap_report_free(rep);
  return passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"clustercap: analytic and Monte Carlo uplink throughput of clustered joint decoding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ccap_version()));

  RunArgs ra;
  auto* run = app.add_subcommand("run", "evaluate a preset sweep or a single scenario and write CSV");
  run->add_option("--preset", ra.preset, "fig2 | fig3 | fig4 | fig5")
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5"}));
  run->add_option("--out", ra.out, "output CSV (default: $CLUSTERCAP_OUT_DIR/<preset>.csv)");
  run->add_option("--config", ra.config, "flat key = value file; command-line flags override it");
  run->add_option("--scheme", ra.scheme, "mjd | ia | rdma | ci | all, comma separated");
  run->add_option("--route", ra.route, "analytic | mc | both");
  run->add_option("--M", ra.M, "cells per cluster");
  run->add_option("--K", ra.K, "users per cell (n = K+1)");
  run->add_option("--alpha", ra.alpha, "intercell gain in [0,1]");
  run->add_option("--gamma-db", ra.gamma_db, "per-antenna SNR in dB");
  run->add_option("--iters", ra.iters, "Monte Carlo iterations");
  run->add_option("--seed", ra.seed, "master seed");
  run->add_option("--workers", ra.workers, "worker threads (0 = all cores)");
  run->add_option("--gnuplot", ra.gnuplot, "also write a gnuplot script for the CSV");
  run->add_flag("--timing", ra.timing, "fill runtime_ms (breaks byte-identical reruns)");

  std::string in;
  auto* cmp = app.add_subcommand("compare", "analytic vs Monte Carlo report; exit 0 iff all gates pass");
  cmp->add_option("--in", in, "CSV written by run")->required();

  CLI11_PARSE(app, argc, argv);
  if (run->parsed()) return cmd_run(ra);
  return cmd_compare(in);
}
