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


#pragma once

#include "analytic.hpp"
#include "monte_carlo.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clustercap {

enum class SweepVariable { None, M, Alpha, K };
enum class RouteSelection { Analytic, MonteCarlo, Both };

struct ExperimentSpec {
  std::string name = "single";
  SweepVariable sweep = SweepVariable::None;
  std::vector<double> sweep_values;
  int M = 4;
  int K = 5;
  double alpha = 0.5;
  double gamma_db = 20.0;
  std::vector<SchemeKind> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  RouteSelection routes = RouteSelection::Both;
  std::size_t iterations = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  /// Tabulate degrees of freedom instead of throughputs.
  bool dof_table = false;
  /// Fill runtime_ms; off by default so reruns are byte-identical.
  bool timing = false;
  std::vector<int> dof_users{1, 2, 5, 10};

  void validate() const;
  /// Parameter tuple of sweep point i.
  SystemParams point(std::size_t i) const;
  std::size_t point_count() const;
};

/// Built-in presets: fig2 (cluster size), fig3 (dof), fig4 (alpha), fig5 (users).
ExperimentSpec preset(std::string_view name);

/// Sets one field from text. Keys: preset, scheme, route, M, K, alpha,
/// gamma_db, iters, seed, workers, timing. Throws Parse on bad input.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// Flat "key = value" file, '#' starts a comment.
void load_config(ExperimentSpec& spec, const std::string& path);

struct ResultRow {
  SchemeKind scheme = SchemeKind::GlobalMJD;
  Route route = Route::Analytic;
  int M = 0, K = 0, n = 0;
  double alpha = 0.0;
  double gamma_db = 0.0;
  std::optional<double> value_bits;
  std::optional<double> value_nats;
  std::optional<double> stderr_nats;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::optional<double> runtime_ms;
  /// Failure text for error rows; not serialized.
  std::string error;

  bool ok() const { return value_nats.has_value(); }
};

inline constexpr std::string_view kCsvHeader =
    "scheme,route,M,K,n,alpha,gamma_db,value_bits,value_nats,stderr,iterations,seed,runtime_ms";

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

std::string format_csv(const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> parse_csv(std::string_view text);
std::vector<ResultRow> read_csv(const std::string& path);

struct DofRow {
  SchemeKind scheme;
  int M, K, n;
  Rational dof;
};

std::vector<DofRow> emit_dof_table(const ExperimentSpec& spec);
std::string format_dof_csv(const std::vector<DofRow>& rows);

struct PairReport {
  SchemeKind scheme;
  int M, K, n;
  double alpha, gamma_db;
  double analytic_nats, mc_nats;
  double relative_error;
  double tolerance;
  bool passed;
};

struct CompareReport {
  std::vector<PairReport> pairs;
  bool passed = true;
  std::string text;
};

double tolerance_for(SchemeKind scheme);
/// Pairs analytic and Monte Carlo rows by scheme and parameters. Throws
/// UnmatchedPair if one route is missing and EmptyInput on no rows.
CompareReport compare_report(const std::vector<ResultRow>& rows);

/// gnuplot script plotting value_bits (or dof) from the given CSV.
std::string gnuplot_script(const ExperimentSpec& spec, const std::string& csv_path);

void write_text_file(const std::string& path, std::string_view text);

} // namespace clustercap
