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


#include "bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace clustercap {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::string_view what) {
  s = strip(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorCode::Parse, "bad number for " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

template <class Int>
Int parse_int(std::string_view s, std::string_view what) {
  s = strip(s);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorCode::Parse, "bad integer for " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> int_range(int lo, int hi) {
  std::vector<double> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

double gamma_linear(double db) { return std::pow(10.0, db / 10.0); }

std::vector<Route> routes_of(RouteSelection r) {
  switch (r) {
  case RouteSelection::Analytic: return {Route::Analytic};
  case RouteSelection::MonteCarlo: return {Route::MonteCarlo};
  case RouteSelection::Both: return {Route::Analytic, Route::MonteCarlo};
  }
  return {};
}

} // namespace

// ---- specs --------------------------------------------------------------

std::size_t ExperimentSpec::point_count() const {
  return sweep == SweepVariable::None ? 1 : sweep_values.size();
}

SystemParams ExperimentSpec::point(std::size_t i) const {
  int m = M, k = K;
  double a = alpha;
  if (sweep != SweepVariable::None) {
    const double v = sweep_values.at(i);
    if (sweep == SweepVariable::M) m = static_cast<int>(std::lround(v));
    if (sweep == SweepVariable::K) k = static_cast<int>(std::lround(v));
    if (sweep == SweepVariable::Alpha) a = v;
  }
  return SystemParams::make(m, k, a, gamma_linear(gamma_db));
}

void ExperimentSpec::validate() const {
  if (sweep != SweepVariable::None && sweep_values.empty())
    throw Error(ErrorCode::InvalidParameter, "sweep has no values");
  if (!dof_table && schemes.empty()) throw Error(ErrorCode::InvalidParameter, "no schemes selected");
  if (iterations < 1) throw Error(ErrorCode::InvalidParameter, "iterations must be >= 1");
  for (std::size_t i = 0; i < point_count(); ++i) (void)point(i);
}

ExperimentSpec preset(std::string_view name) {
  ExperimentSpec s;
  s.name = std::string(name);
  if (name == "fig2") {
    s.sweep = SweepVariable::M;
    s.sweep_values = int_range(3, 10);
  } else if (name == "fig3") {
    s.sweep = SweepVariable::M;
    s.sweep_values = int_range(3, 10);
    s.dof_table = true;
  } else if (name == "fig4") {
    s.sweep = SweepVariable::Alpha;
    for (int i = 1; i <= 10; ++i) s.sweep_values.push_back(i / 10.0);
  } else if (name == "fig5") {
    s.sweep = SweepVariable::K;
    s.sweep_values = int_range(2, 10);
  } else {
    throw Error(ErrorCode::Parse, "unknown preset '" + std::string(name) + "' (fig2, fig3, fig4, fig5)");
  }
  return s;
}

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  key = strip(key);
  value = strip(value);
  if (key == "preset") {
    const auto keep = spec;
    spec = preset(value);
    spec.iterations = keep.iterations;
    spec.seed = keep.seed;
    spec.workers = keep.workers;
    spec.timing = keep.timing;
  } else if (key == "scheme" || key == "schemes") {
    spec.schemes.clear();
    if (value == "all") {
      spec.schemes.assign(kAllSchemes.begin(), kAllSchemes.end());
    } else {
      for (auto part : split(value, ',')) spec.schemes.push_back(parse_scheme(strip(part)));
    }
  } else if (key == "route") {
    if (value == "both") spec.routes = RouteSelection::Both;
    else if (parse_route(value) == Route::Analytic) spec.routes = RouteSelection::Analytic;
    else spec.routes = RouteSelection::MonteCarlo;
  } else if (key == "M") {
    spec.M = parse_int<int>(value, key);
    if (spec.sweep == SweepVariable::M) spec.sweep = SweepVariable::None;
  } else if (key == "K") {
    spec.K = parse_int<int>(value, key);
    if (spec.sweep == SweepVariable::K) spec.sweep = SweepVariable::None;
  } else if (key == "alpha") {
    spec.alpha = parse_double(value, key);
    if (spec.sweep == SweepVariable::Alpha) spec.sweep = SweepVariable::None;
  } else if (key == "gamma_db" || key == "gamma-db") {
    spec.gamma_db = parse_double(value, key);
  } else if (key == "iters" || key == "iterations") {
    spec.iterations = parse_int<std::size_t>(value, key);
  } else if (key == "seed") {
    spec.seed = parse_int<std::uint64_t>(value, key);
  } else if (key == "workers") {
    spec.workers = parse_int<unsigned>(value, key);
  } else if (key == "timing") {
    spec.timing = value == "1" || value == "true" || value == "on";
  } else {
    throw Error(ErrorCode::Parse, "unknown setting '" + std::string(key) + "'");
  }
}

void load_config(ExperimentSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v(line);
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = strip(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_setting(spec, v.substr(0, eq), v.substr(eq + 1));
  }
}

// ---- running ------------------------------------------------------------

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.dof_table) throw Error(ErrorCode::InvalidParameter, "dof presets produce a dof table, not throughput rows");
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < spec.point_count(); ++i) {
    const auto p = spec.point(i);
    for (auto scheme : spec.schemes) {
      for (auto route : routes_of(spec.routes)) {
        ResultRow row;
        row.scheme = scheme;
        row.route = route;
        row.M = p.M;
        row.K = p.K;
        row.n = p.n;
        row.alpha = p.alpha;
        row.gamma_db = spec.gamma_db;
        if (route == Route::MonteCarlo) {
          row.iterations = spec.iterations;
          row.seed = spec.seed;
        }
        const auto t0 = std::chrono::steady_clock::now();
        try {
          ThroughputResult r;
          if (route == Route::Analytic) {
            r = capacity(scheme, p);
          } else {
            MonteCarloConfig cfg;
            cfg.iterations = spec.iterations;
            cfg.master_seed = spec.seed;
            cfg.scheme = scheme;
            cfg.params = p;
            cfg.workers = spec.workers;
            r = simulate(cfg);
            row.stderr_nats = r.stderr_nats;
          }
          row.value_nats = r.value_nats;
          row.value_bits = r.value_bits();
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        if (spec.timing)
          row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

// ---- CSV ----------------------------------------------------------------

std::string format_csv(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no rows to write");
  std::ostringstream out;
  out << kCsvHeader << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << to_string(r.route) << ',' << r.M << ',' << r.K << ',' << r.n << ','
        << fmt(r.alpha) << ',' << fmt(r.gamma_db) << ',' << opt(r.value_bits) << ',' << opt(r.value_nats) << ','
        << opt(r.stderr_nats) << ',' << r.iterations << ',' << r.seed << ',' << opt(r.runtime_ms) << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  write_text_file(path, format_csv(rows));
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  auto lines = split(text, '\n');
  if (lines.empty() || strip(lines.front()) != kCsvHeader)
    throw Error(ErrorCode::Parse, "CSV header does not match the result row layout");
  auto opt = [](std::string_view f, std::string_view what) -> std::optional<double> {
    f = strip(f);
    if (f.empty()) return std::nullopt;
    return parse_double(f, what);
  };
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = strip(lines[i]);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13)
      throw Error(ErrorCode::Parse, "CSV line " + std::to_string(i + 1) + " has " + std::to_string(f.size()) + " fields");
    ResultRow r;
    r.scheme = parse_scheme(strip(f[0]));
    r.route = parse_route(strip(f[1]));
    r.M = parse_int<int>(f[2], "M");
    r.K = parse_int<int>(f[3], "K");
    r.n = parse_int<int>(f[4], "n");
    r.alpha = parse_double(f[5], "alpha");
    r.gamma_db = parse_double(f[6], "gamma_db");
    r.value_bits = opt(f[7], "value_bits");
    r.value_nats = opt(f[8], "value_nats");
    r.stderr_nats = opt(f[9], "stderr");
    r.iterations = parse_int<std::size_t>(f[10], "iterations");
    r.seed = parse_int<std::uint64_t>(f[11], "seed");
    r.runtime_ms = opt(f[12], "runtime_ms");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_csv(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

// ---- dof ----------------------------------------------------------------

std::vector<DofRow> emit_dof_table(const ExperimentSpec& spec) {
  std::vector<DofRow> rows;
  std::vector<double> ms = spec.sweep == SweepVariable::M ? spec.sweep_values : std::vector<double>{double(spec.M)};
  for (int k : spec.dof_users) {
    for (double mv : ms) {
      const auto p = SystemParams::make(static_cast<int>(std::lround(mv)), k, spec.alpha, gamma_linear(spec.gamma_db));
      for (auto s : kAllSchemes) rows.push_back({s, p.M, p.K, p.n, degrees_of_freedom_exact(s, p)});
    }
  }
  return rows;
}

std::string format_dof_csv(const std::vector<DofRow>& rows) {
  std::ostringstream out;
  out << "scheme,M,K,n,dof_exact,dof\n";
  for (const auto& r : rows)
    out << to_string(r.scheme) << ',' << r.M << ',' << r.K << ',' << r.n << ',' << r.dof.str() << ','
        << fmt(r.dof.value()) << '\n';
  return out.str();
}

// ---- comparison ---------------------------------------------------------

double tolerance_for(SchemeKind scheme) { return scheme == SchemeKind::IA ? 0.04 : 0.03; }

CompareReport compare_report(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no rows to compare");
  using Key = std::tuple<int, int, int, int, double, double>;
  std::map<Key, std::pair<const ResultRow*, const ResultRow*>> pairs;
  for (const auto& r : rows) {
    auto& slot = pairs[Key{static_cast<int>(r.scheme), r.M, r.K, r.n, r.alpha, r.gamma_db}];
    (r.route == Route::Analytic ? slot.first : slot.second) = &r;
  }
  CompareReport rep;
  std::ostringstream text;
  char line[256];
  std::snprintf(line, sizeof line, "%-5s %3s %3s %3s %6s %8s %12s %12s %9s %6s  %s\n", "scheme", "M", "K", "n",
                "alpha", "gamma_dB", "analytic", "montecarlo", "rel_err", "tol", "status");
  text << line;
  // rows are walked in input order so the report follows the CSV
  std::map<Key, bool> done;
  for (const auto& r : rows) {
    const Key key{static_cast<int>(r.scheme), r.M, r.K, r.n, r.alpha, r.gamma_db};
    if (done[key]) continue;
    done[key] = true;
    const auto [an, mc] = pairs[key];
    if (!an || !mc) {
      throw Error(ErrorCode::UnmatchedPair, std::string("missing ") + (an ? "montecarlo" : "analytic") +
                                                " row for " + std::string(to_string(r.scheme)) + " at M=" +
                                                std::to_string(r.M) + " K=" + std::to_string(r.K) +
                                                " alpha=" + fmt(r.alpha));
    }
    PairReport p{r.scheme, r.M, r.K, r.n, r.alpha, r.gamma_db, NAN, NAN, NAN, tolerance_for(r.scheme), false};
    if (an->ok() && mc->ok()) {
      p.analytic_nats = *an->value_nats;
      p.mc_nats = *mc->value_nats;
      p.relative_error = std::abs(p.mc_nats - p.analytic_nats) / std::abs(p.analytic_nats);
      p.passed = p.relative_error <= p.tolerance;
    }
    rep.passed = rep.passed && p.passed;
    std::snprintf(line, sizeof line, "%-5s %3d %3d %3d %6.3g %8.4g %12.6g %12.6g %8.3f%% %5.1f%%  %s\n",
                  std::string(to_string(p.scheme)).c_str(), p.M, p.K, p.n, p.alpha, p.gamma_db, p.analytic_nats,
                  p.mc_nats, 100.0 * p.relative_error, 100.0 * p.tolerance,
                  (an->ok() && mc->ok()) ? (p.passed ? "pass" : "FAIL") : "FAIL (error row)");
    text << line;
    rep.pairs.push_back(p);
  }
  // informational only: RDMA against CI, no gate
  for (const auto& p : rep.pairs) {
    if (p.scheme != SchemeKind::RDMA) continue;
    for (const auto& c : rep.pairs) {
      if (c.scheme == SchemeKind::CI && c.M == p.M && c.K == p.K && c.alpha == p.alpha && c.gamma_db == p.gamma_db) {
        std::snprintf(line, sizeof line, "note: M=%d K=%d alpha=%.3g rdma-ci analytic %+.4g nats (not gated)\n", p.M,
                      p.K, p.alpha, p.analytic_nats - c.analytic_nats);
        text << line;
      }
    }
  }
  text << (rep.passed ? "overall: pass\n" : "overall: FAIL\n");
  rep.text = text.str();
  return rep;
}

// ---- plotting -----------------------------------------------------------

std::string gnuplot_script(const ExperimentSpec& spec, const std::string& csv_path) {
  std::ostringstream g;
  g << "# gnuplot script for " << spec.name << "\n"
    << "set datafile separator ','\nset key outside right\nset grid\n";
  if (spec.dof_table) {
    g << "set xlabel 'cluster size M'\nset ylabel 'degrees of freedom per BS antenna'\nplot \\\n";
    bool first = true;
    for (auto s : kAllSchemes) {
      for (int k : spec.dof_users) {
        g << (first ? "  " : ", \\\n  ") << "'< grep \"^" << to_string(s) << ",[0-9]*," << k << ",\" " << csv_path
          << "' using 2:6 with linespoints title '" << to_string(s) << " K=" << k << "'";
        first = false;
      }
    }
    g << "\n";
    return g.str();
  }
  int col = 3;
  std::string xlabel = "cluster size M";
  if (spec.sweep == SweepVariable::K) {
    col = 4;
    xlabel = "users per cell K (n = K+1)";
  } else if (spec.sweep == SweepVariable::Alpha) {
    col = 6;
    xlabel = "intercell gain alpha";
  }
  g << "set xlabel '" << xlabel << "'\nset ylabel 'per-cell throughput [bits/s/Hz]'\nplot \\\n";
  bool first = true;
  for (auto s : spec.schemes) {
    for (auto r : routes_of(spec.routes)) {
      g << (first ? "  " : ", \\\n  ") << "'< grep \"^" << to_string(s) << ',' << to_string(r) << ",\" " << csv_path
        << "' using " << col << ":8 with " << (r == Route::Analytic ? "lines" : "points") << " title '"
        << to_string(s) << ' ' << to_string(r) << "'";
      first = false;
    }
  }
  g << "\n";
  return g.str();
}

} // namespace clustercap
