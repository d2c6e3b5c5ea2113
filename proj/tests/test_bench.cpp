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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bench.hpp"

#include <filesystem>
#include <fstream>

using namespace clustercap;

namespace {

bool throws_code(auto&& fn, ErrorCode code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

ResultRow row(SchemeKind s, Route r, double nats, int M = 4) {
  ResultRow x;
  x.scheme = s;
  x.route = r;
  x.M = M;
  x.K = 5;
  x.n = 6;
  x.alpha = 0.5;
  x.gamma_db = 20;
  x.value_nats = nats;
  x.value_bits = nats / std::log(2.0);
  if (r == Route::MonteCarlo) {
    x.stderr_nats = 0.01;
    x.iterations = 1000;
    x.seed = 1;
  }
  return x;
}

std::filesystem::path scratch(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("presets") {
  const auto f2 = preset("fig2");
  CHECK(f2.sweep == SweepVariable::M);
  CHECK(f2.point_count() == 8);
  CHECK(f2.point(0).M == 3);
  CHECK(f2.point(7).M == 10);
  CHECK(f2.point(0).gamma == doctest::Approx(100.0));
  CHECK(f2.point_count() * f2.schemes.size() * 2 == 64);

  const auto f4 = preset("fig4");
  REQUIRE(f4.point_count() == 10);
  CHECK(f4.point(0).alpha == doctest::Approx(0.1));
  CHECK(f4.point(9).alpha == 1.0);

  const auto f5 = preset("fig5");
  REQUIRE(f5.point_count() == 9);
  CHECK(f5.point(0).K == 2);
  CHECK(f5.point(8).n == 11);

  CHECK(preset("fig3").dof_table);
  CHECK(throws_code([] { preset("fig9"); }, ErrorCode::Parse));
}

TEST_CASE("settings and config files") {
  auto s = preset("fig2");
  apply_setting(s, "scheme", "ia, rdma");
  CHECK(s.schemes == std::vector<SchemeKind>{SchemeKind::IA, SchemeKind::RDMA});
  apply_setting(s, "route", "mc");
  CHECK(s.routes == RouteSelection::MonteCarlo);
  apply_setting(s, "M", "5");
  CHECK(s.sweep == SweepVariable::None);
  CHECK(s.point_count() == 1);
  CHECK(throws_code([&] { apply_setting(s, "iters", "ten"); }, ErrorCode::Parse));
  CHECK(throws_code([&] { apply_setting(s, "colour", "red"); }, ErrorCode::Parse));
  CHECK(throws_code([&] { apply_setting(s, "scheme", "tdma"); }, ErrorCode::Parse));

  const auto path = scratch("clustercap_test.cfg");
  {
    std::ofstream out(path);
    out << "# sweep over users\npreset = fig5\niters = 77  # short\nseed=12\nscheme = all\n\n";
  }
  ExperimentSpec c;
  load_config(c, path.string());
  CHECK(c.sweep == SweepVariable::K);
  CHECK(c.iterations == 77);
  CHECK(c.seed == 12);
  CHECK(c.schemes.size() == 4);
  {
    std::ofstream out(path);
    out << "iters 10\n";
  }
  CHECK(throws_code([&] { load_config(c, path.string()); }, ErrorCode::Parse));
  std::filesystem::remove(path);
  CHECK(throws_code([&] { load_config(c, path.string()); }, ErrorCode::Io));
}

TEST_CASE("running a sweep yields one row per scheme, route and point") {
  auto s = preset("fig2");
  apply_setting(s, "scheme", "mjd,ci");
  apply_setting(s, "iters", "8");
  const auto rows = run_experiment(s);
  REQUIRE(rows.size() == 8 * 2 * 2);
  for (const auto& r : rows) {
    CHECK(r.ok());
    CHECK(r.error.empty());
    CHECK(!r.runtime_ms);
    if (r.route == Route::Analytic) {
      CHECK(r.iterations == 0);
      CHECK(r.seed == 0);
      CHECK(!r.stderr_nats);
    } else {
      CHECK(r.iterations == 8);
      CHECK(r.seed == 1);
      CHECK(r.stderr_nats);
    }
  }
  CHECK(format_csv(rows) == format_csv(run_experiment(s)));
  CHECK(throws_code([] { run_experiment(preset("fig3")); }, ErrorCode::InvalidParameter));
}

TEST_CASE("CSV round trip") {
  std::vector<ResultRow> rows{row(SchemeKind::IA, Route::Analytic, 44.688912345678),
                              row(SchemeKind::IA, Route::MonteCarlo, 45.87)};
  ResultRow failed = row(SchemeKind::CI, Route::Analytic, 0.0);
  failed.value_nats.reset();
  failed.value_bits.reset();
  failed.error = "boom";
  rows.push_back(failed);

  const auto text = format_csv(rows);
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(text.find("ci,analytic,4,5,6,0.5,20,,,,0,0,\n") != std::string::npos);
  const auto back = parse_csv(text);
  REQUIRE(back.size() == 3);
  CHECK(*back[0].value_nats == doctest::Approx(44.688912345678).epsilon(1e-12));
  CHECK(back[1].stderr_nats.value() == 0.01);
  CHECK(!back[2].ok());
  CHECK(format_csv(back) == text);

  const auto path = scratch("clustercap_rows.csv");
  emit_csv(rows, path.string());
  CHECK(format_csv(read_csv(path.string())) == text);
  std::filesystem::remove(path);

  CHECK(throws_code([] { format_csv({}); }, ErrorCode::EmptyInput));
  CHECK(throws_code([] { parse_csv("scheme,route\n"); }, ErrorCode::Parse));
  CHECK(throws_code([&] { parse_csv(std::string(kCsvHeader) + "\nia,analytic,4\n"); }, ErrorCode::Parse));
  CHECK(throws_code([] { read_csv("/nonexistent/rows.csv"); }, ErrorCode::Io));
}

TEST_CASE("comparison gate") {
  std::vector<ResultRow> same{row(SchemeKind::GlobalMJD, Route::Analytic, 48.73),
                              row(SchemeKind::GlobalMJD, Route::MonteCarlo, 48.73),
                              row(SchemeKind::RDMA, Route::Analytic, 43.2),
                              row(SchemeKind::RDMA, Route::MonteCarlo, 43.3),
                              row(SchemeKind::CI, Route::Analytic, 38.9),
                              row(SchemeKind::CI, Route::MonteCarlo, 39.0)};
  const auto ok = compare_report(same);
  CHECK(ok.passed);
  CHECK(ok.pairs.size() == 3);
  CHECK(ok.pairs[0].relative_error == 0.0);
  CHECK(ok.text.find("overall: pass") != std::string::npos);
  CHECK(ok.text.find("not gated") != std::string::npos);

  auto bad = same;
  bad[1].value_nats = 48.73 * 1.05;
  const auto rep = compare_report(bad);
  CHECK(!rep.passed);
  CHECK(rep.text.find("overall: FAIL") != std::string::npos);

  // IA has the wider gate
  std::vector<ResultRow> ia{row(SchemeKind::IA, Route::Analytic, 100.0), row(SchemeKind::IA, Route::MonteCarlo, 103.5)};
  CHECK(compare_report(ia).passed);
  ia[1].value_nats = 104.5;
  CHECK(!compare_report(ia).passed);

  auto errored = same;
  errored[0].value_nats.reset();
  CHECK(!compare_report(errored).passed);

  CHECK(throws_code([&] { compare_report({same[0]}); }, ErrorCode::UnmatchedPair));
  CHECK(throws_code([] { compare_report({}); }, ErrorCode::EmptyInput));
}

TEST_CASE("dof table") {
  const auto rows = emit_dof_table(preset("fig3"));
  CHECK(rows.size() == 4 * 8 * 4);
  const auto csv = format_dof_csv(rows);
  CHECK(csv.rfind("scheme,M,K,n,dof_exact,dof\n", 0) == 0);
  CHECK(csv.find("ci,3,1,2,2/3,0.666666666667\n") != std::string::npos);
  CHECK(csv.find("mjd,10,10,11,1,1\n") != std::string::npos);
}

TEST_CASE("gnuplot script references the CSV") {
  const auto g = gnuplot_script(preset("fig2"), "out/fig2.csv");
  CHECK(g.find("out/fig2.csv") != std::string::npos);
  CHECK(g.find("plot") != std::string::npos);
}
