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

#include "analytic.hpp"
#include "monte_carlo.hpp"

#include <cmath>

using namespace clustercap;

namespace {

const SystemParams kTable = SystemParams::make(4, 5, 0.5, 100.0);

// 30 * V(750, 5) with V integrated by 50-digit quadrature of the density
constexpr double kMjdTableOracle = 48.734511528799936;

double mc_value(SchemeKind s, const SystemParams& p, std::size_t iters) {
  MonteCarloConfig cfg;
  cfg.scheme = s;
  cfg.params = p;
  cfg.iterations = iters;
  cfg.master_seed = 1;
  return simulate(cfg).value_nats;
}

} // namespace

TEST_CASE("MJD closed form") {
  CHECK(capacity_mjd(kTable).value_nats == doctest::Approx(kMjdTableOracle).epsilon(1e-12));
  CHECK(capacity_mjd(kTable).value_bits() == doctest::Approx(kMjdTableOracle / std::log(2.0)));
  CHECK(capacity_mjd(SystemParams::make(4, 5, 0.5, 1e-12)).value_nats < 1e-9);
  CHECK(capacity_mjd(SystemParams::make(4, 5, 1.0, 100.0)).value_nats >
        capacity_mjd(SystemParams::make(4, 5, 0.0, 100.0)).value_nats);
  // the global limit does not see the cluster size
  CHECK(capacity_mjd(SystemParams::make(3, 5, 0.5, 100.0)).value_nats ==
        capacity_mjd(SystemParams::make(9, 5, 0.5, 100.0)).value_nats);
}

TEST_CASE("CI reduces to MJD without intercell gain") {
  for (int M : {3, 4, 7}) {
    const auto p = SystemParams::make(M, 3, 0.0, 100.0);
    CHECK(capacity_ci(p).value_nats == capacity_mjd(p).value_nats);
  }
  CHECK(capacity_ci(kTable).value_nats < capacity_mjd(kTable).value_nats);
}

TEST_CASE("analytic results carry their metadata") {
  const auto r = capacity(SchemeKind::IA, kTable);
  CHECK(r.scheme == SchemeKind::IA);
  CHECK(r.route == Route::Analytic);
  CHECK(r.iterations == 0);
  CHECK(!r.grid.empty());
  CHECK(std::isfinite(r.value_nats));
}

TEST_CASE("scheme ordering at the reference scenario") {
  const double mjd = capacity_mjd(kTable).value_nats;
  const double ia = capacity_ia(kTable).value_nats;
  const double rdma = capacity_rdma(kTable).value_nats;
  const double ci = capacity_ci(kTable).value_nats;
  CHECK(ci <= ia);
  CHECK(ia <= mjd);
  CHECK(ci <= rdma);
  CHECK(rdma <= mjd);
}

TEST_CASE("RDMA grows with the intercell gain") {
  double prev = -1.0;
  for (double a : {0.0, 0.3, 0.6, 1.0}) {
    const double v = capacity_rdma(SystemParams::make(4, 2, a, 100.0)).value_nats;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("arbitration: adopted MJD form is closest to simulation") {
  const double mc = mc_value(SchemeKind::GlobalMJD, kTable, 1000);
  const double adopted = std::abs(mjd_candidate(MjdForm::Global, kTable) - mc);
  const double finite = std::abs(mjd_candidate(MjdForm::FiniteClusterRatio, kTable) - mc);
  const double plain = std::abs(mjd_candidate(MjdForm::PlainRatio, kTable) - mc);
  MESSAGE("MJD gaps to simulation: global " << adopted << ", finite ratio " << finite << ", plain ratio "
                                            << plain);
  CHECK(adopted < finite);
  CHECK(adopted < plain);
  CHECK(adopted < 0.01 * mc);
}

TEST_CASE("arbitration: profile-consistent RDMA is closest to simulation") {
  const double mc = mc_value(SchemeKind::RDMA, kTable, 1000);
  const double consistent = std::abs(rdma_candidate(RdmaForm::ProfileConsistent, kTable) - mc);
  const double raw = std::abs(rdma_candidate(RdmaForm::Unnormalized, kTable) - mc);
  MESSAGE("RDMA gaps to simulation: consistent " << consistent << ", unnormalized " << raw);
  CHECK(consistent < raw);
  CHECK(consistent < 0.01 * mc);
}

TEST_CASE("rationals") {
  CHECK(Rational(6, 8) == Rational(3, 4));
  CHECK(Rational(3, 4).str() == "3/4");
  CHECK(Rational(4, 4).str() == "1");
  CHECK(Rational(1) - Rational(1, 3) == Rational(2, 3));
  CHECK(Rational(2, 3) < Rational(3, 4));
  CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("degrees of freedom") {
  CHECK(degrees_of_freedom_exact(SchemeKind::GlobalMJD, kTable) == Rational(1));
  CHECK(degrees_of_freedom_exact(SchemeKind::IA, kTable) == Rational(23, 24));
  CHECK(degrees_of_freedom_exact(SchemeKind::RDMA, kTable) == Rational(7, 8));
  CHECK(degrees_of_freedom_exact(SchemeKind::CI, kTable) == Rational(3, 4));
  CHECK(degrees_of_freedom_exact(SchemeKind::CI, SystemParams::make(3, 5, 0.5, 100.0)) == Rational(2, 3));

  for (int M = 3; M <= 10; ++M) {
    for (int K = 1; K <= 10; ++K) {
      const auto p = SystemParams::make(M, K, 0.5, 100.0);
      const auto mjd = degrees_of_freedom_exact(SchemeKind::GlobalMJD, p);
      const auto ia = degrees_of_freedom_exact(SchemeKind::IA, p);
      const auto rdma = degrees_of_freedom_exact(SchemeKind::RDMA, p);
      const auto ci = degrees_of_freedom_exact(SchemeKind::CI, p);
      CAPTURE(M);
      CAPTURE(K);
      CHECK(mjd >= ia);
      CHECK(ia >= rdma);
      CHECK(rdma > ci);
      if (K == 1) CHECK(ia == rdma);
      else CHECK(ia > rdma);
      if (M < 10) CHECK(ci < degrees_of_freedom_exact(SchemeKind::CI, SystemParams::make(M + 1, K, 0.5, 100.0)));
    }
  }
  CHECK(degrees_of_freedom(SchemeKind::IA, SystemParams::make(3, 1000, 0.5, 100.0)) > 0.999);
}
