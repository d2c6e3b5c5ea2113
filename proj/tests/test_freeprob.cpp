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
#include "channel_model.hpp"
#include "freeprob.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace clustercap;

namespace {

// Shannon transform of the Marchenko-Pastur law, integrated independently
// with 50-digit adaptive quadrature of the density (tanh-sinh). Columns are
// g, beta, value in nats.
constexpr std::array<std::array<double, 3>, 9> kShannonOracle{{
    {1, 0.5, 0.63353518848030345},
    {1, 1, 0.58045763886910174},
    {1, 5, 0.34408375290452952},
    {10, 0.5, 2.1663116371329804},
    {10, 1, 1.887666061469536},
    {10, 5, 0.76584320994323927},
    {100, 0.5, 4.3179325402503968},
    {100, 1, 3.8002534880992926},
    {100, 5, 1.2219356814326983},
}};

double mp_pdf(double x, double beta) {
  const double sb = std::sqrt(beta);
  const double a = (1 - sb) * (1 - sb), b = (1 + sb) * (1 + sb);
  if (x <= a || x >= b) return 0.0;
  return std::sqrt((b - x) * (x - a)) / (2.0 * std::numbers::pi * beta * x);
}

bool throws_code(auto&& fn, ErrorCode code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

RTransformSum table_ia() { return ia_terms(SystemParams::make(4, 5, 0.5, 100.0)); }

} // namespace

TEST_CASE("closed-form Shannon transform matches the quadrature oracle") {
  for (const auto& [g, beta, v] : kShannonOracle)
    CHECK(std::abs(mp_shannon_transform(g, beta) - v) <= 1e-10 * v);
  CHECK(mp_shannon_transform(0.0, 2.0) == 0.0);
  CHECK(throws_code([] { mp_shannon_transform(-1.0, 1.0); }, ErrorCode::InvalidParameter));
}

TEST_CASE("R-transform terms") {
  const auto plain = RTransformTerm::plain(2.0, 0.7);
  CHECK(std::abs(eval_r_transform(plain, 0.0) - cd(0.7)) < 1e-15);
  const auto zp = RTransformTerm::zero_padded(0.3, 2.0, 0.7);
  CHECK(std::abs(eval_r_transform(zp, 0.0) - cd(0.21)) < 1e-14);

  // k = 1 must collapse onto the unpadded term
  const auto full = RTransformTerm::zero_padded(1.0, 2.0, 0.7);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cd z(-3.0 + 0.06 * i, 0.05 + 0.01 * (i % 7));
    worst = std::max(worst, std::abs(eval_r_transform(full, z) - eval_r_transform(plain, z)));
  }
  CHECK(worst < 1e-10);

  // R of a sum is the sum of R
  RTransformSum sum{{plain, zp}};
  const cd z(-0.4, 0.2);
  CHECK(std::abs(eval_r_transform(sum, z) - eval_r_transform(plain, z) - eval_r_transform(zp, z)) < 1e-14);

  CHECK(throws_code([&] { eval_r_transform(plain, cd(1.0 / 1.4)); }, ErrorCode::PoleEncountered));
  CHECK(throws_code([] { RTransformTerm::zero_padded(0.0, 1.0, 1.0).validate(); }, ErrorCode::InvalidParameter));
  CHECK(throws_code([] { RTransformTerm::plain(1.0, -1.0).validate(); }, ErrorCode::InvalidParameter));
}

TEST_CASE("Stieltjes inversion reproduces the Marchenko-Pastur density") {
  for (double beta : {0.5, 1.0, 2.0, 5.0}) {
    const RTransformSum mp{{RTransformTerm::plain(beta, 1.0)}};
    const double sb = std::sqrt(beta);
    const double a = (1 - sb) * (1 - sb), b = (1 + sb) * (1 + sb);
    double worst = 0.0;
    for (int i = 1; i < 100; ++i) {
      const double x = a + (b - a) * (0.02 + 0.96 * i / 100.0);
      const double f = stieltjes_from_r(mp, x, 1e-9).imag() / std::numbers::pi;
      worst = std::max(worst, std::abs(f - mp_pdf(x, beta)));
    }
    CAPTURE(beta);
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("no physical root beyond the support") {
  // outside the support Im S is O(y); at a tiny height no root clears 1e-14
  const RTransformSum mp{{RTransformTerm::plain(1.0, 1.0)}};
  CHECK(throws_code([&] { stieltjes_from_r(mp, 6.0, 1e-15); }, ErrorCode::NoPhysicalRoot));
  const auto ia = table_ia();
  CHECK(throws_code([&] { stieltjes_from_r(ia, 2.0 * free_sum_support_bound(ia), 1e-15); },
                    ErrorCode::NoPhysicalRoot));
  CHECK(throws_code([&] { stieltjes_from_r(mp, 1.0, 0.0); }, ErrorCode::InvalidParameter));

  // and the sampled density is exactly zero there
  GridSpec wide;
  wide.x_max = 8.0;
  wide.points = 801;
  const auto d = density_from_sum(mp, wide);
  for (std::size_t i = 0; i < d.grid.size(); ++i)
    if (d.grid[i] > 4.01) CHECK(d.values[i] == 0.0);
}

TEST_CASE("root tracking does not depend on sweep direction") {
  const auto ia = table_ia();
  const double edge = free_sum_support_bound(ia);
  constexpr int N = 300;
  std::vector<double> xs;
  for (int i = 1; i <= N; ++i) xs.push_back(edge * i / (N + 1.0));
  std::vector<cd> fwd(N), bwd(N);
  std::optional<cd> seed;
  for (int i = 0; i < N; ++i) {
    try {
      fwd[i] = stieltjes_from_r(ia, xs[i], 1e-6, seed);
      seed = fwd[i];
    } catch (const Error&) {
      fwd[i] = cd(NAN, NAN);
      seed.reset();
    }
  }
  seed.reset();
  for (int i = N - 1; i >= 0; --i) {
    try {
      bwd[i] = stieltjes_from_r(ia, xs[i], 1e-6, seed);
      seed = bwd[i];
    } catch (const Error&) {
      bwd[i] = cd(NAN, NAN);
      seed.reset();
    }
  }
  int compared = 0;
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    if (std::isnan(fwd[i].real()) || std::isnan(bwd[i].real())) {
      CHECK(std::isnan(fwd[i].real()) == std::isnan(bwd[i].real()));
      continue;
    }
    ++compared;
    worst = std::max(worst, std::abs(fwd[i].imag() - bwd[i].imag()) / std::numbers::pi);
  }
  CHECK(compared > N / 2);
  CHECK(worst < 1e-9);
}

TEST_CASE("densities carry the right mass") {
  for (double beta : {0.5, 1.0, 2.0, 5.0}) {
    const auto d = density_from_sum({{RTransformTerm::plain(beta, 1.0)}});
    CAPTURE(beta);
    CHECK(d.zero_mass == doctest::Approx(std::max(0.0, 1.0 - 1.0 / beta)).epsilon(1e-12));
    CHECK(d.continuous_mass == doctest::Approx(std::min(1.0, 1.0 / beta)).epsilon(1e-3));
    for (double v : d.values) CHECK(v >= 0.0);
    CHECK(d.continuous_cdf(0.0) == 0.0);
    CHECK(d.continuous_cdf(d.grid.back() + 1.0) == doctest::Approx(1.0));
  }

  const auto ia = table_ia();
  CHECK(free_sum_zero_atom(ia) == doctest::Approx(1.0 - 23.0 / 95.0).epsilon(1e-12));
  const auto d = density_from_sum(ia);
  CHECK(d.zero_mass + d.continuous_mass == doctest::Approx(1.0).epsilon(1e-3));
  bool nonneg = true;
  for (double v : d.values) nonneg = nonneg && v >= 0.0;
  CHECK(nonneg);
}

TEST_CASE("Shannon integral of a density") {
  for (const auto& [g, beta, v] : kShannonOracle) {
    const auto d = density_from_sum({{RTransformTerm::plain(beta, 1.0)}});
    CAPTURE(g);
    CAPTURE(beta);
    CHECK(std::abs(shannon_integral(d, g) - v) < 1e-4 * v);
    CHECK(shannon_integral(d, 0.0) == 0.0);
  }
}

TEST_CASE("doubling the grid leaves the IA integral unchanged") {
  const auto ia = table_ia();
  GridSpec coarse;
  GridSpec fine;
  fine.points = 2 * coarse.points;
  const double g = 600.0;
  const double a = shannon_integral(density_from_sum(ia, coarse), g);
  const double b = shannon_integral(density_from_sum(ia, fine), g);
  CHECK(std::abs(a - b) < 1e-5 * std::abs(b));
}

TEST_CASE("IA law has the first moment of the sampled profile") {
  const auto p = SystemParams::make(4, 23, 0.5, 100.0);
  const auto terms = ia_terms(p);
  double limit_mean = 0.0;
  for (const auto& t : terms.terms) limit_mean += t.k * t.q;

  const auto prof = build_profile_ia(p);
  auto rng = RandomStream::derive(77, 0, 0);
  const auto h = sample_channel(prof, rng).matrix;
  const double sampled = h.squaredNorm() / (p.n * static_cast<double>(h.cols()));
  CHECK(std::abs(sampled - limit_mean) < 0.02 * limit_mean);
}

TEST_CASE("numerical quadrature helpers") {
  std::vector<double> f;
  for (int i = 0; i <= 100; ++i) f.push_back(std::pow(i * 0.01, 3));
  CHECK(simpson(f, 0.01) == doctest::Approx(0.25).epsilon(1e-12));
  f.push_back(std::pow(1.01, 3));
  CHECK(simpson(f, 0.01) == doctest::Approx(std::pow(1.01, 4) / 4).epsilon(1e-4));

  // x^{-1/2} on (0, 1]: the first panel is handled by a power-law fit
  std::vector<double> g{0.0};
  for (int i = 1; i <= 1000; ++i) g.push_back(1.0 / std::sqrt(i * 1e-3));
  CHECK(integrate_from_origin(g, 1e-3) == doctest::Approx(2.0).epsilon(1e-4));
}
