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

#include "polynomial.hpp"

#include <algorithm>

using namespace clustercap::poly;

namespace {

double max_match_error(std::vector<cd> got, std::vector<cd> want) {
  REQUIRE(got.size() == want.size());
  double worst = 0.0;
  for (const cd& w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](cd a, cd b) { return std::abs(a - w) < std::abs(b - w); });
    worst = std::max(worst, std::abs(*it - w));
    got.erase(it);
  }
  return worst;
}

Poly from_roots(const std::vector<cd>& r) {
  Poly p{1.0};
  for (const cd& z : r) p = mul(p, Poly{-z, 1.0});
  return p;
}

} // namespace

TEST_CASE("arithmetic helpers") {
  const Poly a{1.0, 2.0};
  const Poly b{0.0, 0.0, 3.0};
  CHECK(add(a, b) == Poly{1.0, 2.0, 3.0});
  CHECK(mul(a, a) == Poly{1.0, 4.0, 4.0});
  CHECK(scale(a, cd(0, 1)) == Poly{cd(0, 1), cd(0, 2)});
  CHECK(evaluate(Poly{1.0, 2.0, 3.0}, 2.0) == cd(17.0));
  Poly t{1.0, 0.0, 0.0};
  trim(t);
  CHECK(t.size() == 1);
}

TEST_CASE("companion roots recover a known root set") {
  const std::vector<cd> want{{1, 0}, {-2, 0.5}, {0.3, -4}, {1e-3, 0}, {7, 7}};
  CHECK(max_match_error(roots(from_roots(want)), want) < 1e-9);
}

TEST_CASE("zero roots are deflated and counted") {
  const std::vector<cd> rest{{2, 1}, {-1, 0}};
  Poly p = from_roots(rest);
  p.insert(p.begin(), 3, cd{});
  int zeros = -1;
  const auto r = roots(p, &zeros);
  CHECK(zeros == 3);
  CHECK(max_match_error(r, rest) < 1e-12);
}

TEST_CASE("Aberth refinement converges from a perturbed root set") {
  const std::vector<cd> want{{1, 1}, {-3, 0}, {0.5, -2}, {4, 0.1}};
  std::vector<cd> guess;
  for (const cd& z : want) guess.push_back(z * cd(1.01, 0.01));
  const auto r = refine_roots(from_roots(want), guess);
  CHECK(max_match_error(r, want) < 1e-10);

  Poly with_zero = from_roots(want);
  with_zero.insert(with_zero.begin(), cd{});
  CHECK(max_match_error(refine_roots(with_zero, guess), want) < 1e-10);
}

TEST_CASE("radical norm eliminates square roots") {
  // (a + r)(a - r) = a^2 - D with r^2 = D
  const std::vector<Poly> rad{Poly{2.0, 0.0, 1.0}};
  RadicalPoly x(&rad);
  x.add_component(0, Poly{1.0, 1.0});
  x.add_component(1, Poly{1.0});
  const Poly n = x.norm();
  const Poly want = add(mul(Poly{1.0, 1.0}, Poly{1.0, 1.0}), scale(rad[0], -1.0));
  REQUIRE(n.size() == want.size());
  for (std::size_t i = 0; i < n.size(); ++i) CHECK(std::abs(n[i] - want[i]) < 1e-14);

  // two radicals: the norm vanishes where any sign choice of the sum vanishes
  const std::vector<Poly> two{Poly{4.0}, Poly{9.0}};
  RadicalPoly y(&two);
  y.add_component(0, Poly{-1.0, 0.0});
  y.add_component(1, Poly{1.0});
  y.add_component(2, Poly{0.0, -1.0});
  // -1 + 2 - 3s vanishes at s = 1/3
  const Poly m = y.norm();
  CHECK(std::abs(evaluate(m, 1.0 / 3.0)) < 1e-12);
  CHECK(x.conjugate(0).components().at(1) == Poly{-1.0});
}
