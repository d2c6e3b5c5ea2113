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


#include "polynomial.hpp"

#include "types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace clustercap::poly {

Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), cd{});
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, cd{});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] += a[i] * b[j];
  return r;
}

Poly scale(const Poly& a, cd c) {
  Poly r(a);
  for (auto& x : r) x *= c;
  return r;
}

cd evaluate(const Poly& p, cd x) {
  cd acc{};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

void trim(Poly& p) {
  while (!p.empty() && p.back() == cd{}) p.pop_back();
}

void RadicalPoly::add_component(std::uint32_t mask, const Poly& p) {
  auto& slot = comps_[mask];
  slot = add(slot, p);
}

RadicalPoly RadicalPoly::operator*(const RadicalPoly& o) const {
  RadicalPoly r(radicands_);
  for (const auto& [ma, pa] : comps_) {
    for (const auto& [mb, pb] : o.comps_) {
      Poly p = mul(pa, pb);
      // r_i * r_i collapses to D_i
      const std::uint32_t both = ma & mb;
      for (std::size_t i = 0; i < radicands_->size(); ++i)
        if (both & (1u << i)) p = mul(p, (*radicands_)[i]);
      r.add_component(ma ^ mb, p);
    }
  }
  return r;
}

RadicalPoly RadicalPoly::conjugate(std::size_t i) const {
  RadicalPoly r(*this);
  for (auto& [mask, p] : r.comps_)
    if (mask & (1u << i)) p = scale(p, -1.0);
  return r;
}

Poly RadicalPoly::norm() const {
  RadicalPoly x(*this);
  for (std::size_t i = 0; i < radicands_->size(); ++i) x = x * x.conjugate(i);
  auto it = x.comps_.find(0);
  return it == x.comps_.end() ? Poly{} : it->second;
}

namespace {

// Diagonal similarity scaling (radix 2) to equalize row and column norms.
void balance(Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / 2.0) { c *= 2.0; r /= 2.0; f *= 2.0; }
      while (c >= r * 2.0) { c /= 2.0; r *= 2.0; f /= 2.0; }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

} // namespace

std::vector<cd> roots(Poly p, int* zero_multiplicity) {
  trim(p);
  if (p.empty())
    throw Error(ErrorCode::InvalidParameter, "cannot take roots of the zero polynomial");
  int zeros = 0;
  while (p.size() > 1 && p.front() == cd{}) {
    p.erase(p.begin());
    ++zeros;
  }
  if (zero_multiplicity) *zero_multiplicity = zeros;
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return {};
  if (deg == 1) return {-p[0] / p[1]};

  // rescale s = c t so that the end coefficients have equal magnitude
  const double c = std::pow(std::abs(p.front()) / std::abs(p.back()), 1.0 / static_cast<double>(deg));
  double mag = 0.0;
  Poly t(p.size());
  double ck = 1.0;
  for (std::size_t k = 0; k <= deg; ++k) {
    t[k] = p[k] * ck;
    mag = std::max(mag, std::abs(t[k]));
    ck *= c;
  }
  for (auto& x : t) x /= mag;

  const auto d = static_cast<Eigen::Index>(deg);
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) comp(i, d - 1) = -t[static_cast<std::size_t>(i)] / t[deg];
  balance(comp);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NoPhysicalRoot, "companion eigenvalue iteration did not converge");
  std::vector<cd> out;
  out.reserve(deg);
  for (Eigen::Index i = 0; i < d; ++i) out.push_back(solver.eigenvalues()(i) * c);
  return out;
}

std::vector<cd> refine_roots(const Poly& p_in, std::vector<cd> z, int max_iterations) {
  Poly p(p_in);
  trim(p);
  while (p.size() > 1 && p.front() == cd{}) p.erase(p.begin()); // same deflation as roots()
  if (p.size() < 2 || z.size() != p.size() - 1) return {};
  const std::size_t deg = p.size() - 1;
  Poly dp(deg);
  for (std::size_t k = 1; k <= deg; ++k) dp[k - 1] = p[k] * static_cast<double>(k);
  std::vector<double> mag(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) mag[k] = std::abs(p[k]);
  // |p(z)| below this multiple of the rounding bound counts as a root, which
  // also stops clustered roots once they reach their attainable accuracy
  constexpr double kSlack = 64.0 * std::numeric_limits<double>::epsilon();
  std::vector<bool> done(deg, false);
  for (int it = 0; it < max_iterations; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < deg; ++i) {
      if (done[i]) continue;
      const cd val = evaluate(p, z[i]);
      double bound = 0.0;
      const double az = std::abs(z[i]);
      for (auto it_m = mag.rbegin(); it_m != mag.rend(); ++it_m) bound = bound * az + *it_m;
      if (std::abs(val) <= kSlack * bound) {
        done[i] = true;
        continue;
      }
      const cd ratio = val / evaluate(dp, z[i]);
      cd repel{};
      for (std::size_t j = 0; j < deg; ++j)
        if (j != i) repel += 1.0 / (z[i] - z[j]);
      const cd step = ratio / (1.0 - ratio * repel);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return {};
      z[i] -= step;
      if (std::abs(step) <= 1e-14 * std::abs(z[i])) done[i] = true;
      else all_done = false;
    }
    if (all_done) return z;
  }
  return {};
}

} // namespace clustercap::poly
