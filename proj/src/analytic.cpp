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


#include "analytic.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace clustercap {

namespace {

std::string describe_grid(const SpectralDensity& d) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "points=%zu x_max=%.6g", d.grid.size(), d.grid.empty() ? 0.0 : d.grid.back());
  return buf;
}

ThroughputResult analytic_result(SchemeKind s, const SystemParams& p, double nats) {
  ThroughputResult r;
  r.scheme = s;
  r.params = p;
  r.route = Route::Analytic;
  r.value_nats = nats;
  return r;
}

} // namespace

double mjd_candidate(MjdForm form, const SystemParams& p) {
  p.validate();
  const double kn = p.K * p.n;
  const double power = p.gamma_tilde() * (1.0 + p.alpha * p.alpha);
  const double shrink = static_cast<double>(p.M) / (p.M + 1);
  switch (form) {
  case MjdForm::Global: return kn * mp_shannon_transform(power, p.K);
  case MjdForm::FiniteClusterRatio: return kn * mp_shannon_transform(shrink * power, p.K / shrink);
  case MjdForm::PlainRatio: return kn * mp_shannon_transform(shrink * power, p.K);
  }
  return 0.0;
}

ThroughputResult capacity_mjd(const SystemParams& p) {
  return analytic_result(SchemeKind::GlobalMJD, p, mjd_candidate(MjdForm::Global, p));
}

ThroughputResult capacity_ci(const SystemParams& p) {
  const double leak = p.K * p.n / static_cast<double>(p.M) *
                      mp_shannon_transform(p.alpha * p.alpha * p.gamma_tilde(), p.K);
  return analytic_result(SchemeKind::CI, p, mjd_candidate(MjdForm::Global, p) - leak);
}

RTransformSum ia_terms(const SystemParams& p) {
  p.validate();
  const double M = p.M, K = p.K, a2 = p.alpha * p.alpha;
  const double den = M * K + M - K;
  RTransformSum sum;
  sum.terms.push_back(RTransformTerm::zero_padded((K + 2) / den, K / (K + 1) + K, (1 + (K + 1) * a2) / (K + 2)));
  sum.terms.push_back(RTransformTerm::zero_padded((M - 1) * (K + 1) / den, (M - 1) / (M - 2) * K,
                                                  (M - 2) / (M - 1) * (1 + a2)));
  sum.terms.push_back(RTransformTerm::zero_padded((K + 1) / den, K + 1, 1.0));
  return sum;
}

SpectralDensity ia_density(const SystemParams& p, const GridSpec& grid) {
  return density_from_sum(ia_terms(p), grid);
}

SpectralDensity mjd_density(const SystemParams& p, const GridSpec& grid) {
  p.validate();
  RTransformSum sum{{RTransformTerm::plain(p.K, 1.0 + p.alpha * p.alpha)}};
  return density_from_sum(sum, grid);
}

ThroughputResult capacity_ia(const SystemParams& p) {
  const auto d = ia_density(p);
  const double cols = (p.M - 1) * p.K * p.n + p.K;
  const double nats = cols / (p.M * p.n) * p.n * shannon_integral(d, p.gamma_tilde());
  auto r = analytic_result(SchemeKind::IA, p, nats);
  r.grid = describe_grid(d);
  return r;
}

RTransformTerm term_from_block(const VarianceProfile& profile, Eigen::Index row_begin,
                               Eigen::Index row_count, int n) {
  const auto block = profile.entries().middleRows(row_begin, row_count);
  Eigen::Index nonzero = 0;
  for (Eigen::Index j = 0; j < block.cols(); ++j)
    if ((block.col(j).array() != 0.0).any()) ++nonzero;
  if (nonzero == 0 || row_count == 0)
    throw Error(ErrorCode::InvalidParameter, "profile block has no nonzero columns");
  const double rows = static_cast<double>(row_count);
  const double nz = static_cast<double>(nonzero);
  const double k = nz / static_cast<double>(block.cols());
  const double q = rows / n * block.squaredNorm() / (rows * nz);
  if (nonzero == block.cols()) return RTransformTerm::plain(nz / rows, q);
  return RTransformTerm::zero_padded(k, nz / rows, q);
}

RTransformSum rdma_terms(const SystemParams& p, RdmaPart part, RdmaForm form) {
  p.validate();
  const int cells = part == RdmaPart::Active ? p.M : p.M - 1;
  if (form == RdmaForm::ProfileConsistent) {
    const auto prof = build_profile_rdma(p, part);
    const Eigen::Index top = static_cast<Eigen::Index>(cells - 1) * p.n;
    return {{term_from_block(prof, 0, top, p.n), term_from_block(prof, top, p.n, p.n)}};
  }
  const double c = cells;
  const double a2 = p.alpha * p.alpha;
  return {{RTransformTerm::plain(p.K * c / (c - 1), (c - 1) * (1 + a2)),
           RTransformTerm::zero_padded(1.0 / c, p.K, part == RdmaPart::Active ? 2.0 : 1.0)}};
}

namespace {

struct RdmaParts {
  double active, inactive;
  std::string grid;
};

RdmaParts rdma_parts(const SystemParams& p, RdmaForm form) {
  const auto d1 = density_from_sum(rdma_terms(p, RdmaPart::Active, form));
  const auto d2 = density_from_sum(rdma_terms(p, RdmaPart::Inactive, form));
  const double g = p.gamma_tilde();
  const double c1 = p.K * p.n * shannon_integral(d1, g);
  const double c2 = p.K * (p.M - 1.0) / p.M * p.n * shannon_integral(d2, g);
  return {c1, c2, describe_grid(d1) + "; " + describe_grid(d2)};
}

} // namespace

double rdma_candidate(RdmaForm form, const SystemParams& p) {
  const auto parts = rdma_parts(p, form);
  return 0.5 * (parts.active + parts.inactive);
}

ThroughputResult capacity_rdma(const SystemParams& p) {
  const auto parts = rdma_parts(p, RdmaForm::ProfileConsistent);
  auto r = analytic_result(SchemeKind::RDMA, p, 0.5 * (parts.active + parts.inactive));
  r.grid = parts.grid;
  return r;
}

ThroughputResult capacity(SchemeKind scheme, const SystemParams& p) {
  switch (scheme) {
  case SchemeKind::GlobalMJD: return capacity_mjd(p);
  case SchemeKind::IA: return capacity_ia(p);
  case SchemeKind::RDMA: return capacity_rdma(p);
  case SchemeKind::CI: return capacity_ci(p);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown scheme");
}

// ---- rationals and dof --------------------------------------------------

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidParameter, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

Rational degrees_of_freedom_exact(SchemeKind scheme, const SystemParams& p) {
  p.validate();
  const Rational one(1);
  switch (scheme) {
  case SchemeKind::GlobalMJD: return one;
  case SchemeKind::IA: return one - Rational(1, static_cast<std::int64_t>(p.M) * p.n);
  case SchemeKind::RDMA: return one - Rational(1, 2 * static_cast<std::int64_t>(p.M));
  case SchemeKind::CI: return one - Rational(1, p.M);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown scheme");
}

double degrees_of_freedom(SchemeKind scheme, const SystemParams& p) {
  return degrees_of_freedom_exact(scheme, p).value();
}

} // namespace clustercap
