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

#include "channel_model.hpp"
#include "freeprob.hpp"

#include <compare>
#include <cstdint>
#include <numbers>
#include <string>

namespace clustercap {

struct ThroughputResult {
  SchemeKind scheme = SchemeKind::GlobalMJD;
  SystemParams params;
  Route route = Route::Analytic;
  double value_nats = 0.0;
  /// Standard error of the mean; Monte Carlo only.
  double stderr_nats = 0.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::size_t redraws = 0;
  /// Largest post-filter interference to signal power ratio seen (IA only).
  double max_interference_ratio = 0.0;
  std::string grid;

  double value_bits() const { return value_nats / std::numbers::ln2; }
};

// ---- analytic capacities (nats per cell) -------------------------------

ThroughputResult capacity_mjd(const SystemParams& p);
ThroughputResult capacity_ia(const SystemParams& p);
ThroughputResult capacity_rdma(const SystemParams& p);
ThroughputResult capacity_ci(const SystemParams& p);
ThroughputResult capacity(SchemeKind scheme, const SystemParams& p);

/// Candidate closed forms for the MJD limit. Global is the one used by
/// capacity_mjd; the others keep the finite-cluster aspect ratio K(M+1)/M or
/// the plain ratio K together with the M/(M+1) power scaling.
enum class MjdForm { Global, FiniteClusterRatio, PlainRatio };
double mjd_candidate(MjdForm form, const SystemParams& p);

/// Normalization of the RDMA terms. ProfileConsistent derives k, beta and q
/// from the built profile blocks. Unnormalized skips the division of the
/// interior block power by the cell count and uses edge power 2.
enum class RdmaForm { ProfileConsistent, Unnormalized };

RTransformSum ia_terms(const SystemParams& p);
RTransformSum rdma_terms(const SystemParams& p, RdmaPart part, RdmaForm form = RdmaForm::ProfileConsistent);
double rdma_candidate(RdmaForm form, const SystemParams& p);

/// Term of the rows [row_begin, row_begin + row_count) of a profile: k is the
/// fraction of nonzero columns, beta = nonzero columns / rows, and
/// q = (rows / n) * mean squared entry over the nonzero columns.
RTransformTerm term_from_block(const VarianceProfile& profile, Eigen::Index row_begin,
                               Eigen::Index row_count, int n);

/// Spectral laws of (1/n) H^H H for the scheme profiles.
SpectralDensity ia_density(const SystemParams& p, const GridSpec& grid = {});
SpectralDensity mjd_density(const SystemParams& p, const GridSpec& grid = {});

// ---- degrees of freedom -------------------------------------------------

/// Exact non-negative rational number, always reduced.
class Rational {
public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator-(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
  std::int64_t num_;
  std::int64_t den_;
};

Rational degrees_of_freedom_exact(SchemeKind scheme, const SystemParams& p);
double degrees_of_freedom(SchemeKind scheme, const SystemParams& p);

} // namespace clustercap
