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
#include "channel_model.hpp"

#include <cstdint>
#include <span>

namespace clustercap {

struct MonteCarloConfig {
  std::size_t iterations = 1000;
  std::uint64_t master_seed = 1;
  SchemeKind scheme = SchemeKind::GlobalMJD;
  SystemParams params;
  /// 0 picks the hardware concurrency. Results do not depend on it.
  unsigned workers = 0;
};

struct LogDetStats {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// log det(I + gamma H H^H) through a Cholesky factor of the smaller Gram
/// matrix. Throws NonFiniteLogDet if the factorization fails.
double log_det_identity_plus(const Eigen::MatrixXcd& h, double gamma);

/// Mean and standard error of log det(I + gamma H H^H) / normalizer.
LogDetStats ergodic_logdet(std::span<const ChannelRealization> realizations, double gamma, int normalizer);

/// One explicit IA realization: effective (Mn-1) x ((M-1)Kn+K) matrix and the
/// post-filter interference to signal power ratio at the last BS.
struct IaTrial {
  Eigen::MatrixXcd matrix;
  double interference_ratio = 0.0;
  std::size_t redraws = 0;
};

IaTrial sample_ia_trial(const SystemParams& p, std::uint64_t master_seed, std::uint64_t trial);

ThroughputResult simulate_mjd(const MonteCarloConfig& cfg);
ThroughputResult simulate_ia(const MonteCarloConfig& cfg);
ThroughputResult simulate_rdma(const MonteCarloConfig& cfg);
ThroughputResult simulate_ci(const MonteCarloConfig& cfg);
ThroughputResult simulate(const MonteCarloConfig& cfg);

} // namespace clustercap
