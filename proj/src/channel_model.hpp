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

#include "types.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace clustercap {

using cd = std::complex<double>;

/// Scenario tuple shared by every computation. Cells per cluster M, user
/// terminals per cell K, antennas per terminal and per base station n = K+1,
/// intercell gain alpha and per-antenna transmit SNR gamma (linear).
struct SystemParams {
  int M = 4;
  int K = 5;
  int n = 6;
  double alpha = 0.5;
  double gamma = 100.0;

  /// Validating constructor with n derived as K+1.
  static SystemParams make(int M, int K, double alpha, double gamma);
  /// Validating constructor; rejects n != K+1.
  static SystemParams make(int M, int K, int n, double alpha, double gamma);

  void validate() const;
  double gamma_tilde() const { return n * gamma; }
};

/// Deterministic non-negative matrix of per-entry standard deviations.
class VarianceProfile {
public:
  explicit VarianceProfile(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  /// Squared Frobenius norm over rows*cols.
  double q_norm() const;

private:
  Eigen::MatrixXd entries_;
};

enum class RdmaPart { Active, Inactive };

/// Counter-based random stream: stream for (seed, tag, index, attempt) is a
/// pure function of its key, so trial results do not depend on scheduling.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed);
  static RandomStream derive(std::uint64_t master_seed, std::uint64_t tag, std::uint64_t index,
                             std::uint64_t attempt = 0);

  /// CN(0,1): real and imaginary parts each N(0, 1/2).
  cd complex_gaussian();
  Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols);

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

struct ChannelRealization {
  Eigen::MatrixXcd matrix;
  SchemeKind scheme = SchemeKind::GlobalMJD;
  SystemParams params;
};

/// Alignment precoders for one edge UT group plus the zero-forcing filter
/// that removes the aligned direction at the victim base station.
struct IAPrecodingSet {
  Eigen::VectorXcd reference;                 // v, all ones, |v|^2 = n
  std::vector<Eigen::MatrixXcd> inverses;     // (G^j)^-1
  std::vector<Eigen::VectorXcd> precoders;    // (G^j)^-1 v v_j
  std::vector<double> power_scalars;          // v_j
  Eigen::MatrixXcd zf_filter;                 // Q, K x n, Q v = 0, Q Q^H = I
};

inline constexpr double kMaxConditionNumber = 1e8;

/// Toeplitz cell/group gain pattern: ones on the diagonal, alpha on the
/// superdiagonal, rows x (rows+1).
Eigen::MatrixXd toeplitz_gains(int rows, double alpha);

VarianceProfile build_profile_mjd(const SystemParams& p);
VarianceProfile build_profile_ia(const SystemParams& p);
VarianceProfile build_profile_rdma(const SystemParams& p, RdmaPart part);

ChannelRealization sample_channel(const VarianceProfile& profile, RandomStream& rng,
                                  SchemeKind scheme = SchemeKind::GlobalMJD,
                                  const SystemParams& params = {});

/// Orthonormal-row basis (n-1 rows) of the complement of v.
Eigen::MatrixXcd zero_forcing_filter(const Eigen::VectorXcd& v);

/// Throws IllConditionedChannel when a block's condition number exceeds
/// kMaxConditionNumber; the caller redraws.
IAPrecodingSet build_ia_precoding(std::span<const Eigen::MatrixXcd> edge_channels);

} // namespace clustercap
