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

#include "channel_model.hpp"

#include <cmath>
#include <sstream>

namespace clustercap {

std::string_view to_string(SchemeKind s) {
  switch (s) {
  case SchemeKind::GlobalMJD: return "mjd";
  case SchemeKind::IA: return "ia";
  case SchemeKind::RDMA: return "rdma";
  case SchemeKind::CI: return "ci";
  }
  return "?";
}

std::string_view to_string(Route r) {
  return r == Route::Analytic ? "analytic" : "mc";
}

SchemeKind parse_scheme(std::string_view text) {
  if (text == "mjd") return SchemeKind::GlobalMJD;
  if (text == "ia") return SchemeKind::IA;
  if (text == "rdma" || text == "rd") return SchemeKind::RDMA;
  if (text == "ci") return SchemeKind::CI;
  throw Error(ErrorCode::Parse, "unknown scheme '" + std::string(text) + "'");
}

Route parse_route(std::string_view text) {
  if (text == "analytic") return Route::Analytic;
  if (text == "mc" || text == "montecarlo") return Route::MonteCarlo;
  throw Error(ErrorCode::Parse, "unknown route '" + std::string(text) + "'");
}

// ---- SystemParams -------------------------------------------------------

SystemParams SystemParams::make(int M, int K, double alpha, double gamma) {
  return make(M, K, K + 1, alpha, gamma);
}

SystemParams SystemParams::make(int M, int K, int n, double alpha, double gamma) {
  SystemParams p;
  p.M = M;
  p.K = K;
  p.n = n;
  p.alpha = alpha;
  p.gamma = gamma;
  p.validate();
  return p;
}

void SystemParams::validate() const {
  std::ostringstream msg;
  if (M < 3)
    msg << "cluster size M must be >= 3 (got " << M << ")";
  else if (K < 1)
    msg << "users per cell K must be >= 1 (got " << K << ")";
  else if (n != K + 1)
    msg << "antenna count n must equal K+1 (got n=" << n << ", K=" << K << ")";
  else if (!(alpha >= 0.0 && alpha <= 1.0))
    msg << "alpha must lie in [0,1] (got " << alpha << ")";
  else if (!(gamma > 0.0) || !std::isfinite(gamma))
    msg << "gamma must be positive and finite (got " << gamma << ")";
  else
    return;
  throw Error(ErrorCode::InvalidParameter, msg.str());
}

// ---- VarianceProfile ----------------------------------------------------

VarianceProfile::VarianceProfile(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0)
    throw Error(ErrorCode::InvalidParameter, "variance profile must be non-empty");
  if ((entries_.array() < 0.0).any() || !entries_.allFinite())
    throw Error(ErrorCode::InvalidParameter, "variance profile entries must be finite and >= 0");
}

double VarianceProfile::q_norm() const {
  return entries_.squaredNorm() / static_cast<double>(entries_.rows() * entries_.cols());
}

// ---- Random streams -----------------------------------------------------

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
} // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

RandomStream RandomStream::derive(std::uint64_t master_seed, std::uint64_t tag, std::uint64_t index,
                                  std::uint64_t attempt) {
  std::uint64_t key = mix_seed(master_seed, tag);
  key = mix_seed(key, index);
  key = mix_seed(key, attempt);
  return RandomStream(key);
}

cd RandomStream::complex_gaussian() {
  static const double kHalf = std::sqrt(0.5);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {kHalf * re, kHalf * im};
}

Eigen::MatrixXcd RandomStream::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXcd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      g(i, j) = complex_gaussian();
  return g;
}

// ---- Profiles -----------------------------------------------------------

Eigen::MatrixXd toeplitz_gains(int rows, double alpha) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows, rows + 1);
  for (int i = 0; i < rows; ++i) {
    t(i, i) = 1.0;
    t(i, i + 1) = alpha;
  }
  return t;
}

namespace {
// Kronecker product with an all-ones block of size (n, Kn).
Eigen::MatrixXd expand_cells(const Eigen::MatrixXd& cell_gains, int n, int K) {
  const int bw = K * n;
  Eigen::MatrixXd out(cell_gains.rows() * n, cell_gains.cols() * bw);
  for (Eigen::Index i = 0; i < cell_gains.rows(); ++i)
    for (Eigen::Index j = 0; j < cell_gains.cols(); ++j)
      out.block(i * n, j * bw, n, bw).setConstant(cell_gains(i, j));
  return out;
}
} // namespace

VarianceProfile build_profile_mjd(const SystemParams& p) {
  p.validate();
  return VarianceProfile(expand_cells(toeplitz_gains(p.M, p.alpha), p.n, p.K));
}

VarianceProfile build_profile_ia(const SystemParams& p) {
  p.validate();
  const int n = p.n, K = p.K, M = p.M, bw = K * n;
  const int rows = M * n - 1;
  const int cols = (M - 1) * bw + K;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(rows, cols);
  // first BS: aligned edge group (K effective columns) and the alpha-leak of group 2
  s.block(0, 0, n, K).setConstant(1.0);
  s.block(0, K, n, bw).setConstant(p.alpha);
  // interior BSs 2..M-1
  if (M > 2)
    s.block(n, K, (M - 2) * n, (M - 1) * bw) = expand_cells(toeplitz_gains(M - 2, p.alpha), n, K);
  // last BS after zero-forcing: n-1 rows seeing its own group only
  s.block((M - 1) * n, K + (M - 2) * bw, n - 1, bw).setConstant(1.0);
  return VarianceProfile(std::move(s));
}

VarianceProfile build_profile_rdma(const SystemParams& p, RdmaPart part) {
  p.validate();
  const int n = p.n, K = p.K, bw = K * n;
  const int cells = part == RdmaPart::Active ? p.M : p.M - 1;
  const double edge_gain = part == RdmaPart::Active ? 2.0 : 1.0;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(cells * n, cells * bw);
  s.topRows((cells - 1) * n) = expand_cells(toeplitz_gains(cells - 1, p.alpha), n, K);
  s.block((cells - 1) * n, (cells - 1) * bw, n, bw).setConstant(edge_gain);
  return VarianceProfile(std::move(s));
}

ChannelRealization sample_channel(const VarianceProfile& profile, RandomStream& rng,
                                  SchemeKind scheme, const SystemParams& params) {
  const auto& sigma = profile.entries();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(sigma.rows(), sigma.cols());
  for (Eigen::Index j = 0; j < sigma.cols(); ++j)
    for (Eigen::Index i = 0; i < sigma.rows(); ++i)
      if (sigma(i, j) != 0.0)
        h(i, j) = sigma(i, j) * rng.complex_gaussian();
  return {std::move(h), scheme, params};
}

// ---- Interference alignment ---------------------------------------------

Eigen::MatrixXcd zero_forcing_filter(const Eigen::VectorXcd& v) {
  const Eigen::Index n = v.size();
  if (n < 2)
    throw Error(ErrorCode::InvalidParameter, "reference vector needs at least two entries");
  Eigen::MatrixXcd a(n, n + 1);
  a.col(0) = v;
  a.rightCols(n) = Eigen::MatrixXcd::Identity(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd basis = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  // column 0 spans v; the rest is an orthonormal basis of its complement
  return basis.rightCols(n - 1).adjoint();
}

IAPrecodingSet build_ia_precoding(std::span<const Eigen::MatrixXcd> edge_channels) {
  if (edge_channels.empty())
    throw Error(ErrorCode::InvalidParameter, "no edge channels supplied");
  const Eigen::Index n = edge_channels.front().rows();
  IAPrecodingSet set;
  set.reference = Eigen::VectorXcd::Ones(n);
  set.zf_filter = zero_forcing_filter(set.reference);
  for (const auto& g : edge_channels) {
    if (g.rows() != n || g.cols() != n)
      throw Error(ErrorCode::InvalidParameter, "edge channel blocks must all be n x n");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > kMaxConditionNumber)
      throw Error(ErrorCode::IllConditionedChannel, "edge channel condition number above threshold");
    Eigen::MatrixXcd inv = g.partialPivLu().inverse();
    Eigen::VectorXcd dir = inv * set.reference;
    // trace power constraint: |d|^2 = n, i.e. n*gamma per terminal
    const double scale = std::sqrt(static_cast<double>(n)) / dir.norm();
    set.precoders.push_back(dir * scale);
    set.power_scalars.push_back(scale);
    set.inverses.push_back(std::move(inv));
  }
  return set;
}

} // namespace clustercap
