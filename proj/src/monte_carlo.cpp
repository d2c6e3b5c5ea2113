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


#include "monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace clustercap {

namespace {

// Stream tags keep the schemes' random sequences apart.
enum : std::uint64_t {
  kTagMjd = 0x6d6a64,
  kTagIa = 0x6961,
  kTagRdmaActive = 0x726461,
  kTagRdmaInactive = 0x726469,
  kTagCiCluster = 0x636963,
  kTagCiLeak = 0x63696c,
};

constexpr std::size_t kMaxAttempts = 64;

struct TrialValue {
  double value = 0.0;
  std::size_t redraws = 0;
  double ratio = 0.0;
};

// Runs fn(trial) for every trial on a worker pool; the output is indexed by
// trial so the reduction order never depends on scheduling.
template <class Fn>
std::vector<TrialValue> run_trials(std::size_t iterations, unsigned workers, Fn fn) {
  std::vector<TrialValue> out(iterations);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, iterations));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < iterations; t = next++) {
      try {
        out[t] = fn(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = iterations;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

LogDetStats summarize(const std::vector<TrialValue>& v) {
  LogDetStats s;
  s.count = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  for (const auto& t : v) sum += t.value;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (const auto& t : v) ss += (t.value - s.mean) * (t.value - s.mean);
    s.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return s;
}

std::size_t total_redraws(const std::vector<TrialValue>& v) {
  std::size_t r = 0;
  for (const auto& t : v) r += t.redraws;
  return r;
}

void check_config(const MonteCarloConfig& cfg) {
  cfg.params.validate();
  if (cfg.iterations < 1) throw Error(ErrorCode::InvalidParameter, "iterations must be >= 1");
}

// Profile-based trials with redraw on a failed factorization.
std::vector<TrialValue> profile_trials(const MonteCarloConfig& cfg, const VarianceProfile& prof, std::uint64_t tag) {
  const double gamma = cfg.params.gamma;
  const int M = cfg.params.M;
  return run_trials(cfg.iterations, cfg.workers, [&](std::size_t t) {
    TrialValue tv;
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
      auto rng = RandomStream::derive(cfg.master_seed, tag, t, attempt);
      const auto ch = sample_channel(prof, rng, cfg.scheme, cfg.params);
      try {
        tv.value = log_det_identity_plus(ch.matrix, gamma) / M;
        return tv;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonFiniteLogDet) throw;
        ++tv.redraws;
      }
    }
    throw Error(ErrorCode::NonFiniteLogDet, "trial kept failing after redraws");
  });
}

ThroughputResult mc_result(const MonteCarloConfig& cfg, SchemeKind s, double mean, double se, std::size_t redraws) {
  ThroughputResult r;
  r.scheme = s;
  r.params = cfg.params;
  r.route = Route::MonteCarlo;
  r.value_nats = mean;
  r.stderr_nats = se;
  r.iterations = cfg.iterations;
  r.seed = cfg.master_seed;
  r.redraws = redraws;
  return r;
}

} // namespace

double log_det_identity_plus(const Eigen::MatrixXcd& h, double gamma) {
  if (gamma == 0.0 || h.size() == 0) return 0.0;
  // Sylvester: det(I + g H H^H) = det(I + g H^H H); factor the smaller one
  Eigen::MatrixXcd gram = h.rows() <= h.cols() ? Eigen::MatrixXcd(h * h.adjoint())
                                               : Eigen::MatrixXcd(h.adjoint() * h);
  gram *= gamma;
  gram.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NonFiniteLogDet, "Cholesky factorization failed");
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log(l(i, i).real());
  acc *= 2.0;
  if (!std::isfinite(acc)) throw Error(ErrorCode::NonFiniteLogDet, "log-determinant is not finite");
  return acc;
}

LogDetStats ergodic_logdet(std::span<const ChannelRealization> realizations, double gamma, int normalizer) {
  if (realizations.empty()) throw Error(ErrorCode::EmptyInput, "no realizations");
  if (normalizer < 1) throw Error(ErrorCode::InvalidParameter, "normalizer must be >= 1");
  std::vector<TrialValue> v(realizations.size());
  const auto rows = realizations.front().matrix.rows();
  const auto cols = realizations.front().matrix.cols();
  for (std::size_t i = 0; i < realizations.size(); ++i) {
    const auto& m = realizations[i].matrix;
    if (m.rows() != rows || m.cols() != cols)
      throw Error(ErrorCode::InvalidParameter, "realizations differ in shape");
    v[i].value = log_det_identity_plus(m, gamma) / normalizer;
  }
  return summarize(v);
}

IaTrial sample_ia_trial(const SystemParams& p, std::uint64_t master_seed, std::uint64_t trial) {
  p.validate();
  const Eigen::Index n = p.n, K = p.K, M = p.M, bw = K * n;
  IaTrial out;
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    auto rng = RandomStream::derive(master_seed, kTagIa, trial, attempt);
    std::vector<Eigen::MatrixXcd> to_prev(K), to_own(K), to_last(K);
    for (Eigen::Index j = 0; j < K; ++j) {
      to_prev[j] = rng.gaussian_matrix(n, n); // edge UT j -> BS of the previous cluster
      to_own[j] = rng.gaussian_matrix(n, n);  // edge UT j -> BS 1
    }
    for (Eigen::Index j = 0; j < K; ++j) to_last[j] = rng.gaussian_matrix(n, n); // next cluster's edge UTs -> BS M

    IAPrecodingSet own, next;
    try {
      own = build_ia_precoding(to_prev);
      next = build_ia_precoding(to_last);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IllConditionedChannel) throw;
      ++out.redraws;
      continue;
    }

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(M * n - 1, (M - 1) * bw + K);
    for (Eigen::Index j = 0; j < K; ++j) h.block(0, j, n, 1) = to_own[j] * own.precoders[j];
    h.block(0, K, n, bw) = p.alpha * rng.gaussian_matrix(n, bw);
    for (Eigen::Index b = 1; b + 1 < M; ++b) {
      const Eigen::Index c0 = K + (b - 1) * bw;
      h.block(b * n, c0, n, bw) = rng.gaussian_matrix(n, bw);
      h.block(b * n, c0 + bw, n, bw) = p.alpha * rng.gaussian_matrix(n, bw);
    }
    const Eigen::MatrixXcd own_last = rng.gaussian_matrix(n, bw);
    h.block((M - 1) * n, K + (M - 2) * bw, n - 1, bw) = next.zf_filter * own_last;

    Eigen::MatrixXcd leak(n, K);
    for (Eigen::Index j = 0; j < K; ++j) leak.col(j) = p.alpha * to_last[j] * next.precoders[j];
    const double signal = (next.zf_filter * own_last).squaredNorm();
    out.interference_ratio = (next.zf_filter * leak).squaredNorm() / signal;
    out.matrix = std::move(h);
    return out;
  }
  throw Error(ErrorCode::IllConditionedChannel, "IA trial kept drawing ill-conditioned channels");
}

ThroughputResult simulate_mjd(const MonteCarloConfig& cfg) {
  check_config(cfg);
  const auto v = profile_trials(cfg, build_profile_mjd(cfg.params), kTagMjd);
  const auto s = summarize(v);
  return mc_result(cfg, SchemeKind::GlobalMJD, s.mean, s.std_error, total_redraws(v));
}

ThroughputResult simulate_ia(const MonteCarloConfig& cfg) {
  check_config(cfg);
  const auto& p = cfg.params;
  const auto v = run_trials(cfg.iterations, cfg.workers, [&](std::size_t t) {
    TrialValue tv;
    for (std::uint64_t extra = 0;; ++extra) {
      // a failed factorization redraws under a shifted trial key
      const auto trial = sample_ia_trial(p, mix_seed(cfg.master_seed, extra), t);
      tv.redraws += trial.redraws;
      tv.ratio = std::max(tv.ratio, trial.interference_ratio);
      try {
        tv.value = log_det_identity_plus(trial.matrix, p.gamma) / p.M;
        return tv;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonFiniteLogDet || extra + 1 >= kMaxAttempts) throw;
        ++tv.redraws;
      }
    }
  });
  const auto s = summarize(v);
  auto r = mc_result(cfg, SchemeKind::IA, s.mean, s.std_error, total_redraws(v));
  for (const auto& t : v) r.max_interference_ratio = std::max(r.max_interference_ratio, t.ratio);
  return r;
}

ThroughputResult simulate_rdma(const MonteCarloConfig& cfg) {
  check_config(cfg);
  const auto a = profile_trials(cfg, build_profile_rdma(cfg.params, RdmaPart::Active), kTagRdmaActive);
  const auto b = profile_trials(cfg, build_profile_rdma(cfg.params, RdmaPart::Inactive), kTagRdmaInactive);
  const auto sa = summarize(a), sb = summarize(b);
  return mc_result(cfg, SchemeKind::RDMA, 0.5 * (sa.mean + sb.mean),
                   0.5 * std::hypot(sa.std_error, sb.std_error), total_redraws(a) + total_redraws(b));
}

ThroughputResult simulate_ci(const MonteCarloConfig& cfg) {
  check_config(cfg);
  const auto& p = cfg.params;
  const auto cluster = profile_trials(cfg, build_profile_mjd(p), kTagCiCluster);
  const Eigen::MatrixXd leak_profile = Eigen::MatrixXd::Constant(p.n, p.K * p.n, p.alpha);
  std::vector<TrialValue> leak;
  if (p.alpha > 0.0) {
    leak = profile_trials(cfg, VarianceProfile(leak_profile), kTagCiLeak);
  } else {
    leak.assign(cfg.iterations, TrialValue{}); // no interference at all
  }
  const auto sc = summarize(cluster), sl = summarize(leak);
  return mc_result(cfg, SchemeKind::CI, sc.mean - sl.mean, std::hypot(sc.std_error, sl.std_error),
                   total_redraws(cluster) + total_redraws(leak));
}

ThroughputResult simulate(const MonteCarloConfig& cfg) {
  switch (cfg.scheme) {
  case SchemeKind::GlobalMJD: return simulate_mjd(cfg);
  case SchemeKind::IA: return simulate_ia(cfg);
  case SchemeKind::RDMA: return simulate_rdma(cfg);
  case SchemeKind::CI: return simulate_ci(cfg);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown scheme");
}

} // namespace clustercap
