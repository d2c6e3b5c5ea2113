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

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace clustercap {

using cd = std::complex<double>;

enum class TermKind { Plain, ZeroPadded };

/// R-transform of one Gaussian block's Gram law. Plain: (1/n)B^H B with
/// aspect ratio beta and normalized variance q. ZeroPadded: the same block
/// occupying a fraction k of the columns, the rest zero.
struct RTransformTerm {
  TermKind kind = TermKind::Plain;
  double k = 1.0;
  double beta = 1.0;
  double q = 1.0;

  static RTransformTerm plain(double beta, double q);
  static RTransformTerm zero_padded(double k, double beta, double q);

  void validate() const;
  /// Point mass at zero of this term's own eigenvalue law.
  double zero_atom() const;
  /// Upper edge of this term's support.
  double support_edge() const;
};

struct RTransformSum {
  std::vector<RTransformTerm> terms;
};

/// Closed-form Shannon transform of the Marchenko-Pastur law, in nats.
double mp_shannon_transform(double g, double beta);

/// Branch finite at the origin. Throws PoleEncountered near a pole.
cd eval_r_transform(const RTransformTerm& term, cd z);
cd eval_r_transform(const RTransformSum& sum, cd z);

/// Every s in the upper half plane with x + jy = R(-s) - 1/s that passes the
/// subordination check. Sorted by decreasing imaginary part.
std::vector<cd> inversion_candidates(const RTransformSum& sum, cd z);

/// Stieltjes transform S(z) = int f(t)/(t - z) dt at z = x + jy. With a seed
/// the candidate nearest to it is returned, otherwise the one with largest
/// imaginary part. Throws NoPhysicalRoot outside the support.
cd stieltjes_from_r(const RTransformSum& sum, double x, double y,
                    std::optional<cd> seed_root = std::nullopt);

struct GridSpec {
  std::size_t points = 2000;
  /// Upper abscissa; 0 selects it automatically from a coarse scan.
  double x_max = 0.0;
  double y = 1e-6;
  std::size_t coarse_points = 200;
};

struct SpectralDensity {
  std::vector<double> grid;
  std::vector<double> values;
  double zero_mass = 0.0;
  double continuous_mass = 0.0;

  /// Cumulative distribution of the continuous part only, normalized to 1,
  /// linearly interpolated between grid points.
  double continuous_cdf(double x) const;

private:
  friend SpectralDensity density_from_sum(const RTransformSum&, const GridSpec&);
  std::vector<double> cumulative_;
};

/// Zero atom of the free sum: max(0, sum of atoms - (terms - 1)).
double free_sum_zero_atom(const RTransformSum& sum);
/// Operator-norm bound on the support of the free sum.
double free_sum_support_bound(const RTransformSum& sum);

SpectralDensity density_from_sum(const RTransformSum& sum, const GridSpec& spec = {});

/// int log(1 + g x) f(x) dx over the continuous part, in nats.
double shannon_integral(const SpectralDensity& density, double g);

/// Composite Simpson rule on a uniform grid; an even sample count closes the
/// last interval with the trapezoid rule.
double simpson(std::span<const double> f, double h);

/// Simpson on [h, end] plus a power-law fit on the first panel, for
/// integrands that may blow up like x^p (p > -1) at the origin.
double integrate_from_origin(std::span<const double> f, double h);

} // namespace clustercap
