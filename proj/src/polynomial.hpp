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

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace clustercap::poly {

using cd = std::complex<double>;

/// Dense polynomial, coefficients in increasing degree.
using Poly = std::vector<cd>;

Poly add(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly scale(const Poly& a, cd c);
cd evaluate(const Poly& p, cd x);
/// Drops exactly-zero high coefficients.
void trim(Poly& p);

/// Element of C[s][r_0..r_{T-1}] / (r_i^2 - D_i(s)). Components are keyed by
/// the bitmask of radicals they multiply.
class RadicalPoly {
public:
  explicit RadicalPoly(const std::vector<Poly>* radicands) : radicands_(radicands) {}

  void add_component(std::uint32_t mask, const Poly& p);
  RadicalPoly operator*(const RadicalPoly& o) const;
  /// Flips the sign of radical i.
  RadicalPoly conjugate(std::size_t i) const;
  /// Product over all sign choices; the result is free of radicals.
  Poly norm() const;

  const std::map<std::uint32_t, Poly>& components() const { return comps_; }

private:
  const std::vector<Poly>* radicands_;
  std::map<std::uint32_t, Poly> comps_;
};

/// All complex roots via eigenvalues of a balanced companion matrix. Roots at
/// the origin coming from trailing zero coefficients are removed first and
/// reported through zero_multiplicity when requested.
std::vector<cd> roots(Poly p, int* zero_multiplicity = nullptr);

/// Aberth-Ehrlich refinement of a full root set from nearby starting values
/// (for example the roots of a slightly perturbed polynomial). Returns an
/// empty vector when it fails to converge; the caller then falls back to
/// roots(). Roots at the origin are deflated exactly as in roots().
std::vector<cd> refine_roots(const Poly& p, std::vector<cd> guess, int max_iterations = 60);

} // namespace clustercap::poly
