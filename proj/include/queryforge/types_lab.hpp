// Copyright 2026 The QueryForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUERYFORGE_TYPES_LAB_H_
#define QUERYFORGE_TYPES_LAB_H_

#include <cstdint>
#include <vector>

#include "queryforge/profile.hpp"

namespace queryforge {

/// Occurrence counts (k_1, ..., k_n) of a length-k sample over n symbols.
/// The empirical distribution (k_1/k, ..., k_n/k) is the sample's type.
class TypeVector {
 public:
  explicit TypeVector(std::vector<std::uint64_t> counts);

  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::size_t size() const { return counts_.size(); }
  std::uint64_t total() const { return total_; }  // k

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_;
};

/// Exact combinatorial quantities for one type under a reference
/// distribution tbar. The class-size fields relate the number of sequences
/// sharing the type to 2^{k H(t)}; the probability fields relate the type's
/// probability to 2^{-k D(t || tbar)}. Fields that need tbar are NaN in the
/// partial report produced by class_size_check.
struct TypeReport {
  Profile t;
  double exact_log2_class_size;  // log2 of the multinomial coefficient
  double entropy_approx;         // k * H(t)
  double exact_log2_prob;        // log2 P{T = t}; -inf for impossible types
  double divergence_exponent;    // k * D(t || tbar)
  double gap_per_symbol;         // |-(1/k) log2 P - D(t || tbar)|
};

/// log2 m!, exact for m <= 20 (64-bit factorials) and via lgamma beyond;
/// the two routes agree to better than 1e-10 relative where they overlap.
double log2_factorial(std::uint64_t m);

/// log2 of k! / (k_1! ... k_n!), the number of sequences with this type.
double log2_multinomial(const TypeVector& tv);

/// k * H(t) computed from integer counts as sum_i k_i log2(k / k_i), which
/// avoids forming the ratios k_i / k.
double k_times_entropy(const TypeVector& tv);

/// Verifies the sandwich k H(t) - n log2(k+1) <= log2_multinomial <= k H(t)
/// and returns the class-size half of a TypeReport (probability fields NaN,
/// categories synthesized). The bound cannot fail for valid inputs; a
/// violation indicates numeric breakage and throws std::logic_error.
TypeReport class_size_check(const TypeVector& tv);

/// Exact probability P{T = t} = multinomial(tv) * prod_i tbar_i^{k_i} of
/// drawing a sample with this type, computed in log space. Zero when some
/// k_i > 0 has tbar_i = 0.
double type_probability(const TypeVector& tv, const Profile& tbar);

/// |-(1/k) log2 P{T = t} - D(t || tbar)|, the per-symbol error of the
/// exponential approximation; always within n log2(k+1) / k. Throws
/// ZeroProbability when the type cannot occur under tbar.
double divergence_exponent_gap(const TypeVector& tv, const Profile& tbar);

/// All compositions of k into n nonnegative parts, in ascending
/// lexicographic order. Restricted to the exhaustive regime 1 <= n <= 6,
/// 1 <= k <= 30 with at most 10^6 compositions; throws RegimeExceeded
/// outside it.
std::vector<TypeVector> enumerate_types(std::size_t n, std::uint64_t k);

/// E T = sum over all types of P{T = t} * t, which equals tbar. Exhaustive
/// regime only.
Profile mean_type(const Profile& tbar, std::uint64_t k);

/// Full report for one type under tbar.
TypeReport type_report(const TypeVector& tv, const Profile& tbar);

}  // namespace queryforge

#endif  // QUERYFORGE_TYPES_LAB_H_
