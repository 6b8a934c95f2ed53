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

#ifndef QUERYFORGE_METRICS_H_
#define QUERYFORGE_METRICS_H_

#include "queryforge/profile.hpp"

namespace queryforge {

/// Shannon entropy -sum_i p_i log2 p_i in bits, with 0 log 0 = 0.
/// Lies in [0, log2 n], maximal exactly for the uniform profile.
double entropy(const Profile& p);

/// Kullback-Leibler divergence sum_i p_i log2(p_i / ref_i) in bits, with
/// 0 log(0/x) = 0. Returns +infinity exactly when some category has
/// p_i > 0 and ref_i = 0. Nonnegative, zero iff p = ref.
double kl_divergence(const Profile& p, const Profile& ref);

/// log2 n - entropy(p); identical to kl_divergence(p, uniform).
double divergence_from_uniform(const Profile& p);

/// Apparent profile (1 - rho) q + rho r observed when a fraction rho of
/// queries is drawn from r instead of q.
Profile mix(const Profile& q, const Profile& r, Redundancy rho);

/// Divergence of the apparent profile from the population profile p, in
/// bits. At rho = 0 this is the initial risk kl_divergence(q, p).
double privacy_risk(const Profile& q, const Profile& r, Redundancy rho,
                    const Profile& p);

/// Relative-frequency profile of observed counts. Throws EmptyLog when the
/// total count is zero.
Profile estimate_profile(const CategoryCounts& counts);

}  // namespace queryforge

#endif  // QUERYFORGE_METRICS_H_
