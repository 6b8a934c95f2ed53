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

#ifndef QUERYFORGE_STREAM_SIM_H_
#define QUERYFORGE_STREAM_SIM_H_

#include <cstdint>
#include <vector>

#include "queryforge/profile.hpp"

namespace queryforge {

/// One simulated query. The forged flag is simulator-side ground truth; the
/// attacker view never sees it.
struct QueryEvent {
  std::uint64_t seq;
  std::uint32_t category_index;
  bool forged;

  friend bool operator==(const QueryEvent&, const QueryEvent&) = default;
};

/// Inputs of one stream simulation. Streams are bit-reproducible functions
/// of this struct: the generator is std::mt19937_64 seeded with `seed`, the
/// uniform variate is u = (x >> 11) * 2^-53, and the draw order is fixed.
///
/// Default mode draws each event's forged flag independently as
/// Bernoulli(rho) (one variate), then the category by inverse CDF from r or
/// q (one variate). With exact_count set, exactly floor(rho * N) events are
/// forged: the flag sequence is a Fisher-Yates shuffle (N-1 variates, from
/// index N-1 down) of floor(rho*N) forged slots, then each event draws only
/// its category variate.
struct SimulationConfig {
  Profile q;
  Profile r;
  Redundancy rho;
  std::uint64_t total_queries;
  std::uint64_t seed;
  bool exact_count = false;
};

/// Empirical view of a finished stream against the designed mixture and the
/// population profile. Divergences may be +infinity.
struct ConvergenceReport {
  std::uint64_t n_observed;
  Profile empirical;
  double div_to_apparent;  // D(empirical || mix(q, r, rho)), bits
  double measured_risk;    // D(empirical || p), bits
};

/// Generates the full event stream for cfg. Throws CategoryMismatch when q
/// and r disagree and InvalidConfig when total_queries is zero.
std::vector<QueryEvent> generate_stream(const SimulationConfig& cfg);

/// Per-category tallies of a stream, ignoring the forged flags -- exactly
/// what a profile-building attacker records. Throws EmptyLog on an empty
/// stream.
CategoryCounts attacker_view(const std::vector<QueryEvent>& stream,
                             const std::vector<std::string>& categories);

/// Estimates the attacker-observed profile and its divergences from the
/// designed apparent profile and from the population profile p.
ConvergenceReport convergence_report(const std::vector<QueryEvent>& stream,
                                     const Profile& q, const Profile& r,
                                     Redundancy rho, const Profile& p);

}  // namespace queryforge

#endif  // QUERYFORGE_STREAM_SIM_H_
