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

#include "queryforge/stream_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "queryforge/metrics.hpp"

namespace queryforge {

namespace {

// The wire-level draw contract: std::mt19937_64 outputs are mapped to
// [0, 1) through the top 53 bits. Both the generator and this mapping are
// fully specified, so streams are identical across platforms.
double u01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

struct CategorySampler {
  std::vector<double> cumulative;
  std::uint32_t last_positive;

  explicit CategorySampler(const Profile& p)
      : cumulative(p.size()), last_positive(0) {
    double running = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      running += p[i];
      cumulative[i] = running;
      if (p[i] > 0.0) last_positive = static_cast<std::uint32_t>(i);
    }
  }

  // Smallest index whose cumulative mass exceeds u; the floating tail
  // (u beyond the final cumulative value) maps to the last positive-mass
  // category.
  std::uint32_t draw(double u) const {
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) return last_positive;
    return static_cast<std::uint32_t>(it - cumulative.begin());
  }
};

}  // namespace

std::vector<QueryEvent> generate_stream(const SimulationConfig& cfg) {
  check_same_categories(cfg.q, cfg.r);
  if (cfg.total_queries == 0) {
    throw InvalidConfig("total_queries must be at least 1");
  }
  const std::uint64_t total = cfg.total_queries;
  const double rho = cfg.rho.value();
  std::mt19937_64 eng(cfg.seed);
  const CategorySampler genuine(cfg.q);
  const CategorySampler forged(cfg.r);

  std::vector<QueryEvent> stream;
  stream.reserve(total);
  if (!cfg.exact_count) {
    for (std::uint64_t seq = 0; seq < total; ++seq) {
      const bool is_forged = u01(eng) < rho;
      const double u = u01(eng);
      stream.push_back(QueryEvent{
          seq, (is_forged ? forged : genuine).draw(u), is_forged});
    }
  } else {
    const auto forged_total = static_cast<std::uint64_t>(
        std::floor(rho * static_cast<double>(total)));
    std::vector<char> flags(total, 0);
    std::fill(flags.begin(), flags.begin() + forged_total, 1);
    for (std::uint64_t i = total - 1; i > 0; --i) {
      const auto j = std::min<std::uint64_t>(
          i, static_cast<std::uint64_t>(u01(eng) *
                                        static_cast<double>(i + 1)));
      std::swap(flags[i], flags[j]);
    }
    for (std::uint64_t seq = 0; seq < total; ++seq) {
      const bool is_forged = flags[seq] != 0;
      const double u = u01(eng);
      stream.push_back(QueryEvent{
          seq, (is_forged ? forged : genuine).draw(u), is_forged});
    }
  }
  return stream;
}

CategoryCounts attacker_view(const std::vector<QueryEvent>& stream,
                             const std::vector<std::string>& categories) {
  if (stream.empty()) {
    throw EmptyLog("attacker observed no queries");
  }
  std::vector<std::uint64_t> counts(categories.size(), 0);
  for (const QueryEvent& event : stream) {
    if (event.category_index >= counts.size()) {
      throw InvalidConfig("event category index out of range");
    }
    ++counts[event.category_index];
  }
  return CategoryCounts(categories, std::move(counts));
}

ConvergenceReport convergence_report(const std::vector<QueryEvent>& stream,
                                     const Profile& q, const Profile& r,
                                     Redundancy rho, const Profile& p) {
  check_same_categories(q, r);
  check_same_categories(q, p);
  const Profile empirical =
      estimate_profile(attacker_view(stream, q.categories()));
  const Profile apparent = mix(q, r, rho);
  return ConvergenceReport{stream.size(), empirical,
                           kl_divergence(empirical, apparent),
                           kl_divergence(empirical, p)};
}

}  // namespace queryforge
