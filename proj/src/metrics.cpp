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

#include "queryforge/metrics.hpp"

#include <cmath>
#include <limits>

namespace queryforge {

double entropy(const Profile& p) {
  double h = 0.0;
  for (double v : p.pmf()) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double kl_divergence(const Profile& p, const Profile& ref) {
  check_same_categories(p, ref);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    if (pi == 0.0) continue;
    const double ri = ref[i];
    if (ri == 0.0) return std::numeric_limits<double>::infinity();
    d += pi * std::log2(pi / ri);
  }
  return d;
}

double divergence_from_uniform(const Profile& p) {
  return std::log2(static_cast<double>(p.size())) - entropy(p);
}

Profile mix(const Profile& q, const Profile& r, Redundancy rho) {
  check_same_categories(q, r);
  const double genuine = 1.0 - rho.value();
  const double forged = rho.value();
  std::vector<double> s(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    s[i] = genuine * q[i] + forged * r[i];
  }
  return Profile(q.categories(), std::move(s));
}

double privacy_risk(const Profile& q, const Profile& r, Redundancy rho,
                    const Profile& p) {
  check_same_categories(q, p);
  return kl_divergence(mix(q, r, rho), p);
}

Profile estimate_profile(const CategoryCounts& counts) {
  const std::uint64_t k = counts.total();
  if (k == 0) {
    throw EmptyLog("cannot estimate a profile from zero observations");
  }
  std::vector<double> pmf(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    pmf[i] = static_cast<double>(counts.counts()[i]) / static_cast<double>(k);
  }
  return Profile(counts.categories(), std::move(pmf));
}

}  // namespace queryforge
