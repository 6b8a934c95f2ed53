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

#include "queryforge/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace queryforge {

namespace {

void check_labels(const std::vector<std::string>& categories) {
  if (categories.empty()) {
    throw InvalidProfile("at least one category is required");
  }
  std::set<std::string> seen;
  for (const auto& label : categories) {
    if (label.empty()) {
      throw InvalidProfile("category labels must be nonempty");
    }
    if (!seen.insert(label).second) {
      throw InvalidProfile("duplicate category label: " + label);
    }
  }
}

std::vector<std::size_t> sorted_order(const std::vector<std::string>& labels) {
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  return order;
}

}  // namespace

Profile::Profile(std::vector<std::string> categories, std::vector<double> pmf)
    : categories_(std::move(categories)), pmf_(std::move(pmf)) {
  check_labels(categories_);
  if (categories_.size() != pmf_.size()) {
    throw InvalidProfile("pmf length does not match category count");
  }
  double sum = 0.0;
  for (double v : pmf_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidProfile("probabilities must be finite and >= 0");
    }
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kSumTolerance) {
    throw InvalidProfile("pmf sums to " + std::to_string(sum) +
                         ", outside the 1e-9 tolerance");
  }
  if (sum != 1.0) {
    for (double& v : pmf_) v /= sum;
  }
}

Profile Profile::uniform(std::vector<std::string> categories) {
  const std::size_t n = categories.size();
  if (n == 0) throw InvalidProfile("at least one category is required");
  std::vector<double> pmf(n, 1.0 / static_cast<double>(n));
  return Profile(std::move(categories), std::move(pmf));
}

Profile canonicalized(const Profile& p) {
  const auto order = sorted_order(p.categories());
  std::vector<std::string> labels(p.size());
  std::vector<double> pmf(p.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    labels[i] = p.categories()[order[i]];
    pmf[i] = p[order[i]];
  }
  return Profile(std::move(labels), std::move(pmf));
}

std::pair<Profile, Profile> align_union(const Profile& a, const Profile& b) {
  std::set<std::string> labels(a.categories().begin(), a.categories().end());
  labels.insert(b.categories().begin(), b.categories().end());
  std::vector<std::string> universe(labels.begin(), labels.end());

  auto extend = [&](const Profile& p) {
    std::vector<double> pmf(universe.size(), 0.0);
    for (std::size_t i = 0; i < universe.size(); ++i) {
      auto it = std::find(p.categories().begin(), p.categories().end(),
                          universe[i]);
      if (it != p.categories().end()) {
        pmf[i] = p[static_cast<std::size_t>(it - p.categories().begin())];
      }
    }
    return Profile(universe, std::move(pmf));
  };
  return {extend(a), extend(b)};
}

Redundancy::Redundancy(double rho) : rho_(rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw InvalidRedundancy("redundancy must lie in [0, 1), got " +
                            std::to_string(rho));
  }
}

CategoryCounts::CategoryCounts(std::vector<std::string> categories,
                               std::vector<std::uint64_t> counts)
    : categories_(std::move(categories)), counts_(std::move(counts)) {
  check_labels(categories_);
  if (categories_.size() != counts_.size()) {
    throw InvalidProfile("count vector length does not match category count");
  }
}

std::uint64_t CategoryCounts::total() const {
  std::uint64_t k = 0;
  for (auto c : counts_) k += c;
  return k;
}

CategoryCounts canonicalized(const CategoryCounts& c) {
  const auto order = sorted_order(c.categories());
  std::vector<std::string> labels(c.size());
  std::vector<std::uint64_t> counts(c.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    labels[i] = c.categories()[order[i]];
    counts[i] = c.counts()[order[i]];
  }
  return CategoryCounts(std::move(labels), std::move(counts));
}

void check_same_categories(const Profile& a, const Profile& b) {
  if (!a.same_categories(b)) {
    throw CategoryMismatch("profiles are defined over different categories");
  }
}

}  // namespace queryforge
