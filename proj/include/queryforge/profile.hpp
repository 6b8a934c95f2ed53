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

#ifndef QUERYFORGE_PROFILE_H_
#define QUERYFORGE_PROFILE_H_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace queryforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data failed a structural invariant (bad pmf, bad labels, bad counts).
class InvalidProfile : public Error {
 public:
  using Error::Error;
};

// A redundancy value outside [0, 1).
class InvalidRedundancy : public Error {
 public:
  using Error::Error;
};

// Two profiles that must share a category list do not.
class CategoryMismatch : public Error {
 public:
  using Error::Error;
};

// A query log or count vector with zero total observations.
class EmptyLog : public Error {
 public:
  using Error::Error;
};

// The user profile has mass on a category the population profile lacks,
// so every apparent profile has infinite divergence from the population.
class UnsupportedCategory : public Error {
 public:
  using Error::Error;
};

// Request outside the exhaustive-enumeration bounds.
class RegimeExceeded : public Error {
 public:
  using Error::Error;
};

// A type that cannot occur under the given reference distribution.
class ZeroProbability : public Error {
 public:
  using Error::Error;
};

// Malformed input file or JSON document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Invalid simulation configuration.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// Invalid redundancy grid specification.
class InvalidGrid : public Error {
 public:
  using Error::Error;
};

/// A probability mass function over an ordered list of named query
/// categories. Construction validates that labels are unique and nonempty,
/// every probability is nonnegative and finite, and the probabilities sum
/// to 1 within kSumTolerance; inputs inside the tolerance are renormalized
/// so downstream arithmetic sees a sum of 1 up to rounding.
class Profile {
 public:
  static constexpr double kSumTolerance = 1e-9;

  Profile(std::vector<std::string> categories, std::vector<double> pmf);

  /// Uniform distribution over the given categories.
  static Profile uniform(std::vector<std::string> categories);

  std::size_t size() const { return pmf_.size(); }
  const std::vector<std::string>& categories() const { return categories_; }
  const std::vector<double>& pmf() const { return pmf_; }
  double operator[](std::size_t i) const { return pmf_[i]; }

  bool same_categories(const Profile& other) const {
    return categories_ == other.categories_;
  }

 private:
  std::vector<std::string> categories_;
  std::vector<double> pmf_;
};

/// The same distribution with categories in lexicographic order. File
/// loaders apply this so documents listing categories in different orders
/// compare component by component.
Profile canonicalized(const Profile& p);

/// Extends both profiles to the sorted union of their category sets,
/// filling absent categories with zero probability. This is how file-level
/// inputs with differing category sets are reconciled before comparison.
std::pair<Profile, Profile> align_union(const Profile& a, const Profile& b);

/// Ratio of forged queries to total queries, constrained to [0, 1).
class Redundancy {
 public:
  explicit Redundancy(double rho);
  double value() const { return rho_; }

 private:
  double rho_;
};

/// Nonnegative observation counts per category, e.g. an attacker's tally of
/// a query stream. The total may be zero; estimate_profile rejects that.
class CategoryCounts {
 public:
  CategoryCounts(std::vector<std::string> categories,
                 std::vector<std::uint64_t> counts);

  std::size_t size() const { return counts_.size(); }
  const std::vector<std::string>& categories() const { return categories_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total() const;

 private:
  std::vector<std::string> categories_;
  std::vector<std::uint64_t> counts_;
};

CategoryCounts canonicalized(const CategoryCounts& c);

/// Throws CategoryMismatch unless both profiles carry the same ordered
/// category list.
void check_same_categories(const Profile& a, const Profile& b);

}  // namespace queryforge

#endif  // QUERYFORGE_PROFILE_H_
