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

#include "queryforge/types_lab.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace queryforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::size_t kMaxAlphabet = 6;
constexpr std::uint64_t kMaxSamples = 30;
constexpr std::uint64_t kMaxCompositions = 1000000;

// m! fits a 64-bit integer exactly up to m = 20.
constexpr std::uint64_t kExactFactorialLimit = 20;

std::uint64_t exact_factorial(std::uint64_t m) {
  std::uint64_t f = 1;
  for (std::uint64_t i = 2; i <= m; ++i) f *= i;
  return f;
}

std::vector<std::string> synthesized_labels(std::size_t n) {
  const std::size_t width = std::to_string(n).size();
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string num = std::to_string(i + 1);
    labels[i] = "c" + std::string(width - num.size(), '0') + num;
  }
  return labels;
}

Profile type_profile(const TypeVector& tv, std::vector<std::string> labels) {
  std::vector<double> pmf(tv.size());
  const double k = static_cast<double>(tv.total());
  for (std::size_t i = 0; i < tv.size(); ++i) {
    pmf[i] = static_cast<double>(tv.counts()[i]) / k;
  }
  return Profile(std::move(labels), std::move(pmf));
}

// Number of compositions C(k+n-1, n-1) without overflow in the regime.
std::uint64_t composition_count(std::size_t n, std::uint64_t k) {
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i < n; ++i) {
    c = c * (k + i) / i;  // exact: product of i consecutive integers
  }
  return c;
}

// D(t || tbar) in bits from integer counts; +inf when some k_i > 0 has
// tbar_i = 0.
double type_divergence(const TypeVector& tv, const Profile& tbar) {
  const double k = static_cast<double>(tv.total());
  double d = 0.0;
  for (std::size_t i = 0; i < tv.size(); ++i) {
    const std::uint64_t ki = tv.counts()[i];
    if (ki == 0) continue;
    if (tbar[i] == 0.0) return kInf;
    const double ti = static_cast<double>(ki) / k;
    d += ti * std::log2(ti / tbar[i]);
  }
  return d;
}

void check_alphabet(const TypeVector& tv, const Profile& tbar) {
  if (tv.size() != tbar.size()) {
    throw CategoryMismatch(
        "type vector and reference distribution have different lengths");
  }
}

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

TypeVector::TypeVector(std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)), total_(0) {
  if (counts_.empty()) {
    throw InvalidProfile("type vector needs at least one symbol");
  }
  for (auto c : counts_) total_ += c;
  if (total_ == 0) {
    throw InvalidProfile("type vector needs at least one observation");
  }
}

double log2_factorial(std::uint64_t m) {
  if (m <= kExactFactorialLimit) {
    return std::log2(static_cast<double>(exact_factorial(m)));
  }
  return std::lgamma(static_cast<double>(m) + 1.0) / std::numbers::ln2;
}

double log2_multinomial(const TypeVector& tv) {
  double v = log2_factorial(tv.total());
  for (auto ki : tv.counts()) v -= log2_factorial(ki);
  return v;
}

double k_times_entropy(const TypeVector& tv) {
  const double k = static_cast<double>(tv.total());
  double kh = 0.0;
  for (auto ki : tv.counts()) {
    if (ki > 0) {
      kh += static_cast<double>(ki) * std::log2(k / static_cast<double>(ki));
    }
  }
  return kh;
}

TypeReport class_size_check(const TypeVector& tv) {
  const double log2_size = log2_multinomial(tv);
  const double kh = k_times_entropy(tv);
  const double slack = static_cast<double>(tv.size()) *
                       std::log2(static_cast<double>(tv.total()) + 1.0);
  if (!(kh - slack <= log2_size && log2_size <= kh)) {
    throw std::logic_error("type class size escaped its sandwich bound");
  }
  return TypeReport{type_profile(tv, synthesized_labels(tv.size())), log2_size,
                    kh, kNaN, kNaN, kNaN};
}

double type_probability(const TypeVector& tv, const Profile& tbar) {
  check_alphabet(tv, tbar);
  double log2_prob = log2_multinomial(tv);
  for (std::size_t i = 0; i < tv.size(); ++i) {
    const std::uint64_t ki = tv.counts()[i];
    if (ki == 0) continue;
    if (tbar[i] == 0.0) return 0.0;
    log2_prob += static_cast<double>(ki) * std::log2(tbar[i]);
  }
  return std::exp2(log2_prob);
}

double divergence_exponent_gap(const TypeVector& tv, const Profile& tbar) {
  const double prob = type_probability(tv, tbar);
  if (prob == 0.0) {
    throw ZeroProbability("type has probability zero under the reference");
  }
  const double k = static_cast<double>(tv.total());
  return std::fabs(-std::log2(prob) / k - type_divergence(tv, tbar));
}

std::vector<TypeVector> enumerate_types(std::size_t n, std::uint64_t k) {
  if (n < 1 || n > kMaxAlphabet || k < 1 || k > kMaxSamples) {
    throw RegimeExceeded("exhaustive enumeration needs 1 <= n <= 6 and "
                         "1 <= k <= 30");
  }
  if (composition_count(n, k) > kMaxCompositions) {
    throw RegimeExceeded("enumeration would exceed the composition cap");
  }
  std::vector<TypeVector> out;
  out.reserve(composition_count(n, k));
  std::vector<std::uint64_t> current(n, 0);
  // Ascending lexicographic: fill position `pos` with 0..remaining and
  // recurse; the final position takes whatever is left.
  auto emit = [&](auto&& self, std::size_t pos, std::uint64_t remaining) -> void {
    if (pos + 1 == n) {
      current[pos] = remaining;
      out.emplace_back(current);
      return;
    }
    for (std::uint64_t v = 0; v <= remaining; ++v) {
      current[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  emit(emit, 0, k);
  return out;
}

Profile mean_type(const Profile& tbar, std::uint64_t k) {
  const std::size_t n = tbar.size();
  const auto types = enumerate_types(n, k);
  std::vector<KahanSum> acc(n);
  for (const TypeVector& tv : types) {
    const double prob = type_probability(tv, tbar);
    for (std::size_t i = 0; i < n; ++i) {
      acc[i].add(prob * (static_cast<double>(tv.counts()[i]) /
                         static_cast<double>(k)));
    }
  }
  std::vector<double> pmf(n);
  for (std::size_t i = 0; i < n; ++i) pmf[i] = acc[i].sum;
  return Profile(tbar.categories(), std::move(pmf));
}

TypeReport type_report(const TypeVector& tv, const Profile& tbar) {
  check_alphabet(tv, tbar);
  TypeReport report{type_profile(tv, tbar.categories()), log2_multinomial(tv),
                    k_times_entropy(tv), -kInf, kInf, kNaN};
  const double prob = type_probability(tv, tbar);
  const double k = static_cast<double>(tv.total());
  report.divergence_exponent = k * type_divergence(tv, tbar);
  if (prob > 0.0) {
    report.exact_log2_prob = std::log2(prob);
    report.gap_per_symbol =
        std::fabs(-report.exact_log2_prob / k - type_divergence(tv, tbar));
  }
  return report;
}

}  // namespace queryforge
