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

#include "queryforge/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "queryforge/metrics.hpp"

namespace queryforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectionTol = 1e-12;
constexpr int kMaxBisectionIters = 200;
// Constraints tighter than this slack count as active in the KKT check.
constexpr double kActiveSlack = 1e-9;
// Frank-Wolfe gap below which the oracle stops early.
constexpr double kOracleGapTol = 1e-11;

void check_support(const Profile& q, const Profile& p) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0 && p[i] == 0.0) {
      throw UnsupportedCategory(
          "user profile has mass on category '" + q.categories()[i] +
          "' which the population profile lacks; risk is infinite for "
          "every forged profile");
    }
  }
}

// Largest water level consistent with s = q when rho = 0; also the
// rho -> 0+ limit of the bisection root.
double zero_rho_level(const Profile& q, const Profile& p) {
  double level = 1.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (p[i] > 0.0) level = std::min(level, q[i] / p[i]);
  }
  return std::max(level, 0.0);
}

double u01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace

bool SolveReport::certified(double tol) const {
  return kkt_stationarity_residual < tol &&
         primal_feasibility_residual < tol &&
         complementary_slackness_residual < tol;
}

TradeoffPoint solve(const Profile& q, const Profile& p, Redundancy rho) {
  check_same_categories(q, p);
  check_support(q, p);
  const double rho_v = rho.value();
  const std::size_t n = q.size();

  if (rho_v == 0.0) {
    // The mixture ignores r; every r attains the initial risk. Convention:
    // report the population profile as the minimizer.
    return TradeoffPoint{rho, kl_divergence(q, p), p, q, zero_rho_level(q, p),
                         0};
  }

  std::vector<double> floor_mass(n);
  for (std::size_t i = 0; i < n; ++i) floor_mass[i] = (1.0 - rho_v) * q[i];

  // g(level) = sum_i max{(1-rho) q_i, level p_i} - 1 is continuous and
  // nondecreasing with g(0) = -rho < 0 and g(1) >= 0, so the root lies in
  // [0, 1].
  auto excess = [&](double level) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += std::max(floor_mass[i], level * p[i]);
    }
    return sum - 1.0;
  };

  double lambda = 1.0;
  int iters = 0;
  if (excess(1.0) > kBisectionTol) {
    double lo = 0.0;
    double hi = 1.0;
    while (iters < kMaxBisectionIters) {
      lambda = 0.5 * (lo + hi);
      const double g = excess(lambda);
      ++iters;
      if (std::fabs(g) < kBisectionTol) break;
      if (g > 0.0) {
        hi = lambda;
      } else {
        lo = lambda;
      }
    }
  }
  // else: the level caps at 1 (rho >= critical redundancy) and s = p.

  // Forged mass per category, normalized on the simplex so r_opt is a valid
  // profile even when the bisection residual divided by rho would not be.
  std::vector<double> forged(n);
  double forged_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    forged[i] = std::max(0.0, lambda * p[i] - floor_mass[i]);
    forged_sum += forged[i];
  }
  Profile r_opt = p;
  if (forged_sum > 0.0) {
    for (double& w : forged) w /= forged_sum;
    r_opt = Profile(q.categories(), std::move(forged));
  }
  // forged_sum == 0 is reachable only when rho is below the bisection
  // tolerance; every r is then optimal to the same resolution.
  Profile s_opt = mix(q, r_opt, rho);
  return TradeoffPoint{rho, kl_divergence(s_opt, p), std::move(r_opt),
                       std::move(s_opt), lambda, iters};
}

double critical_redundancy(const Profile& q, const Profile& p) {
  check_same_categories(q, p);
  double min_ratio = kInf;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) min_ratio = std::min(min_ratio, p[i] / q[i]);
  }
  return std::max(0.0, 1.0 - min_ratio);
}

std::vector<TradeoffPoint> tradeoff_curve(const Profile& q, const Profile& p,
                                          const std::vector<Redundancy>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i - 1].value() < grid[i].value())) {
      throw InvalidGrid("grid values must be strictly increasing");
    }
  }
  std::vector<TradeoffPoint> curve;
  curve.reserve(grid.size());
  for (const Redundancy& rho : grid) {
    curve.push_back(solve(q, p, rho));
  }
  return curve;
}

SolveReport verify_kkt(const Profile& q, const Profile& p, Redundancy rho,
                       const TradeoffPoint& point,
                       std::optional<double> oracle_risk_bits) {
  SolveReport report;
  const std::size_t n = q.size();
  const auto& s = point.s_opt.pmf();
  if (p.size() != n || s.size() != n) {
    report.kkt_stationarity_residual = kInf;
    report.primal_feasibility_residual = kInf;
    report.complementary_slackness_residual = kInf;
    return report;
  }
  const double rho_v = rho.value();
  const double log2_lambda = std::log2(point.lambda);

  double stationarity = 0.0;
  double sum_s = 0.0;
  double floor_violation = 0.0;
  double slackness = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double floor_i = (1.0 - rho_v) * q[i];
    sum_s += s[i];
    floor_violation = std::max(floor_violation, floor_i - s[i]);
    if (p[i] == 0.0 && s[i] == 0.0) continue;  // dead category, no condition
    const double log_ratio = std::log2(s[i] / p[i]);
    if (s[i] > floor_i + kActiveSlack) {
      stationarity = std::max(stationarity, std::fabs(log_ratio - log2_lambda));
    }
    slackness = std::max(
        slackness, std::min(s[i] - floor_i, std::max(0.0, log2_lambda - log_ratio)));
  }
  report.kkt_stationarity_residual = stationarity;
  report.primal_feasibility_residual =
      std::max(std::fabs(sum_s - 1.0), floor_violation);
  report.complementary_slackness_residual = slackness;
  if (oracle_risk_bits) {
    report.oracle_gap_bits = std::fabs(point.risk_bits - *oracle_risk_bits);
  }
  return report;
}

TradeoffPoint oracle_solve(const Profile& q, const Profile& p, Redundancy rho,
                           std::int64_t iterations, std::uint64_t seed) {
  check_same_categories(q, p);
  check_support(q, p);
  if (iterations < 1) {
    throw Error("oracle_solve needs at least one iteration");
  }
  const double rho_v = rho.value();
  const std::size_t n = q.size();
  if (rho_v == 0.0) {
    return TradeoffPoint{rho, kl_divergence(q, p), p, q, zero_rho_level(q, p),
                         0};
  }

  // Seeded interior start restricted to the support of p; categories with
  // p_i = 0 also have q_i = 0 (support check) and must keep s_i = 0.
  std::mt19937_64 eng(seed);
  std::vector<double> r(n, 0.0);
  double start_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0) {
      r[i] = 0.5 + u01(eng);
      start_sum += r[i];
    }
  }
  for (double& v : r) v /= start_sum;

  // Exponentiated-gradient / multiplicative-weights iteration. With step
  // 1/L for the relative smoothness constant L = rho (natural log), the
  // update collapses to r_i <- r_i * p_i / s_i followed by normalization.
  // The Frank-Wolfe gap <g, r> - min_i g_i upper-bounds the suboptimality
  // of the current risk, so reaching kOracleGapTol certifies the result
  // without reference to any other solver.
  std::vector<double> s(n), grad(n);
  int used = 0;
  for (std::int64_t t = 0; t < iterations; ++t) {
    used = static_cast<int>(t + 1);
    double gap_inner = 0.0;
    double gap_min = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = (1.0 - rho_v) * q[i] + rho_v * r[i];
      if (p[i] == 0.0) continue;
      grad[i] = rho_v * std::log2(s[i] / p[i]);
      gap_inner += r[i] * grad[i];
      gap_min = std::min(gap_min, grad[i]);
    }
    if (gap_inner - gap_min < kOracleGapTol) break;
    double w_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = r[i] > 0.0 ? r[i] * p[i] / s[i] : 0.0;
      w_sum += r[i];
    }
    for (double& v : r) v /= w_sum;
  }

  Profile r_opt(q.categories(), std::move(r));
  Profile s_opt = mix(q, r_opt, rho);
  double level = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0) level = std::min(level, s_opt[i] / p[i]);
  }
  return TradeoffPoint{rho, kl_divergence(s_opt, p), std::move(r_opt),
                       std::move(s_opt), level, used};
}

}  // namespace queryforge
