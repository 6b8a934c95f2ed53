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

#ifndef QUERYFORGE_OPTIMIZER_H_
#define QUERYFORGE_OPTIMIZER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "queryforge/profile.hpp"

namespace queryforge {

/// One point of the privacy-redundancy tradeoff: the minimum achievable
/// risk at redundancy rho together with the minimizing forged profile.
struct TradeoffPoint {
  Redundancy rho;
  double risk_bits;
  Profile r_opt;
  Profile s_opt;  // mix(q, r_opt, rho)
  double lambda;  // water level: s_i = max{(1-rho) q_i, lambda p_i}
  int solver_iters;
};

/// Optimality certificate for a TradeoffPoint. All residuals are in bits
/// where dimensionful; a residual below 1e-6 on every row certifies the
/// solve. oracle_gap_bits is filled only when an independent oracle run
/// was compared against the point.
struct SolveReport {
  double kkt_stationarity_residual = 0.0;
  double primal_feasibility_residual = 0.0;
  double complementary_slackness_residual = 0.0;
  std::optional<double> oracle_gap_bits;

  static constexpr double kCertifiedTol = 1e-6;
  bool certified(double tol = kCertifiedTol) const;
};

/// Minimizes D((1-rho) q + rho r || p) over forged profiles r.
///
/// Reparameterized in the apparent profile s with constraints sum s = 1 and
/// s_i >= (1-rho) q_i, the optimum has the water-filling form
/// s_i = max{(1-rho) q_i, lambda p_i}, where the level lambda in [0, 1] is
/// the unique root of sum_i max{(1-rho) q_i, lambda p_i} = 1, located by
/// bisection to |sum - 1| < 1e-12 (at most 200 halvings). The objective is
/// convex on the affine slice, so this KKT point is the global minimum.
///
/// At rho = 0 every r is optimal (the mixture ignores r); by convention the
/// returned r_opt is p. Throws UnsupportedCategory when q has mass on a
/// category with p_i = 0, since the risk is then +infinity for every r.
TradeoffPoint solve(const Profile& q, const Profile& p, Redundancy rho);

/// Smallest redundancy at which the optimal risk reaches zero:
/// max(0, 1 - min_{i: q_i > 0} p_i / q_i). Returns 1 when q has mass
/// outside the support of p (zero risk is unattainable for rho < 1).
double critical_redundancy(const Profile& q, const Profile& p);

/// One solve per grid value. Grid values must be strictly increasing in
/// [0, 1); throws InvalidGrid otherwise.
std::vector<TradeoffPoint> tradeoff_curve(const Profile& q, const Profile& p,
                                          const std::vector<Redundancy>& grid);

/// Checks the KKT conditions of a solve output without trusting the solver:
///  - stationarity: max over {i : s_i > (1-rho) q_i + 1e-9} of
///    |log2(s_i / p_i) - log2 lambda|
///  - primal feasibility: max(|sum s - 1|, max_i ((1-rho) q_i - s_i)_+)
///  - complementary slackness: max_i min(s_i - (1-rho) q_i,
///    (log2 lambda - log2(s_i / p_i))_+)
/// Reports, never throws; inconsistent inputs surface as infinite
/// residuals. When oracle_risk_bits is supplied, oracle_gap_bits is set to
/// |point.risk_bits - oracle_risk_bits|.
SolveReport verify_kkt(const Profile& q, const Profile& p, Redundancy rho,
                       const TradeoffPoint& point,
                       std::optional<double> oracle_risk_bits = std::nullopt);

/// Independent cross-check solver: exponentiated-gradient (multiplicative
/// weights) iteration over r on the probability simplex, started from a
/// seeded interior point. Stops early once its Frank-Wolfe duality gap
/// certifies the risk within 1e-11 bits of optimal. Never used on the
/// production path; exists so the water-filling solve can be validated
/// against a method that shares none of its structure.
TradeoffPoint oracle_solve(const Profile& q, const Profile& p, Redundancy rho,
                           std::int64_t iterations, std::uint64_t seed);

}  // namespace queryforge

#endif  // QUERYFORGE_OPTIMIZER_H_
