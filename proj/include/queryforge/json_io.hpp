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

#ifndef QUERYFORGE_JSON_IO_H_
#define QUERYFORGE_JSON_IO_H_

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "queryforge/optimizer.hpp"
#include "queryforge/profile.hpp"
#include "queryforge/stream_sim.hpp"
#include "queryforge/types_lab.hpp"

namespace queryforge {

// Field order in emitted documents is stable, so identical inputs produce
// byte-identical output.
using Json = nlohmann::ordered_json;

/// Nearest double to x printed at 12 significant digits. All numeric output
/// passes through this so emitted documents are byte-stable fixtures.
double round_sig12(double x);

/// x formatted with "%.12g".
std::string format_sig12(double x);

// Profile file format: {"categories": ["health", ...], "pmf": [0.25, ...]}.
// Loading canonicalizes category order; writing rounds to 12 significant
// digits.
Profile profile_from_json(const Json& j);
Json profile_to_json(const Profile& p);
Profile load_profile(const std::string& path);

// CategoryCounts file format: {"categories": [...], "counts": [3, 1, ...]}.
CategoryCounts counts_from_json(const Json& j);
Json counts_to_json(const CategoryCounts& c);
CategoryCounts load_counts(const std::string& path);

/// Simulation config document: q, r, rho, total_queries, seed, plus the
/// optional exact_count flag and optional population profile used for the
/// measured-risk column of the report.
struct SimulationInput {
  SimulationConfig cfg;
  std::optional<Profile> population;
};

SimulationInput sim_input_from_json(const Json& j);
SimulationInput load_sim_input(const std::string& path);

Json tradeoff_point_to_json(const TradeoffPoint& point);
Json solve_report_to_json(const SolveReport& report);

/// Curve CSV: header "rho,risk_bits,lambda" then one row per grid point at
/// 12 significant digits.
std::string curve_to_csv(const std::vector<TradeoffPoint>& points);
Json curve_to_json(const std::vector<TradeoffPoint>& points,
                   const std::vector<std::string>& categories);

Json convergence_report_to_json(const ConvergenceReport& report);

Json type_report_to_json(const TypeVector& tv, const TypeReport& report);

/// One JSON Lines record: {"seq": 0, "category": "health", "forged": false}.
std::string event_to_jsonl(const QueryEvent& event,
                           const std::vector<std::string>& categories);

}  // namespace queryforge

#endif  // QUERYFORGE_JSON_IO_H_
