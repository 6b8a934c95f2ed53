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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "queryforge/json_io.hpp"
#include "queryforge/metrics.hpp"
#include "queryforge/optimizer.hpp"
#include "queryforge/profile.hpp"
#include "queryforge/stream_sim.hpp"
#include "queryforge/types_lab.hpp"

namespace {

using namespace queryforge;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitInfeasible = 3;

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

// "start:stop:steps" -> `steps` evenly spaced redundancies from start to
// stop inclusive, with 0 <= start < stop < 1.
std::vector<Redundancy> parse_grid(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = spec.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos ||
      spec.find(':', second + 1) != std::string::npos) {
    throw InvalidGrid("grid must be start:stop:steps");
  }
  double start = 0.0;
  double stop = 0.0;
  long steps = 0;
  try {
    std::size_t used = 0;
    start = std::stod(spec.substr(0, first), &used);
    stop = std::stod(spec.substr(first + 1, second - first - 1), &used);
    steps = std::stol(spec.substr(second + 1), &used);
  } catch (const std::exception&) {
    throw InvalidGrid("grid values must be numeric");
  }
  if (!(start >= 0.0 && start < stop && stop < 1.0)) {
    throw InvalidGrid("grid needs 0 <= start < stop < 1");
  }
  if (steps < 1 || steps > 1000000) {
    throw InvalidGrid("grid step count out of range");
  }
  std::vector<Redundancy> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    grid.emplace_back(start);
    return grid;
  }
  for (long i = 0; i < steps; ++i) {
    grid.emplace_back(start + (stop - start) * static_cast<double>(i) /
                                  static_cast<double>(steps - 1));
  }
  return grid;
}

// File-level inputs may cover different category sets; comparisons happen
// over the sorted union with zero mass for absent categories. A category
// the user queries but the population lacks then surfaces as
// UnsupportedCategory instead of a mismatch error.
std::pair<Profile, Profile> load_aligned_pair(const std::string& user_path,
                                              const std::string& pop_path) {
  return align_union(load_profile(user_path), load_profile(pop_path));
}

int run_solve(const std::string& user_path, const std::string& pop_path,
              double rho_value, bool oracle_check, std::int64_t oracle_iters,
              std::uint64_t oracle_seed, const std::string& output) {
  const auto [q, p] = load_aligned_pair(user_path, pop_path);
  const Redundancy rho(rho_value);
  const TradeoffPoint point = solve(q, p, rho);
  std::optional<double> oracle_risk;
  if (oracle_check) {
    oracle_risk = oracle_solve(q, p, rho, oracle_iters, oracle_seed).risk_bits;
  }
  const SolveReport report = verify_kkt(q, p, rho, point, oracle_risk);
  Json j;
  j["categories"] = q.categories();
  Json point_json = tradeoff_point_to_json(point);
  for (auto& [key, value] : point_json.items()) j[key] = value;
  j["report"] = solve_report_to_json(report);
  write_output(j.dump(2) + "\n", output);
  return kExitOk;
}

int run_curve(const std::string& user_path, const std::string& pop_path,
              const std::string& grid_spec, const std::string& format,
              const std::string& output) {
  const auto [q, p] = load_aligned_pair(user_path, pop_path);
  const auto curve = tradeoff_curve(q, p, parse_grid(grid_spec));
  if (format == "json") {
    write_output(curve_to_json(curve, q.categories()).dump(2) + "\n", output);
  } else {
    write_output(curve_to_csv(curve), output);
  }
  return kExitOk;
}

int run_rho_crit(const std::string& user_path, const std::string& pop_path,
                 const std::string& output) {
  const auto [q, p] = load_aligned_pair(user_path, pop_path);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0 && p[i] == 0.0) {
      std::cerr << "warning: user category '" << q.categories()[i]
                << "' has no population mass; zero risk is unattainable for "
                   "any redundancy below 1\n";
      break;
    }
  }
  write_output(format_sig12(critical_redundancy(q, p)) + "\n", output);
  return kExitOk;
}

int run_simulate(const std::string& config_path, const std::string& pop_path,
                 std::optional<std::uint64_t> seed_override,
                 const std::string& stream_path, const std::string& output) {
  SimulationInput input = load_sim_input(config_path);
  if (!pop_path.empty()) {
    input.population = load_profile(pop_path);
  }
  if (!input.population) {
    throw ParseError(
        "a population profile is required (config field \"population\" or "
        "--population)");
  }
  auto [q, r] = align_union(input.cfg.q, input.cfg.r);
  auto [q2, p] = align_union(q, *input.population);
  auto [r2, p2] = align_union(r, p);
  SimulationConfig cfg{q2, r2, input.cfg.rho, input.cfg.total_queries,
                       seed_override.value_or(input.cfg.seed),
                       input.cfg.exact_count};
  const auto stream = generate_stream(cfg);
  if (!stream_path.empty()) {
    std::ofstream out(stream_path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + stream_path);
    for (const QueryEvent& event : stream) {
      out << event_to_jsonl(event, cfg.q.categories()) << '\n';
    }
  }
  const ConvergenceReport report =
      convergence_report(stream, cfg.q, cfg.r, cfg.rho, p2);
  write_output(convergence_report_to_json(report).dump(2) + "\n", output);
  return kExitOk;
}

int run_types(std::size_t n, std::uint64_t k, const std::string& tbar_path,
              const std::string& output) {
  Profile tbar = [&] {
    if (!tbar_path.empty()) {
      Profile loaded = load_profile(tbar_path);
      if (loaded.size() != n) {
        throw ParseError("reference distribution has " +
                         std::to_string(loaded.size()) +
                         " categories, expected " + std::to_string(n));
      }
      return loaded;
    }
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = "c" + std::to_string(i + 1);
    return Profile::uniform(std::move(labels));
  }();
  Json arr = Json::array();
  for (const TypeVector& tv : enumerate_types(n, k)) {
    arr.push_back(type_report_to_json(tv, type_report(tv, tbar)));
  }
  write_output(arr.dump(2) + "\n", output);
  return kExitOk;
}

int run_estimate(const std::string& counts_path, const std::string& output) {
  const Profile estimated = estimate_profile(load_counts(counts_path));
  write_output(profile_to_json(estimated).dump(2) + "\n", output);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Query-profile privacy toolkit: optimal query forgery, "
      "privacy-redundancy curves, and profile-convergence simulation"};
  app.require_subcommand(1);

  std::string user_path, pop_path, output, grid_spec, config_path;
  std::string stream_path, tbar_path, counts_path;
  std::string format = "csv";
  double rho_value = 0.0;
  bool oracle_check = false;
  std::int64_t oracle_iters = 200000;
  std::uint64_t oracle_seed = 1;
  std::optional<std::uint64_t> seed_override;
  std::size_t type_n = 0;
  std::uint64_t type_k = 0;
  int exit_code = kExitOk;

  auto* solve_cmd = app.add_subcommand(
      "solve", "Optimal forged profile and minimum risk at one redundancy");
  solve_cmd->add_option("--user", user_path, "User profile JSON")->required();
  solve_cmd->add_option("--population", pop_path, "Population profile JSON")
      ->required();
  solve_cmd->add_option("--rho", rho_value, "Redundancy in [0,1)")->required();
  solve_cmd->add_flag("--oracle-check", oracle_check,
                      "Also run the independent oracle and report the gap");
  solve_cmd->add_option("--oracle-iters", oracle_iters,
                        "Oracle iteration budget");
  solve_cmd->add_option("--oracle-seed", oracle_seed, "Oracle start seed");
  solve_cmd->add_option("--output", output, "Write to file instead of stdout");
  solve_cmd->callback([&] {
    exit_code = run_solve(user_path, pop_path, rho_value, oracle_check,
                          oracle_iters, oracle_seed, output);
  });

  auto* curve_cmd =
      app.add_subcommand("curve", "Privacy-redundancy tradeoff curve");
  curve_cmd->add_option("--user", user_path, "User profile JSON")->required();
  curve_cmd->add_option("--population", pop_path, "Population profile JSON")
      ->required();
  curve_cmd->add_option("--grid", grid_spec, "Redundancy grid start:stop:steps")
      ->required();
  curve_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  curve_cmd->add_option("--output", output, "Write to file instead of stdout");
  curve_cmd->callback([&] {
    exit_code = run_curve(user_path, pop_path, grid_spec, format, output);
  });

  auto* rho_crit_cmd = app.add_subcommand(
      "rho-crit", "Smallest redundancy with zero achievable risk");
  rho_crit_cmd->add_option("--user", user_path, "User profile JSON")
      ->required();
  rho_crit_cmd->add_option("--population", pop_path, "Population profile JSON")
      ->required();
  rho_crit_cmd->add_option("--output", output,
                           "Write to file instead of stdout");
  rho_crit_cmd->callback(
      [&] { exit_code = run_rho_crit(user_path, pop_path, output); });

  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Generate a query stream and report attacker convergence");
  simulate_cmd->add_option("--config", config_path, "SimulationConfig JSON")
      ->required();
  simulate_cmd->add_option("--population", pop_path,
                           "Population profile JSON (overrides config)");
  simulate_cmd->add_option("--seed", seed_override,
                           "Override the config seed");
  simulate_cmd->add_option("--stream", stream_path,
                           "Also write the event stream as JSON Lines");
  simulate_cmd->add_option("--output", output,
                           "Write to file instead of stdout");
  simulate_cmd->callback([&] {
    exit_code = run_simulate(config_path, pop_path, seed_override, stream_path,
                             output);
  });

  auto* types_cmd = app.add_subcommand(
      "types", "Exhaustive type-class reports for n symbols, k samples");
  types_cmd->add_option("--n", type_n, "Alphabet size (1..6)")->required();
  types_cmd->add_option("--k", type_k, "Sample count (1..30)")->required();
  types_cmd->add_option("--tbar", tbar_path,
                        "Reference profile JSON (default uniform)");
  types_cmd->add_option("--output", output, "Write to file instead of stdout");
  types_cmd->callback(
      [&] { exit_code = run_types(type_n, type_k, tbar_path, output); });

  auto* estimate_cmd = app.add_subcommand(
      "estimate", "Relative-frequency profile from category counts");
  estimate_cmd->add_option("--counts", counts_path, "CategoryCounts JSON")
      ->required();
  estimate_cmd->add_option("--output", output,
                           "Write to file instead of stdout");
  estimate_cmd->callback(
      [&] { exit_code = run_estimate(counts_path, output); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  } catch (const UnsupportedCategory& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return exit_code;
}
