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

#include "queryforge/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace queryforge {

namespace {

Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing required field \"") + key + "\"");
  }
  return j.at(key);
}

std::vector<std::string> string_array(const Json& j, const char* key) {
  const Json& a = require(j, key);
  if (!a.is_array()) {
    throw ParseError(std::string("field \"") + key + "\" must be an array");
  }
  std::vector<std::string> out;
  out.reserve(a.size());
  for (const auto& v : a) {
    if (!v.is_string()) {
      throw ParseError(std::string("field \"") + key +
                       "\" must contain strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<double> number_array(const Json& j, const char* key) {
  const Json& a = require(j, key);
  if (!a.is_array()) {
    throw ParseError(std::string("field \"") + key + "\" must be an array");
  }
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& v : a) {
    if (!v.is_number()) {
      throw ParseError(std::string("field \"") + key +
                       "\" must contain numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

// Finite values pass through round_sig12; infinities become the strings
// "inf" / "-inf" since JSON has no number for them.
Json json_number(double x) {
  if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
  if (std::isnan(x)) return Json(nullptr);
  return Json(round_sig12(x));
}

Json pmf_array(const std::vector<double>& values) {
  Json a = Json::array();
  for (double v : values) a.push_back(json_number(v));
  return a;
}

}  // namespace

double round_sig12(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string format_sig12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

Profile profile_from_json(const Json& j) {
  return canonicalized(
      Profile(string_array(j, "categories"), number_array(j, "pmf")));
}

Json profile_to_json(const Profile& p) {
  Json j;
  j["categories"] = p.categories();
  j["pmf"] = pmf_array(p.pmf());
  return j;
}

Profile load_profile(const std::string& path) {
  return profile_from_json(parse_file(path));
}

CategoryCounts counts_from_json(const Json& j) {
  const Json& a = require(j, "counts");
  if (!a.is_array()) {
    throw ParseError("field \"counts\" must be an array");
  }
  std::vector<std::uint64_t> counts;
  counts.reserve(a.size());
  for (const auto& v : a) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ParseError("counts must be nonnegative integers");
    }
    counts.push_back(v.get<std::uint64_t>());
  }
  return canonicalized(
      CategoryCounts(string_array(j, "categories"), std::move(counts)));
}

Json counts_to_json(const CategoryCounts& c) {
  Json j;
  j["categories"] = c.categories();
  j["counts"] = c.counts();
  return j;
}

CategoryCounts load_counts(const std::string& path) {
  return counts_from_json(parse_file(path));
}

SimulationInput sim_input_from_json(const Json& j) {
  const Json& total = require(j, "total_queries");
  const Json& seed = require(j, "seed");
  if (!total.is_number_integer() || total.get<std::int64_t>() < 1) {
    throw ParseError("total_queries must be a positive integer");
  }
  if (!seed.is_number_integer()) {
    throw ParseError("seed must be an integer");
  }
  const Json& rho = require(j, "rho");
  if (!rho.is_number()) {
    throw ParseError("rho must be a number");
  }
  bool exact_count = false;
  if (j.contains("exact_count")) {
    if (!j.at("exact_count").is_boolean()) {
      throw ParseError("exact_count must be a boolean");
    }
    exact_count = j.at("exact_count").get<bool>();
  }
  SimulationInput input{
      SimulationConfig{profile_from_json(require(j, "q")),
                       profile_from_json(require(j, "r")),
                       Redundancy(rho.get<double>()),
                       total.get<std::uint64_t>(), seed.get<std::uint64_t>(),
                       exact_count},
      std::nullopt};
  if (j.contains("population")) {
    input.population = profile_from_json(j.at("population"));
  }
  return input;
}

SimulationInput load_sim_input(const std::string& path) {
  return sim_input_from_json(parse_file(path));
}

Json tradeoff_point_to_json(const TradeoffPoint& point) {
  Json j;
  j["rho"] = json_number(point.rho.value());
  j["risk_bits"] = json_number(point.risk_bits);
  j["lambda"] = json_number(point.lambda);
  j["solver_iters"] = point.solver_iters;
  j["r_opt"] = pmf_array(point.r_opt.pmf());
  j["s_opt"] = pmf_array(point.s_opt.pmf());
  return j;
}

Json solve_report_to_json(const SolveReport& report) {
  Json j;
  j["kkt_stationarity_residual"] = json_number(report.kkt_stationarity_residual);
  j["primal_feasibility_residual"] =
      json_number(report.primal_feasibility_residual);
  j["complementary_slackness_residual"] =
      json_number(report.complementary_slackness_residual);
  j["oracle_gap_bits"] = report.oracle_gap_bits
                             ? json_number(*report.oracle_gap_bits)
                             : Json(nullptr);
  return j;
}

std::string curve_to_csv(const std::vector<TradeoffPoint>& points) {
  std::ostringstream out;
  out << "rho,risk_bits,lambda\n";
  for (const TradeoffPoint& point : points) {
    out << format_sig12(point.rho.value()) << ','
        << format_sig12(point.risk_bits) << ',' << format_sig12(point.lambda)
        << '\n';
  }
  return out.str();
}

Json curve_to_json(const std::vector<TradeoffPoint>& points,
                   const std::vector<std::string>& categories) {
  Json j;
  j["categories"] = categories;
  Json arr = Json::array();
  for (const TradeoffPoint& point : points) {
    arr.push_back(tradeoff_point_to_json(point));
  }
  j["points"] = std::move(arr);
  return j;
}

Json convergence_report_to_json(const ConvergenceReport& report) {
  Json j;
  j["n_observed"] = report.n_observed;
  j["empirical"] = profile_to_json(report.empirical);
  j["div_to_apparent"] = json_number(report.div_to_apparent);
  j["measured_risk"] = json_number(report.measured_risk);
  return j;
}

Json type_report_to_json(const TypeVector& tv, const TypeReport& report) {
  Json j;
  j["counts"] = tv.counts();
  j["t"] = profile_to_json(report.t);
  j["exact_log2_class_size"] = json_number(report.exact_log2_class_size);
  j["entropy_approx"] = json_number(report.entropy_approx);
  j["exact_log2_prob"] = json_number(report.exact_log2_prob);
  j["divergence_exponent"] = json_number(report.divergence_exponent);
  j["gap_per_symbol"] = json_number(report.gap_per_symbol);
  return j;
}

std::string event_to_jsonl(const QueryEvent& event,
                           const std::vector<std::string>& categories) {
  Json j;
  j["seq"] = event.seq;
  j["category"] = categories.at(event.category_index);
  j["forged"] = event.forged;
  return j.dump();
}

}  // namespace queryforge
