// Copyright 2026 The forgeplan Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Consolidation-vs-baseline benchmarking, parameter sweeps and their CSV
// serialization, plus the solution document format. All arithmetic behind a
// CSV row lives here (or deeper); the CLI only formats and writes.

#ifndef FORGEPLAN_REPORT_HPP
#define FORGEPLAN_REPORT_HPP

#include <charconv>
#include <string>
#include <vector>

#include <json.hpp>

#include "forgeplan/instgen.hpp"
#include "forgeplan/solver.hpp"

namespace forgeplan {

inline std::string csv_number(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string csv_number(const std::optional<double>& v) {
  return v ? csv_number(*v) : std::string("undef");
}

// ---------------------------------------------------------------------------
// Benchmark rows (Table-2 style): every value is a with/without ratio except
// the absolute cost columns.

struct BenchRow {
  std::size_t parts = 0;
  std::size_t forgings = 0;
  RatioRecord ratios;
  CostBreakdown with_costs;
  CostBreakdown without_costs;
  SolveStatus status = SolveStatus::kOptimal;
  double wall_time_s = 0.0;
};

inline BenchRow bench_row(const Instance& instance, const SolveResult& with,
                          const Solution& without) {
  BenchRow row;
  row.parts = instance.parts.size();
  row.forgings = instance.forgings.size();
  row.ratios = ratios(with.solution.costs, with.solution.selected.size(),
                      without.costs, without.selected.size(),
                      instance.forgings.size());
  row.with_costs = with.solution.costs;
  row.without_costs = without.costs;
  row.status = with.status;
  row.wall_time_s = with.wall_time_s;
  return row;
}

inline BenchRow run_bench(const Instance& instance, const SolveConfig& config = {}) {
  Solution without = baseline_no_consolidation(instance);
  SolveResult with = solve(instance, config);
  verify(instance, with.solution);
  return bench_row(instance, with, without);
}

inline std::string bench_csv_header() {
  return "parts,forgings,consolidated,forging_cost,machining_cost,holding_cost,"
         "total_cost,time_s,status";
}

inline std::string bench_csv_row(const BenchRow& row) {
  std::string out;
  out += std::to_string(row.parts) + ",";
  out += std::to_string(row.forgings) + ",";
  out += csv_number(row.ratios.consolidated) + ",";
  out += csv_number(row.ratios.forging_cost) + ",";
  out += csv_number(row.ratios.machining_cost) + ",";
  out += csv_number(row.ratios.holding_cost) + ",";
  out += csv_number(row.ratios.total_cost) + ",";
  out += csv_number(row.wall_time_s) + ",";
  out += status_name(row.status);
  return out;
}

// ---------------------------------------------------------------------------
// Sensitivity sweeps

enum class SweepKind { kFixedCost, kOptions, kDiscount, kHolding };

inline const char* sweep_kind_name(SweepKind k) {
  switch (k) {
    case SweepKind::kFixedCost: return "fixed-cost";
    case SweepKind::kOptions: return "options";
    case SweepKind::kDiscount: return "discount";
    case SweepKind::kHolding: return "holding";
  }
  return "?";
}

inline SweepKind parse_sweep_kind(const std::string& name) {
  if (name == "fixed-cost") return SweepKind::kFixedCost;
  if (name == "options") return SweepKind::kOptions;
  if (name == "discount") return SweepKind::kDiscount;
  if (name == "holding") return SweepKind::kHolding;
  throw ValidationError("unknown sweep kind '" + name + "'");
}

inline std::vector<double> default_sweep_values(SweepKind kind) {
  switch (kind) {
    case SweepKind::kFixedCost:
    case SweepKind::kHolding: return {1, 2, 3, 4, 5};
    case SweepKind::kOptions: return {2, 3, 4, 5, 6};
    case SweepKind::kDiscount: return {0, 1, 2, 3};
  }
  return {};
}

inline GenSpec sweep_point_spec(SweepKind kind, GenSpec base, double value) {
  switch (kind) {
    case SweepKind::kFixedCost:
      base.multipliers.forging_fixed_cost = value;
      break;
    case SweepKind::kOptions:
      base.options_per_part = static_cast<int>(value);
      break;
    case SweepKind::kDiscount:
      base.multipliers.forging_discount = value;  // fractions capped at 0.5
      break;
    case SweepKind::kHolding:
      base.multipliers.holding_cost = value;
      break;
  }
  return base;
}

struct SweepPoint {
  double value = 0.0;
  BenchRow row;
};

struct SweepReport {
  SweepKind kind = SweepKind::kFixedCost;
  std::vector<SweepPoint> points;  // one per sweep value, in input order
};

inline SweepReport run_sweep(SweepKind kind, const GenSpec& base,
                             const std::vector<double>& values,
                             const SolveConfig& config = {}) {
  if (values.empty()) throw ValidationError("sweep: no values");
  SweepReport report;
  report.kind = kind;
  for (double value : values) {
    GenSpec spec = sweep_point_spec(kind, base, value);
    Instance instance = generate(spec);
    report.points.push_back({value, run_bench(instance, config)});
  }
  return report;
}

inline std::string sweep_csv_header() {
  return "kind,value,consolidated,forging_cost,machining_cost,holding_cost,"
         "total_cost,with_machining,with_forging,with_inventory,with_total,"
         "without_machining,without_forging,without_inventory,without_total,"
         "time_s,status";
}

inline std::string sweep_csv_row(SweepKind kind, const SweepPoint& point) {
  const BenchRow& row = point.row;
  std::string out;
  out += std::string(sweep_kind_name(kind)) + ",";
  out += csv_number(point.value) + ",";
  out += csv_number(row.ratios.consolidated) + ",";
  out += csv_number(row.ratios.forging_cost) + ",";
  out += csv_number(row.ratios.machining_cost) + ",";
  out += csv_number(row.ratios.holding_cost) + ",";
  out += csv_number(row.ratios.total_cost) + ",";
  out += csv_number(row.with_costs.machining) + ",";
  out += csv_number(row.with_costs.forging) + ",";
  out += csv_number(row.with_costs.inventory) + ",";
  out += csv_number(row.with_costs.total) + ",";
  out += csv_number(row.without_costs.machining) + ",";
  out += csv_number(row.without_costs.forging) + ",";
  out += csv_number(row.without_costs.inventory) + ",";
  out += csv_number(row.without_costs.total) + ",";
  out += csv_number(row.wall_time_s) + ",";
  out += status_name(row.status);
  return out;
}

// ---------------------------------------------------------------------------
// Solution documents

inline constexpr const char* kSolutionSchema = "forgeplan-solution-v1";

inline std::string save_solution(const Solution& solution,
                                 const SolveResult* result = nullptr) {
  using io_detail::json;
  json doc;
  doc["schema"] = kSolutionSchema;
  if (result != nullptr) {
    doc["status"] = status_name(result->status);
    doc["lower_bound"] = result->lower_bound;
    doc["gap"] = result->gap();
    doc["node_count"] = result->node_count;
    doc["wall_time_s"] = result->wall_time_s;
  }
  doc["selected"] = solution.selected;
  doc["assignment"] = json::array();
  for (const auto& [part, forging] : solution.assignment)
    doc["assignment"].push_back({{"part", part}, {"forging", forging}});
  doc["discount_level"] = json::array();
  for (const auto& [forging, level] : solution.discount_level)
    doc["discount_level"].push_back({{"forging", forging}, {"level", level}});
  doc["costs"] = {{"machining", solution.costs.machining},
                  {"forging", solution.costs.forging},
                  {"inventory", solution.costs.inventory},
                  {"total", solution.costs.total}};
  return doc.dump(2) + "\n";
}

inline Solution load_solution(const std::string& text) {
  using io_detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("solution document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("$: expected an object");
  io_detail::reject_unknown(doc, "$",
                            {"schema", "status", "lower_bound", "gap",
                             "node_count", "wall_time_s", "selected",
                             "assignment", "discount_level", "costs"});
  const json& schema = io_detail::field(doc, "$", "schema");
  if (!schema.is_string() || schema.get<std::string>() != kSolutionSchema)
    throw ParseError("$.schema: expected \"" + std::string(kSolutionSchema) + "\"");

  Solution sol;
  for (const auto& v : io_detail::field(doc, "$", "selected"))
    sol.selected.push_back(static_cast<int>(io_detail::integer(v, "$.selected[]")));
  for (const auto& e : io_detail::field(doc, "$", "assignment")) {
    io_detail::reject_unknown(e, "$.assignment[]", {"part", "forging"});
    sol.assignment[static_cast<int>(
        io_detail::integer(io_detail::field(e, "$.assignment[]", "part"),
                           "$.assignment[].part"))] =
        static_cast<int>(io_detail::integer(
            io_detail::field(e, "$.assignment[]", "forging"),
            "$.assignment[].forging"));
  }
  for (const auto& e : io_detail::field(doc, "$", "discount_level")) {
    io_detail::reject_unknown(e, "$.discount_level[]", {"forging", "level"});
    sol.discount_level[static_cast<int>(
        io_detail::integer(io_detail::field(e, "$.discount_level[]", "forging"),
                           "$.discount_level[].forging"))] =
        static_cast<int>(io_detail::integer(
            io_detail::field(e, "$.discount_level[]", "level"),
            "$.discount_level[].level"));
  }
  const json& costs = io_detail::field(doc, "$", "costs");
  io_detail::reject_unknown(costs, "$.costs",
                            {"machining", "forging", "inventory", "total"});
  sol.costs.machining =
      io_detail::number(io_detail::field(costs, "$.costs", "machining"),
                        "$.costs.machining");
  sol.costs.forging = io_detail::number(
      io_detail::field(costs, "$.costs", "forging"), "$.costs.forging");
  sol.costs.inventory = io_detail::number(
      io_detail::field(costs, "$.costs", "inventory"), "$.costs.inventory");
  sol.costs.total = io_detail::number(io_detail::field(costs, "$.costs", "total"),
                                      "$.costs.total");
  return sol;
}

}  // namespace forgeplan

#endif  // FORGEPLAN_REPORT_HPP
