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
// Domain model for two-tier procurement with forging consolidation.
//
// A plant orders M_i units of each machined part i (plus P_i units of
// inventory coverage) and chooses, per part, one forging k it is machined
// from. Each unit of part i consumes L_ik units of forging k. Total cost
// splits into three components:
//
//   machining  C_M = sum_i [ CMF_i + (1 - D_i) * M_i * (CMU_ik + CMT_ik) ]
//   forging    C_F = sum_{k used} [ CFF_k + (CFU_k + CFT_k)(1 - d_k) * m_k ]
//   inventory  C_I = sum_i CFH_k * L_ik * P_i
//                  + sum_{k used} (CFU_k + CFT_k)(1 - d_k) * p_k
//
// where m_k / p_k are the order / inventory forging quantities pooled onto
// k, d_k the quantity discount earned by the pooled total m_k + p_k, and
// D_i the part's own discount, fixed by its order quantity M_i alone.

#ifndef FORGEPLAN_CORE_HPP
#define FORGEPLAN_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "forgeplan/rational.hpp"

namespace forgeplan {

// Absolute tolerance for cost comparisons, uniform across the evaluator,
// the brute-force oracle and the solver.
inline constexpr double kCostTolerance = 1e-6;

// ---------------------------------------------------------------------------
// Types

// One step of a piecewise quantity discount. Level d applies to quantities
// in the semi-closed interval (threshold_d, threshold_{d+1}]; the first
// interval is closed at 0 and the last is unbounded above.
struct DiscountLevel {
  double threshold = 0.0;
  double discount = 0.0;  // fraction in [0, 1)
};

struct DiscountSchedule {
  std::vector<DiscountLevel> levels;

  std::size_t size() const { return levels.size(); }
  double discount(std::size_t level) const { return levels[level].discount; }
  double threshold(std::size_t level) const { return levels[level].threshold; }

  static DiscountSchedule flat() { return DiscountSchedule{{{0.0, 0.0}}}; }

  void validate(const std::string& where) const {
    if (levels.empty())
      throw ValidationError(where + ": discount schedule has no levels");
    if (levels.front().threshold != 0.0)
      throw ValidationError(where + ": first discount threshold must be 0");
    for (std::size_t d = 0; d < levels.size(); ++d) {
      const auto& lv = levels[d];
      if (!(lv.discount >= 0.0 && lv.discount < 1.0))
        throw ValidationError(where + ": discount fraction outside [0,1)");
      if (d > 0) {
        if (!(lv.threshold > levels[d - 1].threshold))
          throw ValidationError(where + ": thresholds not strictly increasing");
        if (lv.discount < levels[d - 1].discount)
          throw ValidationError(where + ": discounts decrease with level");
      }
    }
  }
};

// One admissible way to machine a part: the forging it starts from, how many
// forging units one part consumes, and the per-unit machining and transport
// cost of that route.
struct MachiningOption {
  int forging = 0;              // forging id
  Rational units_per_part{1};   // L_ik
  double machining_cost = 0.0;  // CMU_ik, per part unit
  double transport_cost = 0.0;  // CMT_ik, per part unit

  double unit_cost() const { return machining_cost + transport_cost; }
};

struct Part {
  int id = 0;
  std::int64_t order_quantity = 0;      // M_i
  std::int64_t inventory_quantity = 0;  // P_i
  double fixed_order_cost = 0.0;        // CMF_i
  DiscountSchedule discounts;
  std::vector<MachiningOption> options;
};

struct Forging {
  int id = 0;
  double fixed_order_cost = 0.0;  // CFF_k
  double unit_cost = 0.0;         // CFU_k
  double transport_cost = 0.0;    // CFT_k
  double holding_cost = 0.0;      // CFH_k
  DiscountSchedule discounts;

  double variable_unit_cost() const { return unit_cost + transport_cost; }
};

struct Instance {
  std::vector<Part> parts;
  std::vector<Forging> forgings;

  std::unordered_map<int, std::size_t> forging_index() const {
    std::unordered_map<int, std::size_t> ix;
    ix.reserve(forgings.size());
    for (std::size_t k = 0; k < forgings.size(); ++k) ix.emplace(forgings[k].id, k);
    return ix;
  }
  std::unordered_map<int, std::size_t> part_index() const {
    std::unordered_map<int, std::size_t> ix;
    ix.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) ix.emplace(parts[i].id, i);
    return ix;
  }

  void validate() const;
};

struct CostBreakdown {
  double machining = 0.0;  // C_M
  double forging = 0.0;    // C_F
  double inventory = 0.0;  // C_I
  double total = 0.0;      // C_M + C_F + C_I
};

// A consolidation decision: which forgings stay in the consolidated set and
// which forging each part is machined from. `discount_level[k]` is the level
// whose interval contains the quantity pooled onto k.
struct Solution {
  std::vector<int> selected;          // forging ids, sorted ascending
  std::map<int, int> assignment;      // part id -> forging id
  std::map<int, int> discount_level;  // forging id -> applied level
  CostBreakdown costs;
};

// ---------------------------------------------------------------------------
// Discount semantics

// Level of the interval (Q_d, Q_{d+1}] containing q; q = 0 maps to level 0.
inline std::size_t discount_level_for_quantity(const DiscountSchedule& schedule,
                                               const Rational& q) {
  std::size_t level = 0;
  for (std::size_t d = schedule.size(); d-- > 1;) {
    if (q.greater_than(schedule.threshold(d))) { level = d; break; }
  }
  return level;
}

struct DiscountLookup {
  std::size_t level;
  double discount;
};

inline DiscountLookup discount_for_quantity(const DiscountSchedule& schedule,
                                            const Rational& q) {
  std::size_t level = discount_level_for_quantity(schedule, q);
  return {level, schedule.discount(level)};
}

// Part discounts depend only on the part's own order quantity, so they are
// fixed before any consolidation decision is made. Inventory is held as
// forgings, not parts, and does not enter here.
inline double precompute_part_discount(const Part& part) {
  return discount_for_quantity(part.discounts, Rational(part.order_quantity)).discount;
}

// ---------------------------------------------------------------------------
// Validation

inline void Instance::validate() const {
  std::unordered_map<int, std::size_t> fix;
  for (std::size_t k = 0; k < forgings.size(); ++k) {
    const Forging& f = forgings[k];
    if (!fix.emplace(f.id, k).second)
      throw ValidationError("forging id " + std::to_string(f.id) + " duplicated");
    if (f.fixed_order_cost < 0 || f.unit_cost < 0 || f.transport_cost < 0 ||
        f.holding_cost < 0)
      throw ValidationError("forging " + std::to_string(f.id) + ": negative cost");
    f.discounts.validate("forging " + std::to_string(f.id));
  }
  std::unordered_map<int, bool> pix;
  for (const Part& p : parts) {
    const std::string where = "part " + std::to_string(p.id);
    if (!pix.emplace(p.id, true).second)
      throw ValidationError("part id " + std::to_string(p.id) + " duplicated");
    if (p.order_quantity <= 0)
      throw ValidationError(where + ": order quantity must be positive");
    if (p.inventory_quantity < 0)
      throw ValidationError(where + ": inventory quantity must be non-negative");
    if (p.fixed_order_cost < 0)
      throw ValidationError(where + ": negative fixed cost");
    p.discounts.validate(where);
    if (p.options.empty())
      throw ValidationError(where + ": no machining options");
    std::unordered_map<int, bool> seen;
    for (const MachiningOption& o : p.options) {
      if (!fix.count(o.forging))
        throw ValidationError(where + ": option references unknown forging " +
                              std::to_string(o.forging));
      if (!seen.emplace(o.forging, true).second)
        throw ValidationError(where + ": duplicate option for forging " +
                              std::to_string(o.forging));
      if (!(o.units_per_part > Rational(0)))
        throw ValidationError(where + ": units per part must be positive");
      if (o.machining_cost < 0 || o.transport_cost < 0)
        throw ValidationError(where + ": negative option cost");
    }
  }
}

// ---------------------------------------------------------------------------
// Cost evaluation

// Per-forging order/inventory quantities pooled by an assignment.
struct ForgingUsage {
  Rational order_quantity;      // m_k = sum L_ik * M_i over assigned parts
  Rational inventory_quantity;  // p_k = sum L_ik * P_i
  Rational combined() const { return order_quantity + inventory_quantity; }
};

// Reference evaluator. `selected` lists forging ids allowed to carry load;
// `assignment` maps every part id to one of its options within `selected`.
inline CostBreakdown evaluate(const Instance& instance,
                              const std::vector<int>& selected,
                              const std::map<int, int>& assignment) {
  auto fix = instance.forging_index();
  std::unordered_map<int, bool> in_selected;
  for (int k : selected) {
    if (!fix.count(k))
      throw ValidationError("selected forging " + std::to_string(k) + " unknown");
    in_selected[k] = true;
  }

  std::unordered_map<int, ForgingUsage> usage;
  double machining = 0.0;
  double holding = 0.0;
  for (const Part& part : instance.parts) {
    auto it = assignment.find(part.id);
    if (it == assignment.end())
      throw ValidationError("uncovered part " + std::to_string(part.id));
    int k = it->second;
    if (!in_selected.count(k))
      throw ValidationError("part " + std::to_string(part.id) +
                            " assigned to non-selected forging " + std::to_string(k));
    const MachiningOption* opt = nullptr;
    for (const MachiningOption& o : part.options)
      if (o.forging == k) { opt = &o; break; }
    if (opt == nullptr)
      throw ValidationError("part " + std::to_string(part.id) +
                            " assigned to non-option forging " + std::to_string(k));

    double d_part = precompute_part_discount(part);
    machining += part.fixed_order_cost +
                 (1.0 - d_part) * static_cast<double>(part.order_quantity) * opt->unit_cost();

    const Forging& f = instance.forgings[fix.at(k)];
    holding += f.holding_cost * opt->units_per_part.to_double() *
               static_cast<double>(part.inventory_quantity);

    ForgingUsage& u = usage[k];
    u.order_quantity += opt->units_per_part * Rational(part.order_quantity);
    u.inventory_quantity += opt->units_per_part * Rational(part.inventory_quantity);
  }

  double forging_cost = 0.0;
  double inventory_purchase = 0.0;
  for (int k : selected) {
    const Forging& f = instance.forgings[fix.at(k)];
    auto it = usage.find(k);
    if (it == usage.end()) {
      forging_cost += f.fixed_order_cost;  // selected but idle: fixed cost only
      continue;
    }
    const ForgingUsage& u = it->second;
    double mult = 1.0 - discount_for_quantity(f.discounts, u.combined()).discount;
    forging_cost += f.fixed_order_cost +
                    f.variable_unit_cost() * mult * u.order_quantity.to_double();
    inventory_purchase +=
        f.variable_unit_cost() * mult * u.inventory_quantity.to_double();
  }

  CostBreakdown costs;
  costs.machining = machining;
  costs.forging = forging_cost;
  costs.inventory = holding + inventory_purchase;
  costs.total = costs.machining + costs.forging + costs.inventory;
  return costs;
}

// Builds the full Solution implied by an assignment: selected = image of the
// assignment, discount levels derived from pooled quantities, costs evaluated.
inline Solution solution_from_assignment(const Instance& instance,
                                         const std::map<int, int>& assignment) {
  auto fix = instance.forging_index();
  std::unordered_map<int, Rational> combined;
  for (const Part& part : instance.parts) {
    auto it = assignment.find(part.id);
    if (it == assignment.end())
      throw ValidationError("uncovered part " + std::to_string(part.id));
    const MachiningOption* opt = nullptr;
    for (const MachiningOption& o : part.options)
      if (o.forging == it->second) { opt = &o; break; }
    if (opt == nullptr)
      throw ValidationError("part " + std::to_string(part.id) +
                            " assigned to non-option forging " +
                            std::to_string(it->second));
    combined[it->second] +=
        opt->units_per_part *
        Rational(part.order_quantity + part.inventory_quantity);
  }

  Solution sol;
  sol.assignment = assignment;
  for (const auto& [k, q] : combined) {
    sol.selected.push_back(k);
    const Forging& f = instance.forgings[fix.at(k)];
    sol.discount_level[k] =
        static_cast<int>(discount_level_for_quantity(f.discounts, q));
  }
  std::sort(sol.selected.begin(), sol.selected.end());
  sol.costs = evaluate(instance, sol.selected, sol.assignment);
  return sol;
}

// No-consolidation benchmark: every part is machined from its cheapest
// option, ties broken by lowest forging id, with no cross-tier coordination.
inline Solution baseline_no_consolidation(const Instance& instance) {
  std::map<int, int> assignment;
  for (const Part& part : instance.parts) {
    const MachiningOption* best = nullptr;
    for (const MachiningOption& o : part.options) {
      if (best == nullptr || o.unit_cost() < best->unit_cost() ||
          (o.unit_cost() == best->unit_cost() && o.forging < best->forging))
        best = &o;
    }
    assignment[part.id] = best->forging;
  }
  return solution_from_assignment(instance, assignment);
}

// ---------------------------------------------------------------------------
// Benchmark ratios

// Component-wise with/without ratios. A ratio is absent when its baseline
// component is zero (the CSV layer prints an undefined marker).
struct RatioRecord {
  std::optional<double> consolidated;    // |selected with| / N
  std::optional<double> forging_cost;
  std::optional<double> machining_cost;
  std::optional<double> holding_cost;
  std::optional<double> total_cost;
  std::size_t selected_with = 0;
  std::size_t selected_without = 0;
};

inline RatioRecord ratios(const CostBreakdown& with_costs, std::size_t with_selected,
                          const CostBreakdown& without_costs,
                          std::size_t without_selected, std::size_t n_forgings) {
  auto safe = [](double num, double den) -> std::optional<double> {
    if (den == 0.0) return std::nullopt;
    return num / den;
  };
  RatioRecord r;
  r.selected_with = with_selected;
  r.selected_without = without_selected;
  r.consolidated = safe(static_cast<double>(with_selected),
                        static_cast<double>(n_forgings));
  r.forging_cost = safe(with_costs.forging, without_costs.forging);
  r.machining_cost = safe(with_costs.machining, without_costs.machining);
  r.holding_cost = safe(with_costs.inventory, without_costs.inventory);
  r.total_cost = safe(with_costs.total, without_costs.total);
  return r;
}

}  // namespace forgeplan

#endif  // FORGEPLAN_CORE_HPP
