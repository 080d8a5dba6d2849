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
// Index-flattened instance view shared by the oracle and the solver. Ids are
// replaced by positions and per-option cost contributions are precomputed,
// so evaluating one assignment is a single pass with no lookups.

#ifndef FORGEPLAN_COMPILED_HPP
#define FORGEPLAN_COMPILED_HPP

#include <span>
#include <vector>

#include "forgeplan/core.hpp"

namespace forgeplan::detail {

struct CompiledOption {
  int forging = 0;             // forging position
  Rational combined_quantity;  // L_ik (M_i + P_i)
  double combined_quantity_d = 0.0;
  double machining = 0.0;      // (1 - D_i) M_i (CMU + CMT)
  double holding = 0.0;        // CFH_k L_ik P_i
};

struct CompiledPart {
  int id = 0;
  std::size_t first_option = 0;
  std::size_t option_count = 0;
};

struct CompiledForging {
  int id = 0;
  double fixed = 0.0;      // CFF_k
  double unit_rate = 0.0;  // CFU_k + CFT_k
  const DiscountSchedule* schedule = nullptr;
};

class CompiledInstance {
 public:
  explicit CompiledInstance(const Instance& instance) : source_(&instance) {
    auto fix = instance.forging_index();
    forgings_.reserve(instance.forgings.size());
    for (const Forging& f : instance.forgings)
      forgings_.push_back({f.id, f.fixed_order_cost, f.variable_unit_cost(),
                           &f.discounts});
    parts_.reserve(instance.parts.size());
    for (const Part& p : instance.parts) {
      CompiledPart cp{p.id, options_.size(), p.options.size()};
      double d_part = precompute_part_discount(p);
      for (const MachiningOption& o : p.options) {
        std::size_t k = fix.at(o.forging);
        CompiledOption co;
        co.forging = static_cast<int>(k);
        co.combined_quantity =
            o.units_per_part * Rational(p.order_quantity + p.inventory_quantity);
        co.combined_quantity_d = co.combined_quantity.to_double();
        co.machining = (1.0 - d_part) * static_cast<double>(p.order_quantity) *
                       o.unit_cost();
        co.holding = instance.forgings[k].holding_cost *
                     o.units_per_part.to_double() *
                     static_cast<double>(p.inventory_quantity);
        options_.push_back(co);
      }
      parts_.push_back(cp);
      fixed_total_ += p.fixed_order_cost;
    }
  }

  const Instance& source() const { return *source_; }
  std::size_t part_count() const { return parts_.size(); }
  std::size_t forging_count() const { return forgings_.size(); }
  const CompiledPart& part(std::size_t i) const { return parts_[i]; }
  const CompiledForging& forging(std::size_t k) const { return forgings_[k]; }
  const CompiledOption& option(const CompiledPart& p, std::size_t o) const {
    return options_[p.first_option + o];
  }
  double fixed_total() const { return fixed_total_; }

  struct Scratch {
    std::vector<Rational> combined;
    std::vector<int> touched;
    std::vector<bool> is_touched;
  };
  Scratch make_scratch() const {
    return Scratch{std::vector<Rational>(forgings_.size()), {},
                   std::vector<bool>(forgings_.size(), false)};
  }

  // Total cost of assigning each part its choice[i]-th option.
  double evaluate_choice(std::span<const int> choice, Scratch& scratch) const {
    double total = fixed_total_;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const CompiledOption& o = options_[parts_[i].first_option + choice[i]];
      total += o.machining + o.holding;
      if (!scratch.is_touched[o.forging]) {
        scratch.is_touched[o.forging] = true;
        scratch.touched.push_back(o.forging);
        scratch.combined[o.forging] = o.combined_quantity;
      } else {
        scratch.combined[o.forging] += o.combined_quantity;
      }
    }
    for (int k : scratch.touched) {
      const CompiledForging& f = forgings_[k];
      double mult =
          1.0 -
          f.schedule->discount(discount_level_for_quantity(*f.schedule,
                                                           scratch.combined[k]));
      total += f.fixed + f.unit_rate * mult * scratch.combined[k].to_double();
      scratch.is_touched[k] = false;
    }
    scratch.touched.clear();
    return total;
  }

  std::map<int, int> choice_to_assignment(std::span<const int> choice) const {
    std::map<int, int> assignment;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const CompiledOption& o = options_[parts_[i].first_option + choice[i]];
      assignment[parts_[i].id] = forgings_[o.forging].id;
    }
    return assignment;
  }

  // (selected forging ids, part id -> forging id pairs) in canonical order,
  // for lexicographic tie-breaking among equal-cost assignments.
  using TieKey = std::pair<std::vector<int>, std::vector<std::pair<int, int>>>;
  TieKey tie_key(std::span<const int> choice) const {
    std::vector<int> selected;
    std::vector<bool> used(forgings_.size(), false);
    std::vector<std::pair<int, int>> assigned(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const CompiledOption& o = options_[parts_[i].first_option + choice[i]];
      used[o.forging] = true;
      assigned[i] = {parts_[i].id, forgings_[o.forging].id};
    }
    std::sort(assigned.begin(), assigned.end());
    for (std::size_t k = 0; k < forgings_.size(); ++k)
      if (used[k]) selected.push_back(forgings_[k].id);
    std::sort(selected.begin(), selected.end());
    return {std::move(selected), std::move(assigned)};
  }

 private:
  const Instance* source_;
  std::vector<CompiledPart> parts_;
  std::vector<CompiledOption> options_;
  std::vector<CompiledForging> forgings_;
  double fixed_total_ = 0.0;
};

}  // namespace forgeplan::detail

#endif  // FORGEPLAN_COMPILED_HPP
