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
// Solver-agnostic MILP container plus the linearized consolidation model.
//
// The consolidation objective is cubic in the naive form (z_k * x_ik * u_dk
// products select forging k's variable cost at discount level d). Products
// of binaries are replaced by auxiliary binaries
//
//   y_ikd = z_k * x_ik * u_dk      w_ikd = x_ik * u_dk
//
// with the standard and-constraints (y <= each factor, y >= sum - (n-1)),
// which admit exactly the product value at every binary point.

#ifndef FORGEPLAN_MILP_HPP
#define FORGEPLAN_MILP_HPP

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forgeplan/core.hpp"

namespace forgeplan {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense : char { LessEqual = 'L', GreaterEqual = 'G', Equal = 'E' };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool integral = false;
};

struct Constraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

// Minimization model over named variables. Term lists are canonicalized:
// sorted by variable index, duplicates accumulated, exact zeros dropped.
class LinearModel {
 public:
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  int add_variable(const std::string& name, double lower, double upper,
                   bool integral) {
    if (name.empty()) throw ValidationError("variable name empty");
    if (!var_index_.emplace(name, static_cast<int>(vars_.size())).second)
      throw ValidationError("duplicate variable name '" + name + "'");
    if (!(lower <= upper))
      throw ValidationError("variable '" + name + "': lower > upper");
    vars_.push_back(Variable{name, lower, upper, integral});
    return static_cast<int>(vars_.size()) - 1;
  }
  int add_binary(const std::string& name) { return add_variable(name, 0.0, 1.0, true); }

  int add_constraint(const std::string& name,
                     std::vector<std::pair<int, double>> terms, Sense sense,
                     double rhs) {
    if (name.empty()) throw ValidationError("constraint name empty");
    if (!con_index_.emplace(name, static_cast<int>(cons_.size())).second)
      throw ValidationError("duplicate constraint name '" + name + "'");
    cons_.push_back(Constraint{name, canonicalize(std::move(terms)), sense, rhs});
    return static_cast<int>(cons_.size()) - 1;
  }

  void set_objective(std::vector<std::pair<int, double>> terms, double offset) {
    objective_ = canonicalize(std::move(terms));
    objective_offset_ = offset;
  }

  std::size_t variable_count() const { return vars_.size(); }
  std::size_t constraint_count() const { return cons_.size(); }
  const Variable& variable(int j) const { return vars_.at(j); }
  const Constraint& constraint(int i) const { return cons_.at(i); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  const std::vector<std::pair<int, double>>& objective() const { return objective_; }
  double objective_offset() const { return objective_offset_; }

  int find_variable(const std::string& name) const {
    auto it = var_index_.find(name);
    return it == var_index_.end() ? -1 : it->second;
  }
  int find_constraint(const std::string& name) const {
    auto it = con_index_.find(name);
    return it == con_index_.end() ? -1 : it->second;
  }

  friend bool operator==(const LinearModel& a, const LinearModel& b) {
    auto var_eq = [](const Variable& x, const Variable& y) {
      return x.name == y.name && x.lower == y.lower && x.upper == y.upper &&
             x.integral == y.integral;
    };
    auto con_eq = [](const Constraint& x, const Constraint& y) {
      return x.name == y.name && x.terms == y.terms && x.sense == y.sense &&
             x.rhs == y.rhs;
    };
    return a.name_ == b.name_ &&
           std::equal(a.vars_.begin(), a.vars_.end(), b.vars_.begin(),
                      b.vars_.end(), var_eq) &&
           std::equal(a.cons_.begin(), a.cons_.end(), b.cons_.begin(),
                      b.cons_.end(), con_eq) &&
           a.objective_ == b.objective_ &&
           a.objective_offset_ == b.objective_offset_;
  }

 private:
  std::vector<std::pair<int, double>> canonicalize(
      std::vector<std::pair<int, double>> terms) const {
    std::map<int, double> acc;
    for (const auto& [j, c] : terms) {
      if (j < 0 || j >= static_cast<int>(vars_.size()))
        throw ValidationError("coefficient references unknown variable index " +
                              std::to_string(j));
      acc[j] += c;
    }
    std::vector<std::pair<int, double>> out;
    out.reserve(acc.size());
    for (const auto& [j, c] : acc)
      if (c != 0.0) out.emplace_back(j, c);
    return out;
  }

  std::string name_ = "MODEL";
  std::vector<Variable> vars_;
  std::vector<Constraint> cons_;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> con_index_;
  std::vector<std::pair<int, double>> objective_;
  double objective_offset_ = 0.0;
};

// ---------------------------------------------------------------------------
// Point checks (shared by the consistency harness and MPS replay)

struct PointCheck {
  bool feasible = true;
  double max_violation = 0.0;
  std::vector<std::string> violations;
};

inline double objective_value(const LinearModel& model,
                              std::span<const double> point) {
  double v = model.objective_offset();
  for (const auto& [j, c] : model.objective()) v += c * point[j];
  return v;
}

inline PointCheck check_point(const LinearModel& model,
                              std::span<const double> point,
                              double tolerance = kCostTolerance) {
  PointCheck result;
  auto flag = [&](double violation, const std::string& what) {
    result.max_violation = std::max(result.max_violation, violation);
    if (violation > tolerance) {
      result.feasible = false;
      result.violations.push_back(what);
    }
  };
  if (point.size() != model.variable_count())
    throw ValidationError("point size does not match variable count");
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    const Variable& var = model.variable(static_cast<int>(j));
    double x = point[j];
    flag(var.lower - x, var.name + " below lower bound");
    flag(x - var.upper, var.name + " above upper bound");
    if (var.integral)
      flag(std::abs(x - std::round(x)), var.name + " not integral");
  }
  for (const Constraint& con : model.constraints()) {
    double lhs = 0.0;
    for (const auto& [j, c] : con.terms) lhs += c * point[j];
    switch (con.sense) {
      case Sense::LessEqual: flag(lhs - con.rhs, con.name + " violated"); break;
      case Sense::GreaterEqual: flag(con.rhs - lhs, con.name + " violated"); break;
      case Sense::Equal: flag(std::abs(lhs - con.rhs), con.name + " violated"); break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Linearization toolkit

// Adds p with p <= x_i for all factors and p >= sum x_i - (n-1). On any
// binary point the only feasible value is p = prod x_i.
inline int linearize_product_of_binaries(LinearModel& model,
                                         std::span<const int> factors,
                                         const std::string& base_name) {
  if (factors.empty())
    throw ValidationError("linearize_product_of_binaries: no factors");
  int p = model.add_binary(base_name);
  std::vector<std::pair<int, double>> sum_row{{p, 1.0}};
  for (std::size_t i = 0; i < factors.size(); ++i) {
    model.add_constraint(base_name + "_le" + std::to_string(i),
                         {{p, 1.0}, {factors[i], -1.0}}, Sense::LessEqual, 0.0);
    sum_row.emplace_back(factors[i], -1.0);
  }
  model.add_constraint(base_name + "_ge", std::move(sum_row),
                       Sense::GreaterEqual,
                       -(static_cast<double>(factors.size()) - 1.0));
  return p;
}

// Adds s = v * u for continuous 0 <= v <= cap and binary u:
//   s <= cap * u,  s <= v,  s >= v - (1-u) * cap,  s >= 0.
inline int linearize_continuous_times_binary(LinearModel& model, int v, int u,
                                             double cap,
                                             const std::string& base_name) {
  if (!(cap > 0.0))
    throw ValidationError("linearize_continuous_times_binary: cap must be positive");
  int s = model.add_variable(base_name, 0.0, cap, false);
  model.add_constraint(base_name + "_cap", {{s, 1.0}, {u, -cap}},
                       Sense::LessEqual, 0.0);
  model.add_constraint(base_name + "_le_v", {{s, 1.0}, {v, -1.0}},
                       Sense::LessEqual, 0.0);
  model.add_constraint(base_name + "_ge_v", {{s, 1.0}, {v, -1.0}, {u, -cap}},
                       Sense::GreaterEqual, -cap);
  return s;
}

// ---------------------------------------------------------------------------
// Consolidation model

inline const MachiningOption& option_of(const Part& part, int forging_id) {
  for (const MachiningOption& o : part.options)
    if (o.forging == forging_id) return o;
  throw ValidationError("part " + std::to_string(part.id) +
                        " has no option for forging " + std::to_string(forging_id));
}

// Variable indexes of the built model, keyed by instance positions (not ids).
struct VariableMap {
  double big_m = 0.0;    // exceeds every option's unit machining cost
  double epsilon = 0.0;  // strict-inequality slack in discount intervals
  std::vector<int> z;                          // per forging
  std::vector<int> v;                          // per part
  std::map<std::pair<int, int>, int> x;        // (part, forging)
  std::map<std::pair<int, int>, int> u;        // (forging, level)
  std::map<std::tuple<int, int, int>, int> y;  // (part, forging, level)
  std::map<std::tuple<int, int, int>, int> w;  // (part, forging, level)
};

struct BuildResult {
  LinearModel model;
  VariableMap map;
};

// Emits the linearized consolidation MILP:
//
//   min  sum_i [CMF_i + (1-D_i) M_i v_i]
//      + sum_{i,k} CFH_k L_ik P_i x_ik
//      + sum_k CFF_k z_k
//      + sum_{k,d} (CFU_k+CFT_k)(1-D_kd) sum_i L_ik (M_i+P_i) y_ikd
//
//   s.t. v_i >= epsilon
//        v_i >= (CMU_ik+CMT_ik) x_ik - bigM (1 - x_ik)
//        sum_k x_ik = 1,  x_ik <= z_k
//        sum_d u_dk = 1
//        sum_i L_ik (M_i+P_i) w_ikd <= Q_{d+1}          (all but last level)
//        u_dk (Q_d + epsilon) <= sum_i L_ik (M_i+P_i) x_ik + (1 - u_dk) B_k
//                                                        (all but first level)
//        and-rows defining y_ikd and w_ikd.
//
// The lower-interval row is the big-M-deactivated form: at u_dk = 1 it
// enforces quantity > Q_d, at u_dk = 0 it is inert, so a forging carrying no
// load can sit at level 0 without forcing phantom quantity. B_k is the
// instance-wide quantity bound sum_i L_ik (M_i+P_i) over parts that can use k.
inline BuildResult build_model(const Instance& instance) {
  instance.validate();

  BuildResult out;
  LinearModel& model = out.model;
  VariableMap& vm = out.map;

  const std::size_t n_parts = instance.parts.size();
  const std::size_t n_forgings = instance.forgings.size();
  auto fix = instance.forging_index();

  double max_option_cost = 0.0;
  for (const Part& p : instance.parts)
    for (const MachiningOption& o : p.options)
      max_option_cost = std::max(max_option_cost, o.unit_cost());
  vm.big_m = 1.0 + max_option_cost;
  vm.epsilon = 1e-6;

  for (std::size_t k = 0; k < n_forgings; ++k)
    vm.z.push_back(model.add_binary("z" + std::to_string(instance.forgings[k].id)));
  for (std::size_t i = 0; i < n_parts; ++i)
    vm.v.push_back(model.add_variable("v" + std::to_string(instance.parts[i].id),
                                      0.0, vm.big_m, false));
  for (std::size_t i = 0; i < n_parts; ++i) {
    for (const MachiningOption& o : instance.parts[i].options) {
      int k = static_cast<int>(fix.at(o.forging));
      vm.x[{static_cast<int>(i), k}] =
          model.add_binary("x" + std::to_string(instance.parts[i].id) + "_" +
                           std::to_string(o.forging));
    }
  }
  for (std::size_t k = 0; k < n_forgings; ++k) {
    for (std::size_t d = 0; d < instance.forgings[k].discounts.size(); ++d)
      vm.u[{static_cast<int>(k), static_cast<int>(d)}] =
          model.add_binary("u" + std::to_string(instance.forgings[k].id) + "_" +
                           std::to_string(d));
  }
  for (const auto& [ik, xvar] : vm.x) {
    auto [i, k] = ik;
    const std::string pid = std::to_string(instance.parts[i].id);
    const std::string fid = std::to_string(instance.forgings[k].id);
    for (std::size_t d = 0; d < instance.forgings[k].discounts.size(); ++d) {
      const std::string suffix = pid + "_" + fid + "_" + std::to_string(d);
      std::array<int, 3> yf{vm.z[k], xvar, vm.u[{k, static_cast<int>(d)}]};
      vm.y[{i, k, static_cast<int>(d)}] =
          linearize_product_of_binaries(model, yf, "y" + suffix);
      std::array<int, 2> wf{xvar, vm.u[{k, static_cast<int>(d)}]};
      vm.w[{i, k, static_cast<int>(d)}] =
          linearize_product_of_binaries(model, wf, "w" + suffix);
    }
  }

  // Objective. The fixed ordering costs sum_i CMF_i do not depend on any
  // variable and ride along as a constant offset.
  std::vector<std::pair<int, double>> obj;
  double offset = 0.0;
  for (std::size_t i = 0; i < n_parts; ++i) {
    const Part& p = instance.parts[i];
    offset += p.fixed_order_cost;
    obj.emplace_back(vm.v[i],
                     (1.0 - precompute_part_discount(p)) *
                         static_cast<double>(p.order_quantity));
  }
  for (const auto& [ik, xvar] : vm.x) {
    auto [i, k] = ik;
    const Part& p = instance.parts[i];
    const Forging& f = instance.forgings[k];
    const MachiningOption& o = option_of(p, f.id);
    double hold = f.holding_cost * o.units_per_part.to_double() *
                  static_cast<double>(p.inventory_quantity);
    if (hold != 0.0) obj.emplace_back(xvar, hold);
  }
  for (std::size_t k = 0; k < n_forgings; ++k) {
    const Forging& f = instance.forgings[k];
    if (f.fixed_order_cost != 0.0) obj.emplace_back(vm.z[k], f.fixed_order_cost);
  }
  for (const auto& [ikd, yvar] : vm.y) {
    auto [i, k, d] = ikd;
    const Part& p = instance.parts[i];
    const Forging& f = instance.forgings[k];
    const MachiningOption& o = option_of(p, f.id);
    double coef =
        f.variable_unit_cost() * (1.0 - f.discounts.discount(d)) *
        o.units_per_part.to_double() *
        static_cast<double>(p.order_quantity + p.inventory_quantity);
    if (coef != 0.0) obj.emplace_back(yvar, coef);
  }
  model.set_objective(std::move(obj), offset);

  // Part coverage and minimum-cost route selection.
  for (std::size_t i = 0; i < n_parts; ++i) {
    const Part& p = instance.parts[i];
    const std::string pid = std::to_string(p.id);
    model.add_constraint("vmin" + pid, {{vm.v[i], 1.0}}, Sense::GreaterEqual,
                         vm.epsilon);
    std::vector<std::pair<int, double>> assign_row;
    for (const MachiningOption& o : p.options) {
      int k = static_cast<int>(fix.at(o.forging));
      int xvar = vm.x.at({static_cast<int>(i), k});
      assign_row.emplace_back(xvar, 1.0);
      // v_i >= (CMU+CMT) x_ik - bigM (1 - x_ik)
      model.add_constraint("vcost" + pid + "_" + std::to_string(o.forging),
                           {{vm.v[i], 1.0}, {xvar, -(o.unit_cost() + vm.big_m)}},
                           Sense::GreaterEqual, -vm.big_m);
      model.add_constraint("open" + pid + "_" + std::to_string(o.forging),
                           {{xvar, 1.0}, {vm.z[k], -1.0}}, Sense::LessEqual, 0.0);
    }
    model.add_constraint("assign" + pid, std::move(assign_row), Sense::Equal, 1.0);
  }

  // One discount level per forging, pinned to the pooled quantity interval.
  for (std::size_t k = 0; k < n_forgings; ++k) {
    const Forging& f = instance.forgings[k];
    const std::string fid = std::to_string(f.id);
    const std::size_t n_levels = f.discounts.size();

    std::vector<std::pair<int, double>> one_level;
    for (std::size_t d = 0; d < n_levels; ++d)
      one_level.emplace_back(vm.u[{static_cast<int>(k), static_cast<int>(d)}], 1.0);
    model.add_constraint("onelevel" + fid, std::move(one_level), Sense::Equal, 1.0);

    double quantity_bound = 0.0;  // B_k
    for (std::size_t i = 0; i < n_parts; ++i) {
      const Part& p = instance.parts[i];
      for (const MachiningOption& o : p.options)
        if (fix.at(o.forging) == k)
          quantity_bound +=
              o.units_per_part.to_double() *
              static_cast<double>(p.order_quantity + p.inventory_quantity);
    }

    for (std::size_t d = 0; d + 1 < n_levels; ++d) {
      // sum_i L_ik (M_i + P_i) w_ikd <= Q_{d+1}
      std::vector<std::pair<int, double>> row;
      for (std::size_t i = 0; i < n_parts; ++i) {
        auto it = vm.w.find({static_cast<int>(i), static_cast<int>(k),
                             static_cast<int>(d)});
        if (it == vm.w.end()) continue;
        const MachiningOption& o = option_of(instance.parts[i], f.id);
        row.emplace_back(it->second,
                         o.units_per_part.to_double() *
                             static_cast<double>(instance.parts[i].order_quantity +
                                                 instance.parts[i].inventory_quantity));
      }
      model.add_constraint("dub" + fid + "_" + std::to_string(d), std::move(row),
                           Sense::LessEqual, f.discounts.threshold(d + 1));
    }

    for (std::size_t d = 1; d < n_levels; ++d) {
      // u_dk (Q_d + eps) <= sum_i L_ik (M_i+P_i) x_ik + (1 - u_dk) B_k
      std::vector<std::pair<int, double>> row;
      row.emplace_back(vm.u.at({static_cast<int>(k), static_cast<int>(d)}),
                       f.discounts.threshold(d) + vm.epsilon + quantity_bound);
      for (std::size_t i = 0; i < n_parts; ++i) {
        auto it = vm.x.find({static_cast<int>(i), static_cast<int>(k)});
        if (it == vm.x.end()) continue;
        const MachiningOption& o = option_of(instance.parts[i], f.id);
        row.emplace_back(it->second,
                         -o.units_per_part.to_double() *
                             static_cast<double>(instance.parts[i].order_quantity +
                                                 instance.parts[i].inventory_quantity));
      }
      model.add_constraint("dlb" + fid + "_" + std::to_string(d), std::move(row),
                           Sense::LessEqual, quantity_bound);
    }
  }

  return out;
}

// ---------------------------------------------------------------------------
// Solution <-> model point mapping

// Embeds a Solution as a point of the built model: z from the selected set,
// x from the assignment, u at the applied level (idle forgings at level 0),
// y and w as the implied products, v_i at the assigned option's unit cost
// (its minimal feasible value when that cost is at least epsilon).
inline std::vector<double> solution_point(const Instance& instance,
                                          const BuildResult& built,
                                          const Solution& solution) {
  const LinearModel& model = built.model;
  const VariableMap& vm = built.map;
  auto fix = instance.forging_index();
  auto pix = instance.part_index();

  std::vector<double> point(model.variable_count(), 0.0);
  std::vector<int> level(instance.forgings.size(), 0);
  std::vector<bool> selected(instance.forgings.size(), false);

  for (int fid : solution.selected)
    selected[fix.at(fid)] = true;
  for (const auto& [fid, lvl] : solution.discount_level)
    level[fix.at(fid)] = lvl;
  for (std::size_t k = 0; k < instance.forgings.size(); ++k) {
    if (selected[k]) point[vm.z[k]] = 1.0;
    point[vm.u.at({static_cast<int>(k), level[k]})] = 1.0;
  }
  for (const auto& [pid, fid] : solution.assignment) {
    std::size_t i = pix.at(pid);
    std::size_t k = fix.at(fid);
    point[vm.x.at({static_cast<int>(i), static_cast<int>(k)})] = 1.0;
    const MachiningOption& o = option_of(instance.parts[i], fid);
    point[vm.v[i]] = std::max(o.unit_cost(), vm.epsilon);
    int d = level[k];
    point[vm.w.at({static_cast<int>(i), static_cast<int>(k), d})] = 1.0;
    if (selected[k])
      point[vm.y.at({static_cast<int>(i), static_cast<int>(k), d})] = 1.0;
  }
  for (std::size_t i = 0; i < instance.parts.size(); ++i)
    if (point[vm.v[i]] == 0.0) point[vm.v[i]] = vm.epsilon;
  return point;
}

// Reads a feasible integer point back into a Solution. Forgings with z = 1
// but no assigned part are dropped (cost-neutral normalization); discount
// levels are re-derived from the pooled quantities.
inline Solution point_to_solution(const Instance& instance,
                                  const BuildResult& built,
                                  std::span<const double> point) {
  const VariableMap& vm = built.map;
  std::map<int, int> assignment;
  for (const auto& [ik, xvar] : vm.x) {
    if (point[xvar] > 0.5) {
      auto [i, k] = ik;
      int pid = instance.parts[i].id;
      if (assignment.count(pid))
        throw ValidationError("point assigns part " + std::to_string(pid) +
                              " more than once");
      assignment[pid] = instance.forgings[k].id;
    }
  }
  return solution_from_assignment(instance, assignment);
}

}  // namespace forgeplan

#endif  // FORGEPLAN_MILP_HPP
