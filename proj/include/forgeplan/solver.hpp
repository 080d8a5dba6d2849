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
// Exact branch-and-bound over per-part option choices. The selected forging
// set and discount levels are implied by the assignment, so the search tree
// has one level per multi-option part.
//
// Node lower bound (admissible):
//   * committed parts contribute their exact machining and holding cost;
//   * every forging forced by a committed part contributes its fixed cost
//     plus variable cost of the committed quantity at the optimistic
//     discount level still reachable (the level of committed + possible
//     remaining quantity, never better than the schedule allows);
//   * uncommitted parts are priced by facility-location dual ascent: part
//     duals start at the cheapest option service cost c_ik (machining +
//     holding + forging variable cost at the reachable discount) and rise
//     while consuming the fixed-cost slack of not-yet-forced forgings,
//     subject to sum_i (v_i - c_ik)+ <= CFF_k. Any dual-feasible vector
//     under-estimates every completion, so the bound stays admissible.
//
// A cheaper bound (duals frozen at their start values) gates the dual
// ascent, and the incumbent starts from the no-consolidation baseline
// improved by single-part moves and whole-forging merges, which lands close
// enough to the optimum to prune aggressively from the start.

#ifndef FORGEPLAN_SOLVER_HPP
#define FORGEPLAN_SOLVER_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

#include "forgeplan/compiled.hpp"
#include "forgeplan/prng.hpp"
#include "forgeplan/solve_types.hpp"

namespace forgeplan {

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(what) {}
};

namespace detail {

inline constexpr double kTieWindow = 1e-9;

inline double prune_margin(double best, double target_gap) {
  return std::max(5e-7, target_gap) * std::max(1.0, best);
}

// ---------------------------------------------------------------------------
// Incumbent heuristic: baseline + local improvement

class IncumbentSearch {
 public:
  explicit IncumbentSearch(const CompiledInstance& ci) : ci_(ci) {
    const std::size_t n_parts = ci.part_count();
    const std::size_t n_forgings = ci.forging_count();
    choice_.assign(n_parts, 0);
    quantity_.assign(n_forgings, Rational());
    load_.assign(n_forgings, 0);

    // No-consolidation start: cheapest machining, ties to the lowest id.
    for (std::size_t i = 0; i < n_parts; ++i) {
      const CompiledPart& p = ci.part(i);
      std::size_t best = 0;
      for (std::size_t o = 1; o < p.option_count; ++o) {
        const CompiledOption& a = ci.option(p, o);
        const CompiledOption& b = ci.option(p, best);
        if (a.machining < b.machining ||
            (a.machining == b.machining &&
             ci.forging(a.forging).id < ci.forging(b.forging).id))
          best = o;
      }
      choice_[i] = static_cast<int>(best);
      const CompiledOption& o = ci.option(p, best);
      quantity_[o.forging] += o.combined_quantity;
      load_[o.forging] += 1;
    }
  }

  std::vector<int> improve() {
    bool changed = true;
    for (int round = 0; round < 64 && changed; ++round) {
      changed = false;
      if (move_pass()) changed = true;
      if (merge_pass()) changed = true;
    }
    return choice_;
  }

  std::vector<int> baseline() const { return choice_; }

 private:
  double forging_term(std::size_t k, const Rational& q, int load) const {
    if (load == 0) return 0.0;
    const CompiledForging& f = ci_.forging(k);
    double mult =
        1.0 - f.schedule->discount(discount_level_for_quantity(*f.schedule, q));
    return f.fixed + f.unit_rate * mult * q.to_double();
  }

  // Reassign single parts whenever that lowers the total.
  bool move_pass() {
    bool improved = false;
    for (std::size_t i = 0; i < ci_.part_count(); ++i) {
      const CompiledPart& p = ci_.part(i);
      if (p.option_count < 2) continue;
      const CompiledOption& cur = ci_.option(p, choice_[i]);
      std::size_t from = cur.forging;
      double base_from = forging_term(from, quantity_[from], load_[from]);
      for (std::size_t o = 0; o < p.option_count; ++o) {
        if (static_cast<int>(o) == choice_[i]) continue;
        const CompiledOption& alt = ci_.option(p, o);
        std::size_t to = alt.forging;
        double delta = alt.machining + alt.holding - cur.machining - cur.holding;
        delta += forging_term(from, quantity_[from] - cur.combined_quantity,
                              load_[from] - 1) -
                 base_from;
        delta += forging_term(to, quantity_[to] + alt.combined_quantity,
                              load_[to] + 1) -
                 forging_term(to, quantity_[to], load_[to]);
        if (delta < -kTieWindow) {
          quantity_[from] -= cur.combined_quantity;
          load_[from] -= 1;
          quantity_[to] += alt.combined_quantity;
          load_[to] += 1;
          choice_[i] = static_cast<int>(o);
          improved = true;
          break;
        }
      }
    }
    return improved;
  }

  // Empty whole forgings into another forging able to carry all their parts.
  bool merge_pass() {
    bool improved = false;
    const std::size_t n_forgings = ci_.forging_count();
    std::vector<std::vector<std::size_t>> assigned(n_forgings);
    for (std::size_t i = 0; i < ci_.part_count(); ++i)
      assigned[ci_.option(ci_.part(i), choice_[i]).forging].push_back(i);

    for (std::size_t a = 0; a < n_forgings; ++a) {
      if (assigned[a].empty()) continue;
      // Forgings usable by every part currently on a.
      std::unordered_map<std::size_t, std::size_t> coverage;
      for (std::size_t i : assigned[a]) {
        const CompiledPart& p = ci_.part(i);
        for (std::size_t o = 0; o < p.option_count; ++o)
          coverage[ci_.option(p, o).forging] += 1;
      }
      for (const auto& [b, count] : coverage) {
        if (b == a || count != assigned[a].size()) continue;
        double delta = -forging_term(a, quantity_[a], load_[a]);
        Rational moved;
        double part_delta = 0.0;
        for (std::size_t i : assigned[a]) {
          const CompiledPart& p = ci_.part(i);
          const CompiledOption& cur = ci_.option(p, choice_[i]);
          for (std::size_t o = 0; o < p.option_count; ++o) {
            const CompiledOption& alt = ci_.option(p, o);
            if (alt.forging != b) continue;
            part_delta += alt.machining + alt.holding - cur.machining - cur.holding;
            moved += alt.combined_quantity;
            break;
          }
        }
        delta += part_delta;
        delta += forging_term(b, quantity_[b] + moved,
                              load_[b] + static_cast<int>(assigned[a].size())) -
                 forging_term(b, quantity_[b], load_[b]);
        if (delta < -kTieWindow) {
          for (std::size_t i : assigned[a]) {
            const CompiledPart& p = ci_.part(i);
            for (std::size_t o = 0; o < p.option_count; ++o)
              if (ci_.option(p, o).forging == static_cast<int>(b)) {
                choice_[i] = static_cast<int>(o);
                break;
              }
          }
          quantity_[b] += moved;
          load_[b] += static_cast<int>(assigned[a].size());
          assigned[b].insert(assigned[b].end(), assigned[a].begin(),
                             assigned[a].end());
          quantity_[a] = Rational();
          load_[a] = 0;
          assigned[a].clear();
          improved = true;
          break;
        }
      }
    }
    return improved;
  }

  const CompiledInstance& ci_;
  std::vector<int> choice_;
  std::vector<Rational> quantity_;
  std::vector<int> load_;
};

// ---------------------------------------------------------------------------
// Search state shared across workers

struct SearchShared {
  std::mutex mutex;
  std::atomic<double> best_total{std::numeric_limits<double>::infinity()};
  std::vector<int> best_choice;
  CompiledInstance::TieKey best_key;
  std::atomic<std::uint64_t> node_count{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> timed_out{false};
  double open_bound_min = std::numeric_limits<double>::infinity();
  std::chrono::steady_clock::time_point deadline{};
  bool has_deadline = false;

  void offer(const CompiledInstance& ci, const std::vector<int>& choice,
             double total) {
    double cur = best_total.load(std::memory_order_relaxed);
    if (total > cur + kTieWindow) return;
    std::lock_guard<std::mutex> lock(mutex);
    cur = best_total.load(std::memory_order_relaxed);
    if (total < cur - kTieWindow) {
      best_total.store(total, std::memory_order_relaxed);
      best_choice = choice;
      best_key = ci.tie_key(choice);
    } else if (total <= cur + kTieWindow) {
      auto key = ci.tie_key(choice);
      if (key < best_key) {
        best_total.store(std::min(cur, total), std::memory_order_relaxed);
        best_choice = choice;
        best_key = std::move(key);
      }
    }
  }

  void record_open(double bound) {
    std::lock_guard<std::mutex> lock(mutex);
    open_bound_min = std::min(open_bound_min, bound);
  }
};

// Static branching data, shared read-only by all workers.
struct BranchPlan {
  std::vector<int> order;                  // free part positions, branch order
  std::vector<std::vector<int>> children;  // per part position: option order
  std::vector<std::size_t> singles;        // single-option part positions
  std::vector<std::vector<std::pair<int, int>>> members;  // forging -> (part, option)
  std::vector<int> incumbent;              // option index per part
  double target_gap = 0.0;
};

class Searcher {
 public:
  Searcher(const CompiledInstance& ci, const BranchPlan& plan, SearchShared& shared)
      : ci_(ci), plan_(plan), shared_(shared) {
    const std::size_t n_parts = ci.part_count();
    const std::size_t n_forgings = ci.forging_count();
    committed_.assign(n_parts, false);
    choice_.assign(n_parts, -1);
    psi_.assign(n_parts, 0.0);
    stamp_.assign(n_parts, 0);
    dual_v_.assign(n_parts, 0.0);
    dual_stamp_.assign(n_parts, 0);
    slack_.assign(n_forgings, 0.0);
    slack_stamp_.assign(n_forgings, 0);
    fstate_.resize(n_forgings);
    for (std::size_t k = 0; k < n_forgings; ++k) {
      FState& fs = fstate_[k];
      fs.committed_q = Rational();
      fs.potential_q = Rational();
      fs.uncommitted = 0;
      fs.committed = 0;
      for (const auto& [part, opt] : plan.members[k]) {
        fs.potential_q += ci.option(ci.part(part), opt).combined_quantity;
        fs.uncommitted += 1;
      }
      refresh_forging(k);
    }
    for (std::size_t i = 0; i < n_parts; ++i) {
      psi_[i] = compute_psi(i);
      psi_sum_ += psi_[i];
    }
    trails_.resize(plan.order.size() + 1);
    scratch_ = ci.make_scratch();
    for (std::size_t s : plan.singles) {
      Trail permanent;
      commit(s, 0, permanent);
    }
  }

  double bound() const {
    return ci_.fixed_total() + committed_exact_ + forced_term_sum_ + psi_sum_;
  }

  // Runs the subtree below `prefix` (option choices along plan.order).
  void run(std::span<const int> prefix) {
    std::size_t depth = 0;
    std::vector<Trail> prefix_trails(prefix.size());
    for (int o : prefix) {
      commit(static_cast<std::size_t>(plan_.order[depth]), o, prefix_trails[depth]);
      ++depth;
    }
    dfs(depth);
    while (depth > 0) { --depth; undo(prefix_trails[depth]); }
  }

  // Collects frontier prefixes at `target` depth (used to split work).
  void collect(std::size_t target, std::vector<std::vector<int>>& out,
               std::vector<int>& prefix, std::size_t depth = 0) {
    if (depth == target || depth == plan_.order.size()) {
      out.push_back(prefix);
      return;
    }
    const std::size_t part = static_cast<std::size_t>(plan_.order[depth]);
    for (int o : plan_.children[part]) {
      Trail trail;
      commit(part, o, trail);
      if (!prunable()) {
        prefix.push_back(o);
        collect(target, out, prefix, depth + 1);
        prefix.pop_back();
      }
      undo(trail);
    }
  }

 private:
  struct FState {
    Rational committed_q;
    Rational potential_q;
    int uncommitted = 0;
    int committed = 0;
    double dhat_mult = 1.0;  // 1 - reachable discount
    double term = 0.0;       // CFF + unit * dhat_mult * committed_q
  };

  struct Trail {
    std::vector<std::pair<int, FState>> fsaved;
    std::vector<std::pair<int, double>> psaved;
    double committed_exact = 0.0;
    double forced_term_sum = 0.0;
    double psi_sum = 0.0;
    std::size_t part = 0;
  };

  void refresh_forging(std::size_t k) {
    FState& fs = fstate_[k];
    const CompiledForging& f = ci_.forging(k);
    fs.dhat_mult = 1.0 - f.schedule->discount(
                             discount_level_for_quantity(*f.schedule, fs.potential_q));
    fs.term = f.fixed + f.unit_rate * fs.dhat_mult * fs.committed_q.to_double();
  }

  double service_cost(const CompiledOption& opt) const {
    return opt.machining + opt.holding +
           ci_.forging(opt.forging).unit_rate * fstate_[opt.forging].dhat_mult *
               opt.combined_quantity_d;
  }

  // Cheapest service cost over the part's options (the dual start value).
  double compute_psi(std::size_t i) const {
    const CompiledPart& p = ci_.part(i);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t o = 0; o < p.option_count; ++o)
      best = std::min(best, service_cost(ci_.option(p, o)));
    return best;
  }

  // One-shot dual raises, two sweeps: v_i <- min_k (max(v_i, c_ik) + slack_k)
  // with slack_k = CFF_k for unforced forgings (0 once forced) decreasing as
  // duals cut into it. Returns sum of duals over uncommitted parts.
  double dual_ascent() {
    ++dual_epoch_;
    double sum = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      sum = 0.0;
      for (std::size_t i = 0; i < ci_.part_count(); ++i) {
        if (committed_[i]) continue;
        const CompiledPart& p = ci_.part(i);
        double v = dual_stamp_[i] == dual_epoch_ ? dual_v_[i] : psi_[i];
        double cap = std::numeric_limits<double>::infinity();
        for (std::size_t o = 0; o < p.option_count; ++o) {
          const CompiledOption& opt = ci_.option(p, o);
          cap = std::min(cap, std::max(v, service_cost(opt)) + slack(opt.forging));
        }
        if (cap > v) {
          for (std::size_t o = 0; o < p.option_count; ++o) {
            const CompiledOption& opt = ci_.option(p, o);
            double c = service_cost(opt);
            if (cap > c) slack_[opt.forging] -= cap - std::max(v, c);
          }
          v = cap;
        }
        dual_v_[i] = v;
        dual_stamp_[i] = dual_epoch_;
        sum += v;
      }
    }
    return sum;
  }

  double slack(int k) {
    if (slack_stamp_[k] != dual_epoch_) {
      slack_stamp_[k] = dual_epoch_;
      slack_[k] = fstate_[k].committed > 0 ? 0.0 : ci_.forging(k).fixed;
    }
    return slack_[k];
  }

  // Two-stage prune test against the shared incumbent.
  bool prunable() {
    const double lim = shared_.best_total.load(std::memory_order_relaxed);
    const double threshold = lim - prune_margin(lim, plan_.target_gap);
    if (bound() >= threshold) return true;
    const double full = ci_.fixed_total() + committed_exact_ +
                        forced_term_sum_ + dual_ascent();
    return full >= threshold;
  }

  void commit(std::size_t part, int option, Trail& trail) {
    trail.part = part;
    trail.committed_exact = committed_exact_;
    trail.forced_term_sum = forced_term_sum_;
    trail.psi_sum = psi_sum_;

    const CompiledPart& p = ci_.part(part);
    ++stamp_counter_;
    for (std::size_t o = 0; o < p.option_count; ++o) {
      const CompiledOption& opt = ci_.option(p, o);
      const std::size_t k = opt.forging;
      FState& fs = fstate_[k];
      trail.fsaved.emplace_back(static_cast<int>(k), fs);
      const bool was_forced = fs.committed > 0;
      const double old_term = was_forced ? fs.term : 0.0;
      const double old_dhat = fs.dhat_mult;
      fs.uncommitted -= 1;
      if (static_cast<int>(o) == option) {
        fs.committed += 1;
        fs.committed_q += opt.combined_quantity;
      } else {
        fs.potential_q -= opt.combined_quantity;
      }
      refresh_forging(k);
      const bool now_forced = fs.committed > 0;
      forced_term_sum_ += (now_forced ? fs.term : 0.0) - old_term;
      (void)was_forced;
      // Service costs only move when the reachable discount level moves.
      if (fs.dhat_mult == old_dhat) continue;
      for (const auto& [p2, o2] : plan_.members[k]) {
        (void)o2;
        if (committed_[p2] || static_cast<std::size_t>(p2) == part ||
            stamp_[p2] == stamp_counter_)
          continue;
        stamp_[p2] = stamp_counter_;
        trail.psaved.emplace_back(p2, psi_[p2]);
        double np = compute_psi(static_cast<std::size_t>(p2));
        psi_sum_ += np - psi_[p2];
        psi_[p2] = np;
      }
    }
    committed_[part] = true;
    choice_[part] = option;
    const CompiledOption& chosen = ci_.option(p, option);
    committed_exact_ += chosen.machining + chosen.holding;
    psi_sum_ -= psi_[part];
  }

  void undo(Trail& trail) {
    for (auto it = trail.fsaved.rbegin(); it != trail.fsaved.rend(); ++it)
      fstate_[it->first] = it->second;
    for (auto it = trail.psaved.rbegin(); it != trail.psaved.rend(); ++it)
      psi_[it->first] = it->second;
    committed_exact_ = trail.committed_exact;
    forced_term_sum_ = trail.forced_term_sum;
    psi_sum_ = trail.psi_sum;
    committed_[trail.part] = false;
    choice_[trail.part] = -1;
    trail.fsaved.clear();
    trail.psaved.clear();
  }

  void check_time() {
    if (!shared_.has_deadline || shared_.stop.load(std::memory_order_relaxed))
      return;
    if (std::chrono::steady_clock::now() >= shared_.deadline) {
      shared_.timed_out.store(true, std::memory_order_relaxed);
      shared_.stop.store(true, std::memory_order_relaxed);
    }
  }

  void dfs(std::size_t depth) {
    shared_.node_count.fetch_add(1, std::memory_order_relaxed);
    if ((++local_ticks_ & 1023u) == 0) check_time();
    if (shared_.stop.load(std::memory_order_relaxed)) {
      shared_.record_open(bound());
      return;
    }
    if (depth == plan_.order.size()) {
      double total = exact_total();
      shared_.offer(ci_, choice_, total);
      return;
    }
    const std::size_t part = static_cast<std::size_t>(plan_.order[depth]);
    Trail& trail = trails_[depth];
    for (int o : plan_.children[part]) {
      commit(part, o, trail);
      if (!prunable()) dfs(depth + 1);
      undo(trail);
    }
  }

  double exact_total() { return ci_.evaluate_choice(choice_, scratch_); }

  const CompiledInstance& ci_;
  const BranchPlan& plan_;
  SearchShared& shared_;

  std::vector<FState> fstate_;
  std::vector<double> psi_;
  std::vector<bool> committed_;
  std::vector<int> choice_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t stamp_counter_ = 0;
  std::vector<double> dual_v_;
  std::vector<std::uint64_t> dual_stamp_;
  std::vector<double> slack_;
  std::vector<std::uint64_t> slack_stamp_;
  std::uint64_t dual_epoch_ = 0;
  std::vector<Trail> trails_;
  CompiledInstance::Scratch scratch_;
  double committed_exact_ = 0.0;
  double forced_term_sum_ = 0.0;
  double psi_sum_ = 0.0;
  std::uint32_t local_ticks_ = 0;
};

// Branch order: decreasing option-cost spread, seeded shuffle of exact ties;
// children visit the incumbent's option first, then cheaper options first.
inline BranchPlan make_plan(const CompiledInstance& ci, const SolveConfig& config,
                            const std::vector<int>& incumbent) {
  BranchPlan plan;
  plan.target_gap = config.target_gap;
  plan.incumbent = incumbent;
  const std::size_t n_parts = ci.part_count();
  plan.members.resize(ci.forging_count());
  for (std::size_t i = 0; i < n_parts; ++i) {
    const CompiledPart& p = ci.part(i);
    for (std::size_t o = 0; o < p.option_count; ++o)
      plan.members[ci.option(p, o).forging].emplace_back(static_cast<int>(i),
                                                         static_cast<int>(o));
  }

  std::vector<double> spread(n_parts, 0.0);
  plan.children.resize(n_parts);
  for (std::size_t i = 0; i < n_parts; ++i) {
    const CompiledPart& p = ci.part(i);
    if (p.option_count < 2) {
      plan.singles.push_back(i);
      continue;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    std::vector<std::pair<double, int>> scored;
    for (std::size_t o = 0; o < p.option_count; ++o) {
      const CompiledOption& opt = ci.option(p, o);
      const CompiledForging& f = ci.forging(opt.forging);
      double c = opt.machining + opt.holding +
                 f.unit_rate * opt.combined_quantity.to_double();
      lo = std::min(lo, c);
      hi = std::max(hi, c);
      scored.emplace_back(c, static_cast<int>(o));
    }
    spread[i] = hi - lo;
    std::stable_sort(scored.begin(), scored.end());
    std::vector<int>& order = plan.children[i];
    order.push_back(incumbent[i]);
    for (const auto& [c, o] : scored)
      if (o != incumbent[i]) order.push_back(o);
    plan.order.push_back(static_cast<int>(i));
  }

  std::stable_sort(plan.order.begin(), plan.order.end(),
                   [&](int a, int b) { return spread[a] > spread[b]; });
  // Seeded Fisher-Yates inside runs of exactly equal spread.
  SplitMix64 rng = substream(config.seed, {11});
  auto shuffle_run = [&rng](std::vector<int>& v, std::size_t lo, std::size_t hi) {
    for (std::size_t n = hi - lo; n > 1; --n) {
      std::size_t j = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
      std::swap(v[lo + n - 1], v[lo + j]);
    }
  };
  std::size_t run_start = 0;
  for (std::size_t t = 1; t <= plan.order.size(); ++t) {
    if (t == plan.order.size() ||
        spread[plan.order[t]] != spread[plan.order[run_start]]) {
      shuffle_run(plan.order, run_start, t);
      run_start = t;
    }
  }
  return plan;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public interface

inline SolveResult solve(const Instance& instance, const SolveConfig& config = {});

// Recomputes the breakdown independently and checks every Solution invariant.
inline CostBreakdown verify(const Instance& instance, const Solution& solution) {
  auto fix = instance.forging_index();

  std::vector<int> selected_sorted = solution.selected;
  std::sort(selected_sorted.begin(), selected_sorted.end());
  for (std::size_t s = 1; s < selected_sorted.size(); ++s)
    if (selected_sorted[s] == selected_sorted[s - 1])
      throw ValidationError("verify: duplicate selected forging " +
                            std::to_string(selected_sorted[s]));
  std::unordered_map<int, bool> selected_set;
  for (int k : selected_sorted) {
    if (!fix.count(k))
      throw ValidationError("verify: selected forging " + std::to_string(k) +
                            " unknown");
    selected_set[k] = false;  // flips to true when used
  }

  auto pix = instance.part_index();
  for (const auto& [pid, fid] : solution.assignment)
    if (!pix.count(pid))
      throw ValidationError("verify: assignment references unknown part " +
                            std::to_string(pid));

  std::unordered_map<int, Rational> combined;
  for (const Part& part : instance.parts) {
    auto it = solution.assignment.find(part.id);
    if (it == solution.assignment.end())
      throw ValidationError("verify: uncovered part " + std::to_string(part.id));
    int fid = it->second;
    const MachiningOption* opt = nullptr;
    for (const MachiningOption& o : part.options)
      if (o.forging == fid) { opt = &o; break; }
    if (opt == nullptr)
      throw ValidationError("verify: non-option assignment of part " +
                            std::to_string(part.id) + " to forging " +
                            std::to_string(fid));
    auto sel = selected_set.find(fid);
    if (sel == selected_set.end())
      throw ValidationError("verify: part " + std::to_string(part.id) +
                            " assigned to non-selected forging " +
                            std::to_string(fid));
    sel->second = true;
    combined[fid] += opt->units_per_part *
                     Rational(part.order_quantity + part.inventory_quantity);
  }
  for (const auto& [k, used] : selected_set)
    if (!used)
      throw ValidationError("verify: unused selected forging " + std::to_string(k));

  for (const auto& [k, q] : combined) {
    int expected = static_cast<int>(
        discount_level_for_quantity(instance.forgings[fix.at(k)].discounts, q));
    auto it = solution.discount_level.find(k);
    if (it == solution.discount_level.end() || it->second != expected)
      throw ValidationError("verify: wrong discount level for forging " +
                            std::to_string(k));
  }
  for (const auto& [k, lvl] : solution.discount_level) {
    (void)lvl;
    if (!combined.count(k))
      throw ValidationError("verify: wrong discount level entry for idle forging " +
                            std::to_string(k));
  }

  CostBreakdown recomputed =
      evaluate(instance, solution.selected, solution.assignment);
  auto close = [](double a, double b) { return std::abs(a - b) <= kCostTolerance; };
  if (!close(recomputed.machining, solution.costs.machining) ||
      !close(recomputed.forging, solution.costs.forging) ||
      !close(recomputed.inventory, solution.costs.inventory) ||
      !close(recomputed.total, solution.costs.total))
    throw ValidationError("verify: cost mismatch beyond tolerance");
  return recomputed;
}

inline SolveResult solve(const Instance& instance, const SolveConfig& config) {
  config.validate();
  for (const Part& p : instance.parts)
    if (p.options.empty())
      throw InfeasibleError("infeasible: part " + std::to_string(p.id) +
                            " has no machining options");
  instance.validate();

  const auto start = std::chrono::steady_clock::now();
  detail::CompiledInstance ci(instance);

  detail::IncumbentSearch heuristic(ci);
  std::vector<int> incumbent = heuristic.improve();

  detail::BranchPlan plan = detail::make_plan(ci, config, incumbent);

  detail::SearchShared shared;
  if (config.time_limit_s) {
    shared.has_deadline = true;
    shared.deadline = start + std::chrono::duration_cast<
                                  std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(*config.time_limit_s));
  }
  {
    auto scratch = ci.make_scratch();
    shared.offer(ci, incumbent, ci.evaluate_choice(incumbent, scratch));
  }

  if (config.worker_count == 1 || plan.order.size() < 2) {
    detail::Searcher searcher(ci, plan, shared);
    searcher.run({});
  } else {
    // Split the top of the tree into enough prefixes to keep workers busy.
    detail::Searcher splitter(ci, plan, shared);
    std::vector<std::vector<int>> frontier;
    const std::size_t want = 16 * static_cast<std::size_t>(config.worker_count);
    for (std::size_t target = 1; target <= plan.order.size(); ++target) {
      frontier.clear();
      std::vector<int> prefix;
      splitter.collect(target, frontier, prefix);
      if (frontier.size() >= want || target == plan.order.size()) break;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      detail::Searcher searcher(ci, plan, shared);
      for (;;) {
        std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
        if (t >= frontier.size()) break;
        searcher.run(frontier[t]);
      }
    };
    std::vector<std::thread> threads;
    for (int w = 0; w < config.worker_count; ++w) threads.emplace_back(work);
    for (std::thread& th : threads) th.join();
  }

  const double best = shared.best_total.load();
  const bool timed_out = shared.timed_out.load();
  double lower = best - detail::prune_margin(best, config.target_gap);
  if (timed_out) lower = std::min(lower, shared.open_bound_min);

  SolveResult result;
  result.solution =
      solution_from_assignment(instance, ci.choice_to_assignment(shared.best_choice));
  result.lower_bound = lower;
  if (result.solution.costs.total - lower <= 1e-6 * std::max(1.0, lower))
    result.status = SolveStatus::kOptimal;
  else
    result.status = timed_out ? SolveStatus::kTimeLimit : SolveStatus::kGapLimit;
  result.node_count = std::max<std::uint64_t>(1, shared.node_count.load());
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace forgeplan

#endif  // FORGEPLAN_SOLVER_HPP
