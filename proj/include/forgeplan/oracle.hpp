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
// Ground-truth optimizer: enumerate every part -> option assignment and keep
// the cheapest. The selected forging set is the image of the assignment, so
// enumerating assignments covers the full decision space at product-of-option
// counts cost, far below 2^N at oracle scale.

#ifndef FORGEPLAN_ORACLE_HPP
#define FORGEPLAN_ORACLE_HPP

#include <chrono>
#include <cstdint>
#include <vector>

#include "forgeplan/compiled.hpp"
#include "forgeplan/solve_types.hpp"

namespace forgeplan {

class EnumerationLimitError : public Error {
 public:
  explicit EnumerationLimitError(const std::string& what) : Error(what) {}
};

inline constexpr std::uint64_t kDefaultEnumerationLimit = 1000000;

inline SolveResult brute_force(const Instance& instance,
                               std::uint64_t limit = kDefaultEnumerationLimit) {
  instance.validate();
  const auto start = std::chrono::steady_clock::now();

  std::uint64_t combinations = 1;
  for (const Part& p : instance.parts) {
    combinations *= p.options.size();
    if (combinations > limit)
      throw EnumerationLimitError("brute force: assignment count exceeds limit " +
                                  std::to_string(limit));
  }

  detail::CompiledInstance compiled(instance);
  auto scratch = compiled.make_scratch();
  const std::size_t n = compiled.part_count();

  std::vector<int> choice(n, 0);
  std::vector<int> best_choice;
  double best_total = std::numeric_limits<double>::infinity();
  detail::CompiledInstance::TieKey best_key;
  std::uint64_t evaluated = 0;

  // Odometer over option indexes, least-significant part last.
  for (;;) {
    double total = compiled.evaluate_choice(choice, scratch);
    ++evaluated;
    constexpr double kTieWindow = 1e-9;
    if (total < best_total - kTieWindow) {
      best_total = total;
      best_choice = choice;
      best_key = compiled.tie_key(choice);
    } else if (total <= best_total + kTieWindow) {
      auto key = compiled.tie_key(choice);
      if (key < best_key) {
        best_total = std::min(best_total, total);
        best_choice = choice;
        best_key = std::move(key);
      }
    }

    std::size_t i = n;
    while (i > 0) {
      --i;
      if (static_cast<std::size_t>(++choice[i]) <
          compiled.part(i).option_count) break;
      choice[i] = 0;
      if (i == 0) goto done;
    }
    if (n == 0) break;
  }
done:

  SolveResult result;
  result.solution = solution_from_assignment(
      instance, compiled.choice_to_assignment(best_choice));
  result.lower_bound = result.solution.costs.total;
  result.status = SolveStatus::kOptimal;
  result.node_count = evaluated;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace forgeplan

#endif  // FORGEPLAN_ORACLE_HPP
