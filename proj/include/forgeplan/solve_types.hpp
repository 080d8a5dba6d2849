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

#ifndef FORGEPLAN_SOLVE_TYPES_HPP
#define FORGEPLAN_SOLVE_TYPES_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "forgeplan/core.hpp"

namespace forgeplan {

enum class SolveStatus { kOptimal, kGapLimit, kTimeLimit };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kGapLimit: return "gap-limit";
    case SolveStatus::kTimeLimit: return "time-limit";
  }
  return "?";
}

struct SolveConfig {
  std::optional<double> time_limit_s;  // none = run to completion
  double target_gap = 0.0;             // relative; 0 proves optimality
  int worker_count = 1;
  std::uint64_t seed = 0;  // tie-shuffling of the branch order only

  void validate() const {
    if (!(target_gap >= 0.0 && target_gap < 1.0))
      throw ValidationError("solve config: gap must be in [0, 1)");
    if (worker_count < 1)
      throw ValidationError("solve config: worker_count must be >= 1");
    if (time_limit_s && !(*time_limit_s > 0.0))
      throw ValidationError("solve config: time limit must be positive");
  }
};

struct SolveResult {
  Solution solution;
  double lower_bound = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
  std::uint64_t node_count = 0;
  double wall_time_s = 0.0;

  double gap() const {
    return (solution.costs.total - lower_bound) / std::max(1.0, lower_bound);
  }
};

}  // namespace forgeplan

#endif  // FORGEPLAN_SOLVE_TYPES_HPP
