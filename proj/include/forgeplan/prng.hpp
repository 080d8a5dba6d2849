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
// SplitMix64: 64-bit permutation-based generator (Steele, Lea & Flood
// constants). All consumers draw through uniform_int's multiply-shift range
// reduction lo + floor(r * span / 2^64), which is monotone in the span for a
// fixed draw, pure integer arithmetic, and identical on every platform.

#ifndef FORGEPLAN_PRNG_HPP
#define FORGEPLAN_PRNG_HPP

#include <cstdint>
#include <initializer_list>

namespace forgeplan {

struct SplitMix64 {
  std::uint64_t state = 0;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    return mix(state);
  }

  // lo + floor(r * span / 2^64), monotone in span for a fixed draw.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
    std::uint64_t r = next();
    std::uint64_t offset = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(r) * span) >> 64);
    return lo + static_cast<std::int64_t>(offset);
  }
};

// Independent substream keyed by chaining the finalizer over the seed and a
// list of tags (stream kind, entity index, slot ...).
inline SplitMix64 substream(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = SplitMix64::mix(seed);
  for (std::uint64_t t : tags) s = SplitMix64::mix(s ^ t);
  return SplitMix64{s};
}

}  // namespace forgeplan

#endif  // FORGEPLAN_PRNG_HPP
