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
// Seeded random instance generation and instance file I/O.
//
// Reproducibility contract (all integer arithmetic, no platform variation):
//   * PRNG: SplitMix64 (Steele, Lea & Flood's published constants).
//   * mix(x) is the SplitMix64 output finalizer applied to x.
//   * Substreams: every entity draws from its own generator, seeded by
//     chaining the finalizer over (seed, stream kind, entity index[, slot]):
//       part i        -> SplitMix64(mix(mix(mix(seed) ^ 1) ^ i))
//       forging k     -> SplitMix64(mix(mix(mix(seed) ^ 2) ^ k))
//       option (i, j) -> SplitMix64(mix(mix(mix(mix(seed) ^ 3) ^ i) ^ j))
//   * uniform_int(lo, hi) maps one 64-bit draw r onto the range by the
//     multiply-shift reduction lo + floor(r * (hi-lo+1) / 2^64). For a fixed
//     draw the result is monotone in the range width, so widening a range
//     (or raising options_per_part) never rewinds another entity's stream.
//   * Draw order: part stream M_i, P_i, CMF_i, option count; option stream
//     forging id (redrawn until distinct from earlier slots), yield, CMU,
//     CMT; forging stream CFF, CFU, CFT, CFH.
//
// Changing options_per_part therefore only extends each part's option list;
// the shared option prefix and all quantities and costs stay identical.

#ifndef FORGEPLAN_INSTGEN_HPP
#define FORGEPLAN_INSTGEN_HPP

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "forgeplan/core.hpp"
#include "forgeplan/prng.hpp"

namespace forgeplan {

// ---------------------------------------------------------------------------
// Generation spec

struct Range {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

// Scale factors applied after sampling, for sensitivity sweeps.
struct Multipliers {
  double part_fixed_cost = 1.0;
  double forging_fixed_cost = 1.0;
  double machining_unit_cost = 1.0;
  double machining_transport_cost = 1.0;
  double forging_unit_cost = 1.0;
  double forging_transport_cost = 1.0;
  double holding_cost = 1.0;
  double forging_discount = 1.0;  // scales forging discount fractions, capped at 0.5
};

struct GenSpec {
  std::size_t n_parts = 0;
  std::size_t n_forgings = 0;
  int options_per_part = 2;
  std::uint64_t seed = 0;

  Range order_quantity{100, 500};
  Range inventory_quantity{10, 50};
  Range fixed_cost{1000, 5000};  // parts and forgings
  Range machining_unit_cost{10, 40};
  Range machining_transport_cost{1, 5};
  Range holding_cost{15, 40};
  Range forging_unit_cost{10, 40};
  Range forging_transport_cost{5, 25};
  std::vector<int> yield_choices{1, 2, 3};  // units of parts per forging unit
  DiscountSchedule discount_schedule{
      {{0.0, 0.0}, {250.0, 0.05}, {400.0, 0.10}}};
  Multipliers multipliers;

  void validate() const {
    if (n_parts < 1 || n_forgings < 1)
      throw ValidationError("genspec: need at least one part and one forging");
    if (options_per_part < 1)
      throw ValidationError("genspec: options_per_part must be >= 1");
    if (static_cast<std::size_t>(options_per_part) > n_forgings)
      throw ValidationError("genspec: options_per_part exceeds forging count");
    for (const Range* r :
         {&order_quantity, &inventory_quantity, &fixed_cost, &machining_unit_cost,
          &machining_transport_cost, &holding_cost, &forging_unit_cost,
          &forging_transport_cost})
      if (r->lo > r->hi) throw ValidationError("genspec: empty range");
    if (yield_choices.empty())
      throw ValidationError("genspec: no yield choices");
    for (int y : yield_choices)
      if (y < 1) throw ValidationError("genspec: yield must be >= 1");
    discount_schedule.validate("genspec");
  }
};

inline DiscountSchedule scaled_forging_schedule(const GenSpec& spec) {
  DiscountSchedule s = spec.discount_schedule;
  for (DiscountLevel& lv : s.levels)
    lv.discount = std::min(0.5, lv.discount * spec.multipliers.forging_discount);
  return s;
}

inline Instance generate(const GenSpec& spec) {
  spec.validate();
  const Multipliers& m = spec.multipliers;

  Instance instance;
  instance.forgings.reserve(spec.n_forgings);
  const DiscountSchedule forging_schedule = scaled_forging_schedule(spec);
  for (std::size_t k = 0; k < spec.n_forgings; ++k) {
    SplitMix64 rng = substream(spec.seed, {2, k});
    Forging f;
    f.id = static_cast<int>(k);
    f.fixed_order_cost =
        m.forging_fixed_cost * rng.uniform_int(spec.fixed_cost.lo, spec.fixed_cost.hi);
    f.unit_cost = m.forging_unit_cost *
                  rng.uniform_int(spec.forging_unit_cost.lo, spec.forging_unit_cost.hi);
    f.transport_cost =
        m.forging_transport_cost *
        rng.uniform_int(spec.forging_transport_cost.lo, spec.forging_transport_cost.hi);
    f.holding_cost =
        m.holding_cost * rng.uniform_int(spec.holding_cost.lo, spec.holding_cost.hi);
    f.discounts = forging_schedule;
    instance.forgings.push_back(std::move(f));
  }

  instance.parts.reserve(spec.n_parts);
  for (std::size_t i = 0; i < spec.n_parts; ++i) {
    SplitMix64 rng = substream(spec.seed, {1, i});
    Part p;
    p.id = static_cast<int>(i);
    p.order_quantity = rng.uniform_int(spec.order_quantity.lo, spec.order_quantity.hi);
    p.inventory_quantity =
        rng.uniform_int(spec.inventory_quantity.lo, spec.inventory_quantity.hi);
    p.fixed_order_cost =
        m.part_fixed_cost * rng.uniform_int(spec.fixed_cost.lo, spec.fixed_cost.hi);
    p.discounts = spec.discount_schedule;

    std::unordered_set<int> chosen;
    for (int j = 0; j < spec.options_per_part; ++j) {
      SplitMix64 orng = substream(spec.seed, {3, i, static_cast<std::uint64_t>(j)});
      int forging;
      do {
        forging = static_cast<int>(
            orng.uniform_int(0, static_cast<std::int64_t>(spec.n_forgings) - 1));
      } while (chosen.count(forging));
      chosen.insert(forging);
      MachiningOption o;
      o.forging = forging;
      std::int64_t yield_index = orng.uniform_int(
          0, static_cast<std::int64_t>(spec.yield_choices.size()) - 1);
      o.units_per_part = Rational(1, spec.yield_choices[yield_index]);
      o.machining_cost =
          m.machining_unit_cost *
          orng.uniform_int(spec.machining_unit_cost.lo, spec.machining_unit_cost.hi);
      o.transport_cost =
          m.machining_transport_cost *
          orng.uniform_int(spec.machining_transport_cost.lo,
                           spec.machining_transport_cost.hi);
      p.options.push_back(std::move(o));
    }
    instance.parts.push_back(std::move(p));
  }

  instance.validate();
  return instance;
}

// ---------------------------------------------------------------------------
// Instance document I/O (JSON, strict schema)

inline constexpr const char* kInstanceSchema = "forgeplan-instance-v1";

namespace io_detail {

using json = nlohmann::ordered_json;

inline void reject_unknown(const json& obj, const std::string& path,
                           std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) { ok = true; break; }
    if (!ok) throw ParseError(path + ": unknown field '" + key + "'");
  }
}

inline const json& field(const json& obj, const std::string& path,
                         const char* name) {
  auto it = obj.find(name);
  if (it == obj.end())
    throw ParseError(path + ": missing field '" + std::string(name) + "'");
  return *it;
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  return v.get<double>();
}

inline std::int64_t integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
  return v.get<std::int64_t>();
}

inline json schedule_to_json(const DiscountSchedule& s) {
  json arr = json::array();
  for (const DiscountLevel& lv : s.levels)
    arr.push_back({{"threshold", lv.threshold}, {"discount", lv.discount}});
  return arr;
}

inline DiscountSchedule schedule_from_json(const json& arr,
                                           const std::string& path) {
  if (!arr.is_array()) throw ParseError(path + ": expected an array");
  DiscountSchedule s;
  for (std::size_t d = 0; d < arr.size(); ++d) {
    const std::string p = path + "[" + std::to_string(d) + "]";
    const json& lvl = arr[d];
    if (!lvl.is_object()) throw ParseError(p + ": expected an object");
    reject_unknown(lvl, p, {"threshold", "discount"});
    s.levels.push_back({number(field(lvl, p, "threshold"), p + ".threshold"),
                        number(field(lvl, p, "discount"), p + ".discount")});
  }
  return s;
}

}  // namespace io_detail

inline std::string save_instance(const Instance& instance) {
  using io_detail::json;
  json doc;
  doc["schema"] = kInstanceSchema;
  doc["parts"] = json::array();
  for (const Part& p : instance.parts) {
    json options = json::array();
    for (const MachiningOption& o : p.options)
      options.push_back({{"forging", o.forging},
                         {"units_per_part", o.units_per_part.str()},
                         {"machining_cost", o.machining_cost},
                         {"transport_cost", o.transport_cost}});
    doc["parts"].push_back({{"id", p.id},
                            {"order_quantity", p.order_quantity},
                            {"inventory_quantity", p.inventory_quantity},
                            {"fixed_order_cost", p.fixed_order_cost},
                            {"discounts", io_detail::schedule_to_json(p.discounts)},
                            {"options", std::move(options)}});
  }
  doc["forgings"] = json::array();
  for (const Forging& f : instance.forgings)
    doc["forgings"].push_back({{"id", f.id},
                               {"fixed_order_cost", f.fixed_order_cost},
                               {"unit_cost", f.unit_cost},
                               {"transport_cost", f.transport_cost},
                               {"holding_cost", f.holding_cost},
                               {"discounts", io_detail::schedule_to_json(f.discounts)}});
  return doc.dump(2) + "\n";
}

inline Instance load_instance(const std::string& text) {
  using io_detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("$: expected an object");
  io_detail::reject_unknown(doc, "$", {"schema", "parts", "forgings"});
  const json& schema = io_detail::field(doc, "$", "schema");
  if (!schema.is_string() || schema.get<std::string>() != kInstanceSchema)
    throw ParseError("$.schema: expected \"" + std::string(kInstanceSchema) + "\"");

  Instance instance;
  const json& parts = io_detail::field(doc, "$", "parts");
  if (!parts.is_array()) throw ParseError("$.parts: expected an array");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string p = "$.parts[" + std::to_string(i) + "]";
    const json& jp = parts[i];
    if (!jp.is_object()) throw ParseError(p + ": expected an object");
    io_detail::reject_unknown(jp, p,
                              {"id", "order_quantity", "inventory_quantity",
                               "fixed_order_cost", "discounts", "options"});
    Part part;
    part.id = static_cast<int>(io_detail::integer(io_detail::field(jp, p, "id"), p + ".id"));
    part.order_quantity =
        io_detail::integer(io_detail::field(jp, p, "order_quantity"), p + ".order_quantity");
    part.inventory_quantity = io_detail::integer(
        io_detail::field(jp, p, "inventory_quantity"), p + ".inventory_quantity");
    part.fixed_order_cost = io_detail::number(
        io_detail::field(jp, p, "fixed_order_cost"), p + ".fixed_order_cost");
    part.discounts = io_detail::schedule_from_json(
        io_detail::field(jp, p, "discounts"), p + ".discounts");
    const json& options = io_detail::field(jp, p, "options");
    if (!options.is_array()) throw ParseError(p + ".options: expected an array");
    for (std::size_t j = 0; j < options.size(); ++j) {
      const std::string q = p + ".options[" + std::to_string(j) + "]";
      const json& jo = options[j];
      if (!jo.is_object()) throw ParseError(q + ": expected an object");
      io_detail::reject_unknown(
          jo, q, {"forging", "units_per_part", "machining_cost", "transport_cost"});
      MachiningOption o;
      o.forging = static_cast<int>(
          io_detail::integer(io_detail::field(jo, q, "forging"), q + ".forging"));
      const io_detail::json& upp = io_detail::field(jo, q, "units_per_part");
      if (!upp.is_string())
        throw ParseError(q + ".units_per_part: expected a rational string");
      o.units_per_part = Rational::parse(upp.get<std::string>());
      o.machining_cost = io_detail::number(
          io_detail::field(jo, q, "machining_cost"), q + ".machining_cost");
      o.transport_cost = io_detail::number(
          io_detail::field(jo, q, "transport_cost"), q + ".transport_cost");
      part.options.push_back(std::move(o));
    }
    instance.parts.push_back(std::move(part));
  }

  const json& forgings = io_detail::field(doc, "$", "forgings");
  if (!forgings.is_array()) throw ParseError("$.forgings: expected an array");
  for (std::size_t k = 0; k < forgings.size(); ++k) {
    const std::string p = "$.forgings[" + std::to_string(k) + "]";
    const json& jf = forgings[k];
    if (!jf.is_object()) throw ParseError(p + ": expected an object");
    io_detail::reject_unknown(jf, p,
                              {"id", "fixed_order_cost", "unit_cost",
                               "transport_cost", "holding_cost", "discounts"});
    Forging f;
    f.id = static_cast<int>(io_detail::integer(io_detail::field(jf, p, "id"), p + ".id"));
    f.fixed_order_cost = io_detail::number(
        io_detail::field(jf, p, "fixed_order_cost"), p + ".fixed_order_cost");
    f.unit_cost =
        io_detail::number(io_detail::field(jf, p, "unit_cost"), p + ".unit_cost");
    f.transport_cost = io_detail::number(
        io_detail::field(jf, p, "transport_cost"), p + ".transport_cost");
    f.holding_cost = io_detail::number(
        io_detail::field(jf, p, "holding_cost"), p + ".holding_cost");
    f.discounts = io_detail::schedule_from_json(
        io_detail::field(jf, p, "discounts"), p + ".discounts");
    instance.forgings.push_back(std::move(f));
  }

  instance.validate();
  return instance;
}

}  // namespace forgeplan

#endif  // FORGEPLAN_INSTGEN_HPP
