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
// Fixed-format MPS export/import for LinearModel.
//
// Names are rewritten to fit the 8-character limit: variables become V<j>,
// constraints R<i> (indexes in model order), the objective row OBJ. The
// original-to-MPS mapping is available as a two-column sidecar table.
// Integral variables are wrapped in 'INTORG'/'INTEND' markers, binaries get
// explicit BV bound lines, and a nonzero objective offset c is carried as an
// RHS entry of -c on the objective row. Values are printed in shortest
// round-trip form, so export -> parse -> export is byte-identical.

#ifndef FORGEPLAN_MPS_HPP
#define FORGEPLAN_MPS_HPP

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "forgeplan/milp.hpp"

namespace forgeplan {
namespace mps_detail {

inline std::string fmt_value(double v) {
  if (!std::isfinite(v)) throw Error("mps: non-finite value");
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Classic fixed-format field starts (0-indexed): 1, 4, 14, 24, 39, 49.
inline void put_field(std::string& line, std::size_t start, const std::string& s) {
  if (line.size() >= start)
    line.push_back(' ');
  else
    line.append(start - line.size(), ' ');
  line += s;
}

inline std::string row_line(const std::string& f1, const std::string& f2) {
  std::string line;
  put_field(line, 1, f1);
  put_field(line, 4, f2);
  return line;
}

inline std::string entry_line(const std::string& f2, const std::string& f3,
                              const std::string& f4, const std::string& f5 = "",
                              const std::string& f6 = "") {
  std::string line;
  put_field(line, 4, f2);
  put_field(line, 14, f3);
  put_field(line, 24, f4);
  if (!f5.empty()) {
    put_field(line, 39, f5);
    put_field(line, 49, f6);
  }
  return line;
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

inline double parse_value(const std::string& t, std::size_t line_no) {
  double v = 0.0;
  auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size())
    throw ParseError("mps line " + std::to_string(line_no) + ": bad number '" +
                     t + "'");
  return v;
}

}  // namespace mps_detail

inline constexpr std::size_t kMpsMaxNames = 100000000;  // fits "V99999999"

inline std::string mps_variable_name(std::size_t j) {
  if (j >= kMpsMaxNames) throw Error("mps: name table overflow");
  return "V" + std::to_string(j);
}
inline std::string mps_constraint_name(std::size_t i) {
  if (i >= kMpsMaxNames) throw Error("mps: name table overflow");
  return "R" + std::to_string(i);
}

// Two-column sidecar: original name, MPS name.
inline std::string mps_name_table(const LinearModel& model) {
  std::string out;
  out += "OBJECTIVE OBJ\n";
  for (std::size_t i = 0; i < model.constraint_count(); ++i)
    out += model.constraint(static_cast<int>(i)).name + " " +
           mps_constraint_name(i) + "\n";
  for (std::size_t j = 0; j < model.variable_count(); ++j)
    out += model.variable(static_cast<int>(j)).name + " " +
           mps_variable_name(j) + "\n";
  return out;
}

inline std::string export_mps(const LinearModel& model) {
  using namespace mps_detail;
  std::string out;
  auto emit = [&out](const std::string& line) { out += line; out += '\n'; };

  std::string header = "NAME";
  if (!model.name().empty()) put_field(header, 14, model.name());
  emit(header);

  const bool empty_model = model.variable_count() == 0 &&
                           model.constraint_count() == 0 &&
                           model.objective().empty() &&
                           model.objective_offset() == 0.0;
  if (empty_model) {
    emit("ENDATA");
    return out;
  }

  emit("ROWS");
  emit(row_line("N", "OBJ"));
  for (std::size_t i = 0; i < model.constraint_count(); ++i) {
    const Constraint& con = model.constraint(static_cast<int>(i));
    emit(row_line(std::string(1, static_cast<char>(con.sense)),
                  mps_constraint_name(i)));
  }

  // Column-major view: objective entry first, then constraints in row order.
  std::vector<std::vector<std::pair<std::string, double>>> columns(
      model.variable_count());
  for (const auto& [j, c] : model.objective())
    columns[j].emplace_back("OBJ", c);
  for (std::size_t i = 0; i < model.constraint_count(); ++i)
    for (const auto& [j, c] : model.constraint(static_cast<int>(i)).terms)
      columns[j].emplace_back(mps_constraint_name(i), c);

  emit("COLUMNS");
  bool in_integer_block = false;
  auto set_block = [&](bool integral) {
    if (integral == in_integer_block) return;
    std::string line;
    put_field(line, 4, "MARKER");
    put_field(line, 14, "'MARKER'");
    put_field(line, 39, integral ? "'INTORG'" : "'INTEND'");
    emit(line);
    in_integer_block = integral;
  };
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    set_block(model.variable(static_cast<int>(j)).integral);
    const std::string vname = mps_variable_name(j);
    auto& entries = columns[j];
    if (entries.empty()) entries.emplace_back("OBJ", 0.0);  // register column
    for (std::size_t e = 0; e < entries.size(); e += 2) {
      if (e + 1 < entries.size())
        emit(entry_line(vname, entries[e].first, fmt_value(entries[e].second),
                        entries[e + 1].first, fmt_value(entries[e + 1].second)));
      else
        emit(entry_line(vname, entries[e].first, fmt_value(entries[e].second)));
    }
  }
  set_block(false);

  emit("RHS");
  std::vector<std::pair<std::string, double>> rhs_entries;
  if (model.objective_offset() != 0.0)
    rhs_entries.emplace_back("OBJ", -model.objective_offset());
  for (std::size_t i = 0; i < model.constraint_count(); ++i)
    if (model.constraint(static_cast<int>(i)).rhs != 0.0)
      rhs_entries.emplace_back(mps_constraint_name(i),
                               model.constraint(static_cast<int>(i)).rhs);
  for (std::size_t e = 0; e < rhs_entries.size(); e += 2) {
    if (e + 1 < rhs_entries.size())
      emit(entry_line("RHS", rhs_entries[e].first,
                      fmt_value(rhs_entries[e].second), rhs_entries[e + 1].first,
                      fmt_value(rhs_entries[e + 1].second)));
    else
      emit(entry_line("RHS", rhs_entries[e].first,
                      fmt_value(rhs_entries[e].second)));
  }

  emit("BOUNDS");
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    const Variable& var = model.variable(static_cast<int>(j));
    const std::string vname = mps_variable_name(j);
    auto bound = [&](const char* tag, bool with_value, double value = 0.0) {
      std::string line;
      put_field(line, 1, tag);
      put_field(line, 4, "BND");
      put_field(line, 14, vname);
      if (with_value) put_field(line, 24, fmt_value(value));
      emit(line);
    };
    if (var.integral && var.lower == 0.0 && var.upper == 1.0) {
      bound("BV", false);
    } else if (var.lower == -kInfinity && var.upper == kInfinity) {
      bound("FR", false);
    } else if (var.lower == var.upper) {
      bound("FX", true, var.lower);
    } else {
      if (var.lower == -kInfinity)
        bound("MI", false);
      else if (var.lower != 0.0)
        bound("LO", true, var.lower);
      if (var.upper != kInfinity) bound("UP", true, var.upper);
    }
  }

  emit("ENDATA");
  return out;
}

inline LinearModel parse_mps(std::string_view text) {
  using namespace mps_detail;

  enum Section { kStart, kName, kRows, kColumns, kRhs, kBounds, kDone };
  Section section = kStart;
  auto section_name = [](Section s) -> const char* {
    switch (s) {
      case kStart: return "start";
      case kName: return "NAME";
      case kRows: return "ROWS";
      case kColumns: return "COLUMNS";
      case kRhs: return "RHS";
      case kBounds: return "BOUNDS";
      default: return "ENDATA";
    }
  };

  std::string model_name;
  std::string obj_name;
  bool have_obj = false;

  struct RawRow {
    std::string name;
    Sense sense;
    double rhs = 0.0;
    bool rhs_set = false;
    std::vector<std::pair<int, double>> terms;
  };
  struct RawVar {
    std::string name;
    bool integral = false;
    double lower = 0.0;
    double upper = kInfinity;
  };
  std::vector<RawRow> rows;
  std::vector<RawVar> vars;
  std::unordered_map<std::string, int> row_index, var_index;
  std::vector<std::pair<int, double>> objective;
  double offset = 0.0;
  bool marker_integral = false;

  auto find_or_add_var = [&](const std::string& name) -> int {
    auto it = var_index.find(name);
    if (it != var_index.end()) return it->second;
    int j = static_cast<int>(vars.size());
    var_index.emplace(name, j);
    vars.push_back(RawVar{name, marker_integral, 0.0, kInfinity});
    return j;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size() && section != kDone) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty() || line[0] == '*') continue;

    if (line[0] != ' ') {  // section header
      auto toks = tokens(line);
      const std::string& kw = toks[0];
      auto expect_after = [&](Section min_prev) {
        if (section >= kRhs && kw == "ROWS")
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": section ROWS after " + section_name(section));
        if (section < min_prev)
          throw ParseError("mps line " + std::to_string(line_no) + ": section " +
                           kw + " before " + section_name(min_prev));
      };
      if (kw == "NAME") {
        if (section != kStart)
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": NAME after " + section_name(section));
        if (toks.size() > 1) model_name = toks[1];
        section = kName;
      } else if (kw == "ROWS") {
        if (section > kName)
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": section ROWS after " + section_name(section));
        section = kRows;
      } else if (kw == "COLUMNS") {
        if (section != kRows)
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": COLUMNS requires a preceding ROWS section");
        section = kColumns;
      } else if (kw == "RHS") {
        expect_after(kColumns);
        section = kRhs;
      } else if (kw == "RANGES") {
        throw ParseError("mps line " + std::to_string(line_no) +
                         ": RANGES section not supported");
      } else if (kw == "BOUNDS") {
        expect_after(kColumns);
        section = kBounds;
      } else if (kw == "ENDATA") {
        section = kDone;
      } else {
        throw ParseError("mps line " + std::to_string(line_no) +
                         ": unknown section '" + kw + "'");
      }
      continue;
    }

    auto toks = tokens(line);
    switch (section) {
      case kRows: {
        if (toks.size() != 2)
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": malformed ROWS entry");
        const std::string& sense = toks[0];
        const std::string& name = toks[1];
        if (row_index.count(name) || (have_obj && name == obj_name))
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": duplicate row name '" + name + "'");
        if (sense == "N") {
          if (have_obj)
            throw ParseError("mps line " + std::to_string(line_no) +
                             ": multiple objective rows");
          obj_name = name;
          have_obj = true;
        } else if (sense == "L" || sense == "G" || sense == "E") {
          row_index.emplace(name, static_cast<int>(rows.size()));
          rows.push_back(RawRow{name, static_cast<Sense>(sense[0]), 0.0, false, {}});
        } else {
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": unknown row sense '" + sense + "'");
        }
        break;
      }
      case kColumns: {
        if (toks.size() >= 2 && toks[1] == "'MARKER'") {
          const std::string& kind = toks.back();
          if (kind == "'INTORG'")
            marker_integral = true;
          else if (kind == "'INTEND'")
            marker_integral = false;
          else
            throw ParseError("mps line " + std::to_string(line_no) +
                             ": unknown marker '" + kind + "'");
          break;
        }
        if (toks.size() != 3 && toks.size() != 5)
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": malformed COLUMNS entry");
        int j = find_or_add_var(toks[0]);
        for (std::size_t e = 1; e + 1 < toks.size(); e += 2) {
          const std::string& row = toks[e];
          double value = parse_value(toks[e + 1], line_no);
          if (have_obj && row == obj_name) {
            objective.emplace_back(j, value);
          } else {
            auto it = row_index.find(row);
            if (it == row_index.end())
              throw ParseError("mps line " + std::to_string(line_no) +
                               ": unknown row '" + row + "'");
            rows[it->second].terms.emplace_back(j, value);
          }
        }
        break;
      }
      case kRhs: {
        if (toks.size() != 3 && toks.size() != 5)
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": malformed RHS entry");
        for (std::size_t e = 1; e + 1 < toks.size(); e += 2) {
          const std::string& row = toks[e];
          double value = parse_value(toks[e + 1], line_no);
          if (have_obj && row == obj_name) {
            offset = -value;
          } else {
            auto it = row_index.find(row);
            if (it == row_index.end())
              throw ParseError("mps line " + std::to_string(line_no) +
                               ": unknown row '" + row + "'");
            if (rows[it->second].rhs_set)
              throw ParseError("mps line " + std::to_string(line_no) +
                               ": duplicate RHS for row '" + row + "'");
            rows[it->second].rhs = value;
            rows[it->second].rhs_set = true;
          }
        }
        break;
      }
      case kBounds: {
        if (toks.size() != 3 && toks.size() != 4)
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": malformed BOUNDS entry");
        const std::string& tag = toks[0];
        auto it = var_index.find(toks[2]);
        if (it == var_index.end())
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": unknown column '" + toks[2] + "'");
        RawVar& var = vars[it->second];
        auto value = [&]() {
          if (toks.size() != 4)
            throw ParseError("mps line " + std::to_string(line_no) + ": bound '" +
                             tag + "' requires a value");
          return parse_value(toks[3], line_no);
        };
        if (tag == "UP") var.upper = value();
        else if (tag == "LO") var.lower = value();
        else if (tag == "FX") { var.lower = var.upper = value(); }
        else if (tag == "FR") { var.lower = -kInfinity; var.upper = kInfinity; }
        else if (tag == "MI") var.lower = -kInfinity;
        else if (tag == "PL") var.upper = kInfinity;
        else if (tag == "BV") { var.lower = 0.0; var.upper = 1.0; var.integral = true; }
        else if (tag == "UI") { var.upper = value(); var.integral = true; }
        else if (tag == "LI") { var.lower = value(); var.integral = true; }
        else
          throw ParseError("mps line " + std::to_string(line_no) +
                           ": unknown bound tag '" + tag + "'");
        break;
      }
      case kName:
      case kStart:
        throw ParseError("mps line " + std::to_string(line_no) +
                         ": data before ROWS section");
      default:
        break;
    }
  }

  if (section != kDone)
    throw ParseError("mps: truncated stream, missing ENDATA (in section " +
                     std::string(section_name(section)) + ")");

  LinearModel model;
  model.set_name(model_name);
  for (const RawVar& var : vars)
    model.add_variable(var.name, var.lower, var.upper, var.integral);
  for (RawRow& row : rows)
    model.add_constraint(row.name, std::move(row.terms), row.sense, row.rhs);
  model.set_objective(std::move(objective), offset);
  return model;
}

}  // namespace forgeplan

#endif  // FORGEPLAN_MPS_HPP
