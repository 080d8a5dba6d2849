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
// Command-line front end: generate instances, solve them exactly, benchmark
// against the no-consolidation baseline, run sensitivity sweeps, export MPS
// models, and cross-check the solver against brute force.
//
// Exit codes: 0 success, 2 usage, 3 parse, 4 infeasible, 5 limit hit, 6 I/O.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "forgeplan/instgen.hpp"
#include "forgeplan/mps.hpp"
#include "forgeplan/oracle.hpp"
#include "forgeplan/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitLimit = 5;
constexpr int kExitIo = 6;

class IoError : public forgeplan::Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw forgeplan::ValidationError("bad value list entry '" + item + "'");
    }
  }
  if (values.empty()) throw forgeplan::ValidationError("empty value list");
  return values;
}

struct CommonSolveFlags {
  double time_limit = 0.0;  // 0 = none
  double gap = 0.0;
  int workers = 1;
  std::uint64_t seed = 0;

  forgeplan::SolveConfig config() const {
    forgeplan::SolveConfig c;
    if (time_limit > 0.0) c.time_limit_s = time_limit;
    c.target_gap = gap;
    c.worker_count = workers;
    c.seed = seed;
    return c;
  }
};

void add_solve_flags(CLI::App* cmd, CommonSolveFlags& flags) {
  cmd->add_option("--time-limit", flags.time_limit,
                  "Wall-clock limit in seconds (0 = none)");
  cmd->add_option("--gap", flags.gap, "Stop at this relative optimality gap");
  cmd->add_option("--workers", flags.workers, "Parallel search workers")
      ->check(CLI::PositiveNumber);
}

void print_solve_report(const forgeplan::SolveResult& result,
                        std::size_t n_forgings) {
  const forgeplan::CostBreakdown& c = result.solution.costs;
  std::cout << "machining,forging,inventory,total,selected,status,lower_bound,"
               "gap,nodes,time_s\n";
  std::cout << forgeplan::csv_number(c.machining) << ","
            << forgeplan::csv_number(c.forging) << ","
            << forgeplan::csv_number(c.inventory) << ","
            << forgeplan::csv_number(c.total) << ","
            << result.solution.selected.size() << ","
            << forgeplan::status_name(result.status) << ","
            << forgeplan::csv_number(result.lower_bound) << ","
            << forgeplan::csv_number(result.gap()) << "," << result.node_count
            << "," << forgeplan::csv_number(result.wall_time_s) << "\n";
  std::cout << "status=" << forgeplan::status_name(result.status)
            << " total=" << forgeplan::csv_number(c.total)
            << " selected=" << result.solution.selected.size() << "/"
            << n_forgings << " bound=" << forgeplan::csv_number(result.lower_bound)
            << " gap=" << forgeplan::csv_number(result.gap()) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forgeplan: exact two-tier forging consolidation"};
  app.require_subcommand(1);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Generate a random instance");
  std::size_t gen_parts = 0, gen_forgings = 0;
  int gen_options = 2;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen_cmd->add_option("--parts", gen_parts, "Number of parts")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--forgings", gen_forgings, "Number of forgings")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--options", gen_options, "Maximum options per part")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen_seed, "Generator seed")->required();
  gen_cmd->add_option("-o,--out", gen_out, "Instance file path")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance to optimality");
  std::string solve_instance, solve_out;
  CommonSolveFlags solve_flags;
  solve_cmd->add_option("instance", solve_instance, "Instance file")->required();
  solve_cmd->add_option("-o,--out", solve_out, "Solution document path");
  solve_cmd->add_option("--seed", solve_flags.seed, "Tie-shuffling seed");
  add_solve_flags(solve_cmd, solve_flags);

  // bench
  auto* bench_cmd = app.add_subcommand(
      "bench", "Compare consolidation against the no-consolidation baseline");
  std::string bench_instance, bench_out, bench_solutions_dir;
  std::size_t bench_parts = 0, bench_forgings = 0;
  int bench_options = 2;
  std::uint64_t bench_seed = 0;
  bool bench_have_seed = false;
  CommonSolveFlags bench_flags;
  bench_cmd->add_option("--instance", bench_instance, "Instance file");
  bench_cmd->add_option("--parts", bench_parts, "Parts (generated instance)");
  bench_cmd->add_option("--forgings", bench_forgings,
                        "Forgings (generated instance)");
  bench_cmd->add_option("--options", bench_options, "Maximum options per part");
  bench_cmd
      ->add_option_function<std::uint64_t>(
          "--seed",
          [&](const std::uint64_t& s) {
            bench_seed = s;
            bench_have_seed = true;
          },
          "Generator seed")
      ->type_name("UINT");
  bench_cmd->add_option("-o,--out", bench_out, "CSV output path (default stdout)");
  bench_cmd->add_option("--solutions-dir", bench_solutions_dir,
                        "Directory for with/without solution documents");
  add_solve_flags(bench_cmd, bench_flags);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a sensitivity sweep");
  std::string sweep_kind_name, sweep_values_text, sweep_out;
  std::size_t sweep_parts = 100, sweep_forgings = 100;
  int sweep_options = 2;
  std::uint64_t sweep_seed = 0;
  CommonSolveFlags sweep_flags;
  sweep_cmd
      ->add_option("--kind", sweep_kind_name,
                   "One of fixed-cost, options, discount, holding")
      ->required();
  sweep_cmd->add_option("--parts", sweep_parts, "Parts (default 100)");
  sweep_cmd->add_option("--forgings", sweep_forgings, "Forgings (default 100)");
  sweep_cmd->add_option("--options", sweep_options,
                        "Base maximum options per part");
  sweep_cmd->add_option("--seed", sweep_seed, "Generator seed")->required();
  sweep_cmd->add_option("--values", sweep_values_text,
                        "Comma-separated sweep values (default per kind)");
  sweep_cmd->add_option("-o,--out", sweep_out, "CSV output path (default stdout)");
  add_solve_flags(sweep_cmd, sweep_flags);

  // export
  auto* export_cmd = app.add_subcommand("export", "Export an instance as MPS");
  std::string export_instance, export_out;
  export_cmd->add_option("instance", export_instance, "Instance file")->required();
  export_cmd->add_option("-o,--out", export_out, "MPS output path")->required();

  // oracle-check
  auto* oracle_cmd = app.add_subcommand(
      "oracle-check", "Cross-check the solver against brute force");
  std::size_t oc_parts = 6, oc_forgings = 4, oc_count = 20;
  int oc_options = 2;
  std::uint64_t oc_seed = 0, oc_limit = forgeplan::kDefaultEnumerationLimit;
  oracle_cmd->add_option("--parts", oc_parts, "Parts per instance");
  oracle_cmd->add_option("--forgings", oc_forgings, "Forgings per instance");
  oracle_cmd->add_option("--options", oc_options, "Maximum options per part");
  oracle_cmd->add_option("--seed", oc_seed, "Base seed")->required();
  oracle_cmd->add_option("--count", oc_count, "Number of instances");
  oracle_cmd->add_option("--limit", oc_limit, "Enumeration limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) {
      forgeplan::GenSpec spec;
      spec.n_parts = gen_parts;
      spec.n_forgings = gen_forgings;
      spec.options_per_part = gen_options;
      spec.seed = gen_seed;
      write_file(gen_out, forgeplan::save_instance(forgeplan::generate(spec)));
      return kExitOk;
    }

    if (*solve_cmd) {
      forgeplan::Instance instance =
          forgeplan::load_instance(read_file(solve_instance));
      forgeplan::SolveResult result =
          forgeplan::solve(instance, solve_flags.config());
      forgeplan::verify(instance, result.solution);
      print_solve_report(result, instance.forgings.size());
      if (!solve_out.empty())
        write_file(solve_out, forgeplan::save_solution(result.solution, &result));
      return result.status == forgeplan::SolveStatus::kTimeLimit ? kExitLimit
                                                                 : kExitOk;
    }

    if (*bench_cmd) {
      forgeplan::Instance instance;
      if (!bench_instance.empty()) {
        instance = forgeplan::load_instance(read_file(bench_instance));
      } else {
        if (!bench_have_seed)
          throw forgeplan::ValidationError(
              "bench: --seed is required when generating an instance");
        forgeplan::GenSpec spec;
        spec.n_parts = bench_parts;
        spec.n_forgings = bench_forgings;
        spec.options_per_part = bench_options;
        spec.seed = bench_seed;
        instance = forgeplan::generate(spec);
      }
      forgeplan::Solution without = forgeplan::baseline_no_consolidation(instance);
      forgeplan::SolveResult with =
          forgeplan::solve(instance, bench_flags.config());
      forgeplan::verify(instance, with.solution);
      forgeplan::BenchRow row = forgeplan::bench_row(instance, with, without);
      std::string csv =
          forgeplan::bench_csv_header() + "\n" + forgeplan::bench_csv_row(row) + "\n";
      if (bench_out.empty())
        std::cout << csv;
      else
        write_file(bench_out, csv);
      if (!bench_solutions_dir.empty()) {
        write_file(bench_solutions_dir + "/with.json",
                   forgeplan::save_solution(with.solution, &with));
        write_file(bench_solutions_dir + "/without.json",
                   forgeplan::save_solution(without));
      }
      return row.status == forgeplan::SolveStatus::kTimeLimit ? kExitLimit
                                                              : kExitOk;
    }

    if (*sweep_cmd) {
      forgeplan::SweepKind kind = forgeplan::parse_sweep_kind(sweep_kind_name);
      forgeplan::GenSpec base;
      base.n_parts = sweep_parts;
      base.n_forgings = sweep_forgings;
      base.options_per_part = sweep_options;
      base.seed = sweep_seed;
      std::vector<double> values = sweep_values_text.empty()
                                       ? forgeplan::default_sweep_values(kind)
                                       : parse_value_list(sweep_values_text);
      forgeplan::SweepReport report =
          forgeplan::run_sweep(kind, base, values, sweep_flags.config());
      std::string csv = forgeplan::sweep_csv_header() + "\n";
      bool limit_hit = false;
      for (const forgeplan::SweepPoint& point : report.points) {
        csv += forgeplan::sweep_csv_row(kind, point) + "\n";
        limit_hit |= point.row.status == forgeplan::SolveStatus::kTimeLimit;
      }
      if (sweep_out.empty())
        std::cout << csv;
      else
        write_file(sweep_out, csv);
      return limit_hit ? kExitLimit : kExitOk;
    }

    if (*export_cmd) {
      forgeplan::Instance instance =
          forgeplan::load_instance(read_file(export_instance));
      forgeplan::BuildResult built = forgeplan::build_model(instance);
      write_file(export_out, forgeplan::export_mps(built.model));
      write_file(export_out + ".names", forgeplan::mps_name_table(built.model));
      return kExitOk;
    }

    if (*oracle_cmd) {
      bool all_match = true;
      for (std::size_t t = 0; t < oc_count; ++t) {
        forgeplan::GenSpec spec;
        spec.n_parts = oc_parts;
        spec.n_forgings = oc_forgings;
        spec.options_per_part = oc_options;
        spec.seed = oc_seed + t;
        forgeplan::Instance instance = forgeplan::generate(spec);
        forgeplan::SolveResult fast = forgeplan::solve(instance);
        forgeplan::SolveResult exact = forgeplan::brute_force(instance, oc_limit);
        double ref = std::max(1.0, exact.solution.costs.total);
        bool match = std::abs(fast.solution.costs.total -
                              exact.solution.costs.total) <= 1e-6 * ref;
        all_match &= match;
        std::cout << "seed " << spec.seed << ": solver "
                  << forgeplan::csv_number(fast.solution.costs.total)
                  << " brute-force "
                  << forgeplan::csv_number(exact.solution.costs.total) << " "
                  << (match ? "MATCH" : "MISMATCH") << "\n";
      }
      std::cout << (all_match ? "all instances match" : "MISMATCH detected")
                << "\n";
      return all_match ? kExitOk : 1;
    }
  } catch (const forgeplan::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const forgeplan::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const forgeplan::EnumerationLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLimit;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const forgeplan::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
