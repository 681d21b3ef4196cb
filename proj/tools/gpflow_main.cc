// Copyright 2026 The gpflow Authors.
//
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

// Command-line front end.
//
//   gpflow solve --graph G.dimacs [--demands b.json] --epsilon 0.1 ...
//   gpflow oracle --graph G.dimacs [--demands b.json]
//   gpflow generate --kind grid --n 8 --seed 3 --out G.dimacs
//
// Exit codes: 0 success, 2 infeasible input, 3 internal contract violation
// or stage failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gpflow/driver.h"
#include "gpflow/errors.h"
#include "gpflow/graph_io.h"
#include "gpflow/latprecond.h"
#include "gpflow/oracle.h"
#include "json.hpp"

namespace {

constexpr int kExitInfeasible = 2;
constexpr int kExitInternal = 3;

struct SolveArgs {
  std::string graph;
  std::string demands;
  double epsilon = 0.1;
  std::uint64_t seed = 1;
  std::optional<int> levels;
  std::optional<int> dim;
  std::optional<double> kappa;
  std::string emit_json;
  std::string emit_chain;
  bool oracle_check = false;
  bool theoretical = false;
  bool timings = false;
};

struct GenerateArgs {
  std::string kind = "random_geometric";
  int n = 50;
  std::uint64_t seed = 1;
  bool unit = false;
  std::string out;
};

gpflow::FlowInstance Load(const std::string& graph, const std::string& demands) {
  gpflow::FlowInstance inst = gpflow::ReadDimacsFile(graph);
  if (!demands.empty()) {
    inst.demands = gpflow::ReadDemandsFile(demands, inst.graph.num_vertices());
    gpflow::CheckDemand(inst.graph, inst.demands);
  }
  return inst;
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw gpflow::InfeasibleInput("cannot write " + path);
  out << text << '\n';
}

int RunSolve(const SolveArgs& args) {
  const gpflow::FlowInstance inst = Load(args.graph, args.demands);
  gpflow::PipelineConfig config;
  config.epsilon = args.epsilon;
  config.seed = args.seed;
  config.levels = args.levels;
  config.dim = args.dim;
  config.kappa_assumed = args.kappa;
  if (args.theoretical) config.schedule = gpflow::Schedule::kTheoretical;
  const gpflow::SolveReport report =
      gpflow::SolveMinCost(inst.graph, inst.demands, config);
  std::string json = gpflow::ReportJson(report, args.timings);
  if (args.oracle_check) {
    auto doc = nlohmann::ordered_json::parse(json);
    const gpflow::McfResult exact = gpflow::ExactMcf(inst.graph, inst.demands);
    doc["oracle"] = {{"opt", exact.cost},
                     {"ratio", exact.cost > 0.0 ? report.cost / exact.cost : 1.0}};
    json = doc.dump(2);
  }
  WriteText(args.emit_json, json);
  if (!args.emit_chain.empty()) {
    WriteText(args.emit_chain, gpflow::ChainDumpJson(report.chain));
  }
  std::cerr << "cost " << report.cost << "  dual " << report.dual_value
            << "  ratio " << report.gap_ratio << '\n';
  return 0;
}

int RunOracle(const std::string& graph, const std::string& demands) {
  const gpflow::FlowInstance inst = Load(graph, demands);
  const gpflow::McfResult exact = gpflow::ExactMcf(inst.graph, inst.demands);
  nlohmann::ordered_json doc;
  doc["opt"] = exact.cost;
  doc["method"] = "successive_shortest_paths";
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int RunGenerate(const GenerateArgs& args) {
  gpflow::InstanceParams params;
  params.kind = gpflow::ParseInstanceKind(args.kind);
  params.n = args.n;
  params.unit_lengths = args.unit;
  const gpflow::GeneratedInstance inst =
      gpflow::GenerateInstance(params, args.seed);
  if (args.out.empty() || args.out == "-") {
    gpflow::WriteDimacs(std::cout, inst.graph, inst.demands);
  } else {
    std::ofstream out(args.out);
    if (!out) throw gpflow::InfeasibleInput("cannot write " + args.out);
    gpflow::WriteDimacs(out, inst.graph, inst.demands);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate undirected min-cost flow with dual certificates"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* s = app.add_subcommand("solve", "Solve a min-cost flow instance");
  s->add_option("--graph", solve.graph, "Graph file")->required();
  s->add_option("--demands", solve.demands, "Demand JSON file");
  s->add_option("--epsilon", solve.epsilon, "Target relative error")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  s->add_option("--seed", solve.seed, "Random seed");
  s->add_option("--levels", solve.levels, "Lattice levels T");
  s->add_option("--dim", solve.dim, "Embedding dimension k");
  s->add_option("--kappa", solve.kappa, "Assumed condition number");
  s->add_option("--emit-json", solve.emit_json, "Report path ('-' = stdout)");
  s->add_option("--emit-chain", solve.emit_chain, "Reduction chain dump path");
  s->add_flag("--oracle-check", solve.oracle_check,
              "Compare against the exact min-cost flow");
  s->add_flag("--theoretical", solve.theoretical,
              "Use the a-priori solver schedule");
  s->add_flag("--timings", solve.timings, "Include stage timings");

  std::string oracle_graph, oracle_demands;
  CLI::App* o = app.add_subcommand("oracle", "Exact min-cost flow value");
  o->add_option("--graph", oracle_graph, "Graph file")->required();
  o->add_option("--demands", oracle_demands, "Demand JSON file");

  GenerateArgs gen;
  CLI::App* g = app.add_subcommand("generate", "Write a seeded instance");
  g->add_option("--kind", gen.kind,
                "random_geometric, grid, star, path or dipole");
  g->add_option("--n", gen.n, "Vertices (grid: side length)");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_flag("--unit-lengths", gen.unit, "Unit edge lengths");
  g->add_option("--out", gen.out, "Output path ('-' = stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (s->parsed()) return RunSolve(solve);
    if (o->parsed()) return RunOracle(oracle_graph, oracle_demands);
    if (g->parsed()) return RunGenerate(gen);
  } catch (const gpflow::InfeasibleInput& e) {
    std::cerr << "infeasible input: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
