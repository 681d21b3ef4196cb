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

// End-to-end approximate undirected min-cost flow:
//
//   embed -> snap -> preconditioner P -> min ||x||_1 s.t. P D L^-1 x = P b
//         -> j = L^-1 x -> route the residual on the MST -> primal j
//
// plus a 1-Lipschitz potential extracted from the l1 solver's dual.

#ifndef GPFLOW_DRIVER_H_
#define GPFLOW_DRIVER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpflow/embed.h"
#include "gpflow/graph.h"
#include "gpflow/latprecond.h"
#include "gpflow/minnorm.h"
#include "gpflow/vector_ops.h"

namespace gpflow {

enum class Schedule { kMeasured, kTheoretical };

inline constexpr std::int64_t kMeasuredProbeCap = 200000;

struct PipelineConfig {
  double epsilon = 0.1;
  std::uint64_t seed = 1;
  std::optional<int> levels;          // T override
  std::optional<int> dim;             // k override
  std::optional<double> kappa_assumed;
  bool skip_jl = false;
  // Use `coordinates` as an l1 embedding instead of Bourgain + JL.
  bool identity_embedding = false;
  std::vector<Vec> coordinates;
  double bourgain_constant = 4.0;
  // kMeasured runs one l1 stage with bracket 1 + eps / 10 and residual
  // target delta * ||P b||_1, seeded with the spanning-tree routing, and
  // optimistic MW dynamics. kTheoretical runs SolveL1 with kappa_assumed.
  Schedule schedule = Schedule::kMeasured;
  // Residual fraction; 0 means eps / 100 (measured) or 1 / (4n).
  double delta = 0.0;
  // Per-probe MW iteration cap; 0 means the a-priori bound (theoretical)
  // or kMeasuredProbeCap (measured).
  std::int64_t probe_iteration_cap = 0;
  // Skip the all-pairs distortion measurement (needs kappa_assumed).
  bool measure_distortion = true;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct SolveReport {
  Vec flow;
  double cost = 0.0;
  DualPotential dual;
  double dual_value = 0.0;
  double gap_ratio = 0.0;  // cost / dual_value
  double conservation_residual = 0.0;  // max_v |(D j - b)(v)|

  // Embedding.
  int bourgain_dim = 0;
  int dim = 0;
  int levels = 0;
  double bourgain_distortion = 0.0;
  double total_distortion = 0.0;
  double snap_cost_bound = 0.0;
  int distinct_lattice_points = 0;
  // Preconditioner and solver.
  int p_rows = 0;
  int p_max_column_nonzeros = 0;
  double operator_norm = 0.0;
  double kappa_assumed = 0.0;
  std::string schedule;
  double delta = 0.0;
  double l1_cost = 0.0;        // cost of L^-1 x before the terminal stage
  double terminal_cost = 0.0;  // cost added by the MST routing
  double solver_lower = 0.0;   // certified lower bound from the l1 solver
  std::int64_t iterations = 0;
  int solver_stages = 0;
  bool capped = false;
  std::vector<StageTiming> timings;
  ReductionChain chain;  // chain of the snapped input demands
};

// A' = P D L^-1 with l1 norms on both sides, acting on x = L j. The graph
// must outlive the operator. Its norm is computed from the m columns.
NormedOperator PreconditionedFlowOperator(
    const LengthGraph& g, std::shared_ptr<const PreconditionerP> p);

// Throws InfeasibleInput for invalid demands, ConfigurationError for an
// invalid configuration and StageError (tagged with the stage) otherwise.
SolveReport SolveMinCost(const LengthGraph& g, std::span<const double> b,
                         const PipelineConfig& config);

// phi = P* y, divided by its Lipschitz constant so that it is exactly
// 1-Lipschitz. y = 0 yields the zero potential.
DualPotential ExtractDual(const PreconditionerP& p, std::span<const double> y,
                          const LengthGraph& g);

struct GapReport {
  double cost = 0.0;
  double dual_value = 0.0;
  double ratio = 0.0;  // cost / dual_value, infinite when dual_value <= 0
  double conservation_residual = 0.0;
  double lipschitz = 0.0;
};

// Throws ContractViolation if j does not route b, phi is not 1-Lipschitz
// (both within 1e-9) or weak duality phi . b <= cost (1 + 1e-9) fails.
GapReport Certify(const LengthGraph& g, std::span<const double> b,
                  std::span<const double> j, std::span<const double> phi);

// Deterministic JSON: {cost, dual_value, gap_ratio, flow, potential, stages}.
// Timings are included only when requested.
std::string ReportJson(const SolveReport& report, bool include_timings = false);

}  // namespace gpflow

#endif  // GPFLOW_DRIVER_H_
