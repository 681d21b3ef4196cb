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

// Exact oracles for small instances and seeded instance generators.

#ifndef GPFLOW_ORACLE_H_
#define GPFLOW_ORACLE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gpflow/graph.h"
#include "gpflow/vector_ops.h"

namespace gpflow {

// ------------------------------------------------------- min-cost flow

inline constexpr int kMcfVertexBudget = 500;

struct McfResult {
  double cost = 0.0;
  Vec flow;       // signed, relative to edge orientation
  Vec potential;  // 1-Lipschitz, tight on every edge carrying flow
};

// Successive shortest paths with Dijkstra on reduced costs. Exact up to
// floating-point rounding for nonnegative lengths. The returned potential
// satisfies potential . b = cost.
McfResult ExactMcf(const LengthGraph& g, std::span<const double> b);

// ------------------------------------------------------ linear programs

// min c.x subject to A x = b, x >= 0, A dense row-major.
struct LinearProgram {
  int rows = 0;
  int cols = 0;
  Vec a;
  Vec b;
  Vec c;
};

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  double objective = 0.0;
  Vec x;
};

// Two-phase dense tableau simplex with Bland's rule.
LpResult SolveLp(const LinearProgram& lp);

// min ||x||_1 subject to A x = b for a dense row-major A.
LpResult MinL1NormLp(int rows, int cols, std::span<const double> a,
                     std::span<const double> b);

// Min-cost flow as an LP over split edge variables; cross-check only.
double MinCostFlowLp(const LengthGraph& g, std::span<const double> b);

// ------------------------------------------------------ transportation

inline constexpr int kEmdPointBudget = 512;

// Exact l1 earth mover's distance of signed masses b at points (row vectors
// of equal dimension). Coincident points are merged first.
double EmdL1(const std::vector<Vec>& points, std::span<const double> b);
// The same value computed by ExactMcf on the complete graph of the merged
// support with l1 edge lengths.
double EmdL1ViaMcf(const std::vector<Vec>& points, std::span<const double> b);

// Transportation between supplies and demands of equal total with a dense
// cost matrix (supplies.size() x demands.size(), row-major).
double Transportation(std::span<const double> supplies,
                      std::span<const double> demands,
                      std::span<const double> costs);

// ------------------------------------------------------------ generators

enum class InstanceKind { kRandomGeometric, kGrid, kStar, kPath, kDipole };

struct InstanceParams {
  InstanceKind kind = InstanceKind::kRandomGeometric;
  int n = 50;                 // vertices (grid: side length)
  double radius_scale = 0.9;  // RGG radius = scale * sqrt(ln n / n)
  bool unit_lengths = false;  // grid/star/path: unit or uniform [0.5, 1.5]
};

struct GeneratedInstance {
  LengthGraph graph;
  Vec demands;
  std::vector<Vec> coordinates;  // RGG/dipole only
};

InstanceKind ParseInstanceKind(const std::string& name);
std::string InstanceKindName(InstanceKind kind);

// Deterministic per seed. Demands are standard normals minus their mean,
// rounded to multiples of 2^-20, with vertex 0 absorbing the residue so the
// total is exactly zero. Dipole places -1 and +1 on two distinct vertices.
GeneratedInstance GenerateInstance(const InstanceParams& params,
                                   std::uint64_t seed);

}  // namespace gpflow

#endif  // GPFLOW_ORACLE_H_
