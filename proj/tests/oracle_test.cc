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

#include "gpflow/oracle.h"

#include <cmath>
#include <random>

#include "gpflow/errors.h"
#include "gtest/gtest.h"

namespace gpflow {
namespace {

void ExpectOptimalityCertificate(const LengthGraph& g, std::span<const double> b,
                                 const McfResult& r) {
  EXPECT_LE(LinfNorm(Subtract(Divergence(g, r.flow), b)),
            1e-9 * std::max(1.0, L1Norm(b)));
  EXPECT_LE(LipschitzConstant(g, r.potential), 1.0 + 1e-9);
  EXPECT_NEAR(Dot(r.potential, b), r.cost, 1e-9 * std::max(1.0, r.cost));
  for (int e = 0; e < g.num_edges(); ++e) {
    if (std::abs(r.flow[e]) <= 1e-12) continue;
    // Flow moves along e from low to high potential at unit rate.
    const double diff = r.potential[g.edge(e).head] - r.potential[g.edge(e).tail];
    const double dir = r.flow[e] > 0 ? 1.0 : -1.0;
    EXPECT_NEAR(dir * diff, g.edge(e).length, 1e-9) << "edge " << e;
  }
}

TEST(ExactMcfTest, SingleEdge) {
  const LengthGraph g(2, {{0, 1, 2.5}});
  const McfResult r = ExactMcf(g, Vec{-1, 1});
  EXPECT_DOUBLE_EQ(r.cost, 2.5);
  EXPECT_DOUBLE_EQ(r.flow[0], 1.0);
  ExpectOptimalityCertificate(g, Vec{-1, 1}, r);
}

TEST(ExactMcfTest, TriangleTakesTwoShortEdges) {
  // Lengths (0,1)=1, (1,2)=1, (0,2)=3; dipole across the long pair.
  const LengthGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 3.0}});
  const Vec b{-1, 0, 1};
  const McfResult r = ExactMcf(g, b);
  EXPECT_DOUBLE_EQ(r.cost, 2.0);
  EXPECT_EQ(r.flow[2], 0.0);
  ExpectOptimalityCertificate(g, b, r);
}

TEST(ExactMcfTest, AgreesWithLinearProgram) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    InstanceParams params;
    params.n = 4 + static_cast<int>(seed % 17);
    const GeneratedInstance inst = GenerateInstance(params, 100 + seed);
    const McfResult r = ExactMcf(inst.graph, inst.demands);
    const double lp = MinCostFlowLp(inst.graph, inst.demands);
    EXPECT_NEAR(r.cost, lp, 1e-7 * std::max(1.0, lp)) << "seed " << seed;
    ExpectOptimalityCertificate(inst.graph, inst.demands, r);
  }
}

TEST(ExactMcfTest, ScalingLengthsScalesCost) {
  const GeneratedInstance inst = GenerateInstance({}, 4);
  const double base = ExactMcf(inst.graph, inst.demands).cost;
  for (double lambda : {1.0, 2.0, 3.5}) {
    std::vector<Edge> edges = inst.graph.edges();
    for (Edge& e : edges) e.length *= lambda;
    const LengthGraph scaled(inst.graph.num_vertices(), edges);
    EXPECT_NEAR(ExactMcf(scaled, inst.demands).cost, lambda * base,
                1e-9 * lambda * base);
  }
}

TEST(ExactMcfTest, RefusesAboveBudget) {
  InstanceParams params;
  params.kind = InstanceKind::kPath;
  params.n = kMcfVertexBudget + 1;
  const GeneratedInstance inst = GenerateInstance(params, 1);
  EXPECT_THROW(ExactMcf(inst.graph, inst.demands), OracleBudgetExceeded);
}

TEST(SolveLpTest, SmallPrograms) {
  // min x + 2y s.t. x + y = 1, x, y >= 0 -> 1 at x = 1.
  LinearProgram lp{1, 2, {1, 1}, {1}, {1, 2}};
  LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpResult::Status::kOptimal);
  EXPECT_DOUBLE_EQ(r.objective, 1.0);
  EXPECT_DOUBLE_EQ(r.x[0], 1.0);
  // x + y = -1 has no nonnegative solution.
  lp.b = {-1};
  EXPECT_EQ(SolveLp(lp).status, LpResult::Status::kInfeasible);
  // min -x s.t. x - y = 0 is unbounded.
  LinearProgram unb{1, 2, {1, -1}, {0}, {-1, 0}};
  EXPECT_EQ(SolveLp(unb).status, LpResult::Status::kUnbounded);
}

TEST(MinL1NormLpTest, Examples) {
  // [1 1 2] x = 2: the long column gives norm 1.
  const LpResult r = MinL1NormLp(1, 3, Vec{1, 1, 2}, Vec{2});
  ASSERT_EQ(r.status, LpResult::Status::kOptimal);
  EXPECT_DOUBLE_EQ(r.objective, 1.0);
  EXPECT_DOUBLE_EQ(r.x[2], 1.0);
  const LpResult id = MinL1NormLp(2, 2, Vec{1, 0, 0, 1}, Vec{-3, 2});
  EXPECT_DOUBLE_EQ(id.objective, 5.0);
}

TEST(TransportationTest, SmallInstance) {
  // Two supplies, two demands; crossing is cheaper than going straight.
  const double cost = Transportation(Vec{1, 2}, Vec{2, 1}, Vec{4, 1, 1, 3});
  // Optimal: s0 -> d1 (1 unit, cost 1), s1 -> d0 (2 units, cost 2).
  EXPECT_DOUBLE_EQ(cost, 3.0);
}

TEST(EmdL1Test, Examples) {
  const std::vector<Vec> dipole = {{0.0, 0.0}, {0.5, 1.0}};
  EXPECT_DOUBLE_EQ(EmdL1(dipole, Vec{1, -1}), 1.5);
  const std::vector<Vec> square = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  EXPECT_DOUBLE_EQ(EmdL1(square, Vec{1, -1, 0, 0}), 1.0);
  // Coincident points merge.
  const std::vector<Vec> same = {{0.25}, {0.25}, {1.0}};
  EXPECT_DOUBLE_EQ(EmdL1(same, Vec{1, -1, 0}), 0.0);
  EXPECT_DOUBLE_EQ(EmdL1(same, Vec{1, 1, -2}), 1.5);
}

TEST(EmdL1Test, BothPathsAgreeAndSymmetric) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 10, k = 1 + trial % 3;
    std::vector<Vec> pts(n, Vec(k));
    for (Vec& p : pts) {
      for (double& x : p) x = u(rng);
    }
    Vec b(n);
    for (double& x : b) x = normal(rng);
    b[0] -= Sum(b);
    const double a = EmdL1(pts, b);
    EXPECT_NEAR(a, EmdL1ViaMcf(pts, b), 1e-9 * std::max(1.0, a));
    EXPECT_NEAR(a, EmdL1(pts, Scaled(b, -1.0)), 1e-9 * std::max(1.0, a));
    std::vector<Vec> stretched = pts;
    for (Vec& p : stretched) {
      for (double& x : p) x *= 2.0;
    }
    EXPECT_NEAR(EmdL1(stretched, b), 2.0 * a, 1e-9 * std::max(1.0, a));
  }
}

TEST(EmdL1Test, SeparatedBoundedSandwich) {
  // Corners of {0,1}^k are 1-separated with l1 diameter k.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 4;
    std::vector<Vec> pts;
    for (int mask = 0; mask < (1 << k); ++mask) {
      Vec p(k);
      for (int i = 0; i < k; ++i) p[i] = (mask >> i) & 1;
      pts.push_back(p);
    }
    Vec b(pts.size());
    for (double& x : b) x = normal(rng);
    b[0] -= Sum(b);
    const double emd = EmdL1(pts, b);
    EXPECT_GE(emd, 0.5 * L1Norm(b) - 1e-9);
    EXPECT_LE(emd, 0.5 * k * L1Norm(b) + 1e-9);
  }
}

TEST(EmdL1Test, RefusesAboveBudget) {
  std::vector<Vec> pts(kEmdPointBudget + 2);
  Vec b(pts.size(), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] = {static_cast<double>(i)};
    b[i] = i % 2 == 0 ? 1.0 : -1.0;
  }
  EXPECT_THROW(EmdL1(pts, b), OracleBudgetExceeded);
}

TEST(GenerateInstanceTest, Kinds) {
  InstanceParams dipole;
  dipole.kind = InstanceKind::kDipole;
  dipole.n = 20;
  const GeneratedInstance d = GenerateInstance(dipole, 3);
  int nonzero = 0;
  double sum = 0.0;
  for (double x : d.demands) {
    if (x != 0.0) {
      ++nonzero;
      EXPECT_EQ(std::abs(x), 1.0);
    }
    sum += x;
  }
  EXPECT_EQ(nonzero, 2);
  EXPECT_EQ(sum, 0.0);

  InstanceParams grid;
  grid.kind = InstanceKind::kGrid;
  grid.n = 4;
  const GeneratedInstance g = GenerateInstance(grid, 1);
  EXPECT_EQ(g.graph.num_vertices(), 16);
  EXPECT_EQ(g.graph.num_edges(), 24);

  InstanceParams rgg;
  rgg.n = 100;
  const GeneratedInstance r = GenerateInstance(rgg, 7);
  EXPECT_EQ(r.graph.num_vertices(), 100);
  double total = 0.0;
  for (double x : r.demands) {
    EXPECT_EQ(std::ldexp(x, 20), std::round(std::ldexp(x, 20)));
    total += x;
  }
  EXPECT_EQ(total, 0.0);
  EXPECT_EQ(r.coordinates.size(), 100u);
}

TEST(GenerateInstanceTest, DeterministicPerSeed) {
  for (InstanceKind kind :
       {InstanceKind::kRandomGeometric, InstanceKind::kGrid,
        InstanceKind::kStar, InstanceKind::kPath, InstanceKind::kDipole}) {
    InstanceParams p;
    p.kind = kind;
    p.n = 9;
    const GeneratedInstance a = GenerateInstance(p, 11);
    const GeneratedInstance b = GenerateInstance(p, 11);
    EXPECT_EQ(a.demands, b.demands);
    ASSERT_EQ(a.graph.num_edges(), b.graph.num_edges());
    for (int e = 0; e < a.graph.num_edges(); ++e) {
      EXPECT_EQ(a.graph.edge(e).length, b.graph.edge(e).length);
    }
    EXPECT_EQ(ParseInstanceKind(InstanceKindName(kind)), kind);
  }
  EXPECT_THROW(ParseInstanceKind("hypercube"), ContractViolation);
}

}  // namespace
}  // namespace gpflow
