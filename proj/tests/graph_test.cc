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

#include "gpflow/graph.h"

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>

#include "boost/rational.hpp"
#include "gpflow/errors.h"
#include "gpflow/graph_io.h"
#include "gpflow/oracle.h"
#include "gtest/gtest.h"

namespace gpflow {
namespace {

using Rational = boost::rational<std::int64_t>;

LengthGraph Triangle(double a = 1.0, double b = 1.0, double c = 1.0) {
  // Edges (0,1), (1,2), (0,2).
  return LengthGraph(3, {{0, 1, a}, {1, 2, b}, {0, 2, c}});
}

Vec RandomVec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Vec v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

// Exact value of a double whose binary exponent fits the denominator.
Rational ToRational(double x) {
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  const auto num = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(num);
  if (exp >= 0) return r * Rational(std::int64_t{1} << exp);
  // Strip trailing zero bits before dividing to stay in range.
  std::int64_t n = num;
  while (exp < 0 && n % 2 == 0 && n != 0) {
    n /= 2;
    ++exp;
  }
  if (n == 0) return Rational(0);
  return Rational(n, std::int64_t{1} << (-exp));
}

TEST(LengthGraphTest, RejectsBadInput) {
  EXPECT_THROW(LengthGraph(2, {{0, 0, 1.0}}), InfeasibleInput);
  EXPECT_THROW(LengthGraph(2, {{0, 1, 0.0}}), InfeasibleInput);
  EXPECT_THROW(LengthGraph(2, {{0, 1, -1.0}}), InfeasibleInput);
  EXPECT_THROW(LengthGraph(3, {{0, 1, 1.0}}), InfeasibleInput);
  EXPECT_THROW(LengthGraph(2, {{0, 2, 1.0}}), InfeasibleInput);
  EXPECT_NO_THROW(LengthGraph(2, {{0, 1, 1.0}, {1, 0, 2.0}}));
}

TEST(DerivativeTest, Examples) {
  const LengthGraph g = Triangle();
  EXPECT_EQ(Derivative(g, Vec{4, 4, 4}), (Vec{0, 0, 0}));
  EXPECT_EQ(Derivative(g, Vec{0, 1, 2}), (Vec{1, 1, 2}));
  const LengthGraph e(2, {{0, 1, 1.0}});
  EXPECT_EQ(Derivative(e, Vec{0, 3}), (Vec{3}));
}

TEST(DivergenceTest, Examples) {
  const LengthGraph e(2, {{0, 1, 1.0}});
  EXPECT_EQ(Divergence(e, Vec{1}), (Vec{-1, 1}));
  const LengthGraph g = Triangle();
  EXPECT_EQ(Divergence(g, Vec{0, 0, 0}), (Vec{0, 0, 0}));
  // 0 -> 1 -> 2 -> 0: edge (0,2) carries -1.
  EXPECT_EQ(Divergence(g, Vec{1, 1, -1}), (Vec{0, 0, 0}));
}

TEST(DivergenceTest, AdjointOfDerivative) {
  std::mt19937_64 rng(1);
  const GeneratedInstance inst = GenerateInstance({}, 4);
  const LengthGraph& g = inst.graph;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec j = RandomVec(rng, g.num_edges());
    const Vec phi = RandomVec(rng, g.num_vertices());
    const double lhs = Dot(Divergence(g, j), phi);
    const double rhs = Dot(j, Derivative(g, phi));
    EXPECT_NEAR(lhs, rhs, 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
  }
}

TEST(CostTest, ExamplesAndHolder) {
  const LengthGraph e(2, {{0, 1, 2.5}});
  EXPECT_EQ(Cost(e, Vec{0}), 0.0);
  EXPECT_DOUBLE_EQ(Cost(e, Vec{1}), 2.5);
  EXPECT_DOUBLE_EQ(Stretch(e, Vec{5}), 2.0);
  std::mt19937_64 rng(2);
  const GeneratedInstance inst = GenerateInstance({}, 9);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec j = RandomVec(rng, inst.graph.num_edges());
    const Vec f = RandomVec(rng, inst.graph.num_edges());
    EXPECT_LE(std::abs(Dot(j, f)),
              Cost(inst.graph, j) * Stretch(inst.graph, f) * (1 + 1e-12));
  }
}

TEST(ShortestPathsTest, Examples) {
  const LengthGraph path(3, {{0, 1, 1.0}, {1, 2, 2.0}});
  const int s0[] = {0};
  const Vec d = ShortestPaths(path, s0);
  EXPECT_EQ(d[0], 0.0);
  EXPECT_EQ(d[2], 3.0);
  const GeneratedInstance inst = GenerateInstance({}, 5);
  const int a[] = {3}, b[] = {17}, ab[] = {3, 17};
  const Vec da = ShortestPaths(inst.graph, a);
  const Vec db = ShortestPaths(inst.graph, b);
  const Vec dab = ShortestPaths(inst.graph, ab);
  for (int v = 0; v < inst.graph.num_vertices(); ++v) {
    EXPECT_EQ(dab[v], std::min(da[v], db[v]));
  }
}

TEST(ShortestPathsTest, TriangleInequality) {
  const GeneratedInstance inst = GenerateInstance({}, 6);
  const std::vector<Vec> d = AllPairsDistances(inst.graph);
  const int n = inst.graph.num_vertices();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const int x = rng() % n, y = rng() % n, z = rng() % n;
    EXPECT_LE(d[x][z], d[x][y] + d[y][z] + 1e-12);
  }
}

TEST(MstRouteTest, TreeRoutingIsOptimal) {
  InstanceParams params;
  params.kind = InstanceKind::kPath;
  params.n = 12;
  const GeneratedInstance inst = GenerateInstance(params, 2);
  const Vec j = MstRoute(inst.graph, inst.demands);
  EXPECT_NEAR(Cost(inst.graph, j), ExactMcf(inst.graph, inst.demands).cost,
              1e-9);
}

TEST(MstRouteTest, FourCycleWithHeavyEdge) {
  const LengthGraph g(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 10.0}});
  EXPECT_EQ(MinimumSpanningTree(g), (std::vector<int>{0, 1, 2}));
  const Vec b{-1, 0, 0, 1};
  const Vec j = MstRoute(g, b);
  EXPECT_EQ(j[3], 0.0);
  EXPECT_DOUBLE_EQ(Cost(g, j), 3.0);
  EXPECT_DOUBLE_EQ(ExactMcf(g, b).cost, 3.0);
}

TEST(MstRouteTest, ConservationAndSupport) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GeneratedInstance inst = GenerateInstance({}, seed);
    const Vec j = MstRoute(inst.graph, inst.demands);
    const Vec r = Subtract(Divergence(inst.graph, j), inst.demands);
    EXPECT_LE(LinfNorm(r), 1e-12 * L1Norm(inst.demands));
    std::vector<char> in_tree(inst.graph.num_edges(), 0);
    for (int e : MinimumSpanningTree(inst.graph)) in_tree[e] = 1;
    for (int e = 0; e < inst.graph.num_edges(); ++e) {
      if (!in_tree[e]) {
        EXPECT_EQ(j[e], 0.0);
      }
    }
  }
}

TEST(MstRouteTest, ExactRationalConservation) {
  // Generator demands are multiples of 2^-20, so every partial subtree sum
  // is exact in binary floating point; verify in rational arithmetic.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    InstanceParams params;
    params.n = 30;
    const GeneratedInstance inst = GenerateInstance(params, seed);
    const LengthGraph& g = inst.graph;
    const Vec j = MstRoute(g, inst.demands);
    std::vector<Rational> div(g.num_vertices(), Rational(0));
    for (int e = 0; e < g.num_edges(); ++e) {
      const Rational f = ToRational(j[e]);
      div[g.edge(e).head] += f;
      div[g.edge(e).tail] -= f;
    }
    Rational total(0);
    for (int v = 0; v < g.num_vertices(); ++v) {
      EXPECT_EQ(div[v], ToRational(inst.demands[v])) << "vertex " << v;
      total += ToRational(inst.demands[v]);
    }
    EXPECT_EQ(total, Rational(0));
  }
}

TEST(MstRouteTest, RejectsInfeasibleDemand) {
  const LengthGraph e(2, {{0, 1, 1.0}});
  EXPECT_THROW(MstRoute(e, Vec{1, 1}), InfeasibleInput);
  EXPECT_THROW(MstRoute(e, Vec{1, -1, 0}), InfeasibleInput);
}

TEST(WeakDualityTest, LipschitzPotentialBoundsCost) {
  std::mt19937_64 rng(8);
  const GeneratedInstance inst = GenerateInstance({}, 8);
  const LengthGraph& g = inst.graph;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec j = RandomVec(rng, g.num_edges());
    Vec phi = RandomVec(rng, g.num_vertices());
    const double lip = LipschitzConstant(g, phi);
    for (double& v : phi) v /= lip;
    EXPECT_LE(Dot(phi, Divergence(g, j)), Cost(g, j) + 1e-9);
  }
}

TEST(CutFamilyNormTest, Examples) {
  const LengthGraph g = Triangle();
  const Vec caps{1, 1, 1};
  EXPECT_EQ(CutFamilyNorm(g, caps, {{{0}}}, Vec{0, 0, 0}), 0.0);
  // Singleton {v}: |b(v)| / deg(v).
  EXPECT_DOUBLE_EQ(CutFamilyNorm(g, caps, {{{1}}}, Vec{-1, 3, -2}), 1.5);
  EXPECT_THROW(CutFamilyNorm(g, caps, {}, Vec{0, 0, 0}), ContractViolation);
}

TEST(CutFamilyNormTest, SubfamilyBelowPowerSet) {
  InstanceParams params;
  params.kind = InstanceKind::kGrid;
  params.n = 3;
  params.unit_lengths = true;
  const GeneratedInstance inst = GenerateInstance(params, 1);
  const LengthGraph& g = inst.graph;
  const int n = g.num_vertices();
  const Vec caps(g.num_edges(), 1.0);
  std::vector<CutSet> all;
  for (int mask = 1; mask + 1 < (1 << n); ++mask) {
    CutSet s;
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1) s.members.push_back(v);
    }
    all.push_back(std::move(s));
  }
  // Rows of the grid.
  std::vector<CutSet> rows = {{{0, 1, 2}}, {{3, 4, 5}}, {{6, 7, 8}}};
  EXPECT_LE(CutFamilyNorm(g, caps, rows, inst.demands),
            CutFamilyNorm(g, caps, all, inst.demands));
}

TEST(GraphIoTest, RoundTrip) {
  const GeneratedInstance inst = GenerateInstance({}, 3);
  std::stringstream ss;
  WriteDimacs(ss, inst.graph, inst.demands);
  const FlowInstance back = ParseDimacs(ss);
  ASSERT_EQ(back.graph.num_edges(), inst.graph.num_edges());
  EXPECT_EQ(back.demands, inst.demands);
  for (int e = 0; e < inst.graph.num_edges(); ++e) {
    EXPECT_EQ(back.graph.edge(e).length, inst.graph.edge(e).length);
  }
}

TEST(GraphIoTest, RejectsMalformedFiles) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return ParseDimacs(in);
  };
  EXPECT_NO_THROW(parse("c hi\np min 2 1\nn 1 -1\nn 2 1\na 1 2 1.5\n"));
  EXPECT_THROW(parse("p min 2 1\nn 1 1\na 1 2 1\n"), InfeasibleInput);
  EXPECT_THROW(parse("p min 2 1\na 1 2 0\n"), InfeasibleInput);
  EXPECT_THROW(parse("p min 2 1\na 1 1 1\n"), InfeasibleInput);
  EXPECT_THROW(parse("p min 2 2\na 1 2 1\n"), InfeasibleInput);
  EXPECT_THROW(parse("p min 3 1\na 1 2 1\n"), InfeasibleInput);
  EXPECT_THROW(parse("a 1 2 1\n"), InfeasibleInput);
  EXPECT_THROW(parse("p min 2 1\na 1 2 x\n"), InfeasibleInput);
  EXPECT_THROW(parse("p min 2 1\nq\n"), InfeasibleInput);
  try {
    parse("p min 2 1\na 1 3 1\n");
    FAIL();
  } catch (const InfeasibleInput& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(GraphIoTest, DemandJson) {
  std::istringstream in(R"({"1": -2.5, "3": 2.5})");
  EXPECT_EQ(ParseDemandsJson(in, 3), (Vec{-2.5, 0, 2.5}));
  std::istringstream bad(R"({"4": 1})");
  EXPECT_THROW(ParseDemandsJson(bad, 3), InfeasibleInput);
  std::istringstream junk("[1, 2]");
  EXPECT_THROW(ParseDemandsJson(junk, 3), InfeasibleInput);
}

}  // namespace
}  // namespace gpflow
