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

#include "gpflow/latprecond.h"

#include <cmath>
#include <cstdint>
#include <random>

#include "boost/rational.hpp"
#include "gpflow/oracle.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace gpflow {
namespace {

using Rational = boost::rational<std::int64_t>;

LatticeDemands Demands(int level, int dim,
                       std::map<LatticePoint, double> entries) {
  LatticeDemands b;
  b.level = level;
  b.dim = dim;
  b.entries = std::move(entries);
  return b;
}

// Random zero-sum demands on `count` distinct level-T points; integer masses.
LatticeDemands RandomDemands(std::mt19937_64& rng, int k, int levels,
                             int count) {
  std::uniform_int_distribution<std::int64_t> coord(0, std::int64_t{1}
                                                            << levels);
  std::uniform_int_distribution<int> mass(-4, 4);
  LatticeDemands b;
  b.level = levels;
  b.dim = k;
  while (static_cast<int>(b.entries.size()) < count) {
    LatticePoint x(k);
    for (auto& c : x) c = coord(rng);
    b.entries[x] = mass(rng);
  }
  double total = 0.0;
  for (const auto& [x, v] : b.entries) total += v;
  b.entries.begin()->second -= total;
  return b;
}

TEST(ParentCornersTest, Examples) {
  EXPECT_EQ(ParentCorners({2, 4}), (std::vector<LatticePoint>{{1, 2}}));
  EXPECT_EQ(ParentCorners({1, 2}),
            (std::vector<LatticePoint>{{0, 1}, {1, 1}}));
  EXPECT_EQ(ParentCorners({1, 3}),
            (std::vector<LatticePoint>{{0, 1}, {0, 2}, {1, 1}, {1, 2}}));
}

TEST(ReduceLevelTest, Examples) {
  const LatticeDemands b = Demands(2, 1, {{{1}, 1.0}, {{2}, -1.0}});
  const LatticeDemands r = ReduceLevel(b);
  EXPECT_EQ(r.level, 1);
  // 1 -> half to 0 and 1; 2 -> 1. Net: 0.5 at 0, -0.5 at 1.
  EXPECT_EQ(r.entries, (std::map<LatticePoint, double>{{{0}, 0.5},
                                                       {{1}, -0.5}}));
  const LatticeDemands c = Demands(1, 2, {{{1, 1}, 4.0}, {{0, 0}, -4.0}});
  const LatticeDemands rc = ReduceLevel(c);
  EXPECT_EQ(rc.entries, (std::map<LatticePoint, double>{{{0, 1}, 1.0},
                                                        {{1, 0}, 1.0},
                                                        {{1, 1}, 1.0},
                                                        {{0, 0}, -3.0}}));
  EXPECT_THROW(ReduceLevel(Demands(0, 1, {})), ConfigurationError);
  // Cancelling entries are dropped.
  EXPECT_EQ(ReduceLevel(Demands(1, 1, {{{1}, 2.0}, {{0}, -1.0}})).entries,
            (std::map<LatticePoint, double>{{{1}, 1.0}}));
}

TEST(ReduceLevelTest, LinearAndMassConserving) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + trial % 3;
    const LatticeDemands a = RandomDemands(rng, k, 5, 6);
    const LatticeDemands b = RandomDemands(rng, k, 5, 6);
    LatticeDemands sum = a;
    for (const auto& [x, v] : b.entries) sum.entries[x] += v;
    const LatticeDemands ra = ReduceLevel(a), rb = ReduceLevel(b);
    LatticeDemands rs = ReduceLevel(sum);
    LatticeDemands expect = ra;
    for (const auto& [x, v] : rb.entries) expect.entries[x] += v;
    for (const auto& [x, v] : expect.entries) {
      const auto it = rs.entries.find(x);
      const double got = it == rs.entries.end() ? 0.0 : it->second;
      EXPECT_NEAR(got, v, 1e-12);
    }
    EXPECT_NEAR(ra.Total(), a.Total(), 1e-12);
  }
}

TEST(ReduceLevelTest, ExactRationalChain) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + trial % 3;
    const LatticeDemands d = RandomDemands(rng, k, 6, 8);
    BasicLatticeDemands<Rational> b;
    b.level = d.level;
    b.dim = k;
    for (const auto& [x, v] : d.entries) {
      b.entries[x] = Rational(static_cast<std::int64_t>(v));
    }
    for (int t = b.level; t > 0; --t) {
      b = ReduceLevel(b);
      EXPECT_EQ(b.Total(), Rational(0));
      // Every point is a lattice point of the current level.
      for (const auto& [x, v] : b.entries) {
        for (auto c : x) {
          EXPECT_GE(c, 0);
          EXPECT_LE(c, std::int64_t{1} << b.level);
        }
      }
    }
  }
}

// Randomized reduction: all demand at x moves to one uniformly chosen
// parent corner. Its exact expectation is ReduceLevel, and each unit moves at
// most k 2^-t, so a sample's EMD exceeds EMD(b_t) by at most ||b_t|| k 2^-t.
TEST(RandomizedReductionTest, ExpectationAndDisplacement) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + trial % 3, levels = 3;
    const LatticeDemands b = RandomDemands(rng, k, levels, 6);
    const double unit = std::ldexp(1.0, -levels);
    LatticeDemands mean, sample;
    mean.level = sample.level = levels - 1;
    mean.dim = sample.dim = k;
    double mass = 0.0;
    for (const auto& [x, v] : b.entries) {
      const std::vector<LatticePoint> corners = ParentCorners(x);
      for (const LatticePoint& q : corners) {
        mean.entries[q] += v / static_cast<double>(corners.size());
        double d = 0.0;
        for (int c = 0; c < k; ++c) {
          d += std::abs(static_cast<double>(x[c]) - 2.0 * q[c]) * unit;
        }
        EXPECT_LE(d, k * unit);
      }
      std::uniform_int_distribution<std::size_t> pick(0, corners.size() - 1);
      sample.entries[corners[pick(rng)]] += v;
      mass += std::abs(v);
    }
    const LatticeDemands exact = ReduceLevel(b);
    for (const auto& [q, v] : mean.entries) {
      const auto it = exact.entries.find(q);
      EXPECT_NEAR(it == exact.entries.end() ? 0.0 : it->second, v, 1e-12);
    }
    std::erase_if(sample.entries, [](const auto& kv) { return kv.second == 0.0; });
    EXPECT_LE(LatticeEmdL1(sample), LatticeEmdL1(b) + mass * k * unit + 1e-9);
  }
}

TEST(ChainTest, DipoleRatio) {
  for (int levels = 1; levels <= 8; ++levels) {
    const LatticeDemands b = Demands(levels, 1, {{{0}, 1.0}, {{1}, -1.0}});
    const ReductionChain chain = BuildChain(b);
    ASSERT_EQ(chain.levels.size(), static_cast<std::size_t>(levels + 1));
    const double expected = (levels + 1) * std::ldexp(1.0, 1 - levels);
    EXPECT_DOUBLE_EQ(chain.WeightedNorm(), expected);
    const double emd = LatticeEmdL1(b);
    EXPECT_DOUBLE_EQ(emd, std::ldexp(1.0, -levels));
    EXPECT_DOUBLE_EQ(chain.WeightedNorm() / emd, 2.0 * (levels + 1));
  }
}

TEST(ChainTest, CornerSupportedDemandsAreFixed) {
  // Demands on the corners of [0,1]^k never move.
  const int levels = 4;
  const std::int64_t top = std::int64_t{1} << levels;
  const LatticeDemands b =
      Demands(levels, 2, {{{0, 0}, 1.0}, {{top, top}, -1.0}});
  const ReductionChain chain = BuildChain(b);
  for (int t = 0; t <= levels; ++t) {
    EXPECT_DOUBLE_EQ(chain.masses[t], 2.0);
    EXPECT_DOUBLE_EQ(chain.weights[t], 2.0 * std::ldexp(1.0, -t));
  }
  EXPECT_DOUBLE_EQ(CornerRouteBound(chain.levels[0]), 2.0);
  EXPECT_DOUBLE_EQ(LatticeEmdL1(chain.levels[0]), 2.0);
}

TEST(CornerRouteBoundTest, Contract) {
  EXPECT_DOUBLE_EQ(
      CornerRouteBound(Demands(0, 3, {{{0, 1, 0}, 2.0}, {{1, 1, 1}, -2.0}})),
      6.0);
  EXPECT_THROW(CornerRouteBound(Demands(1, 1, {{{1}, 1.0}})),
               ContractViolation);
}

PreconditionerP RandomP(std::mt19937_64& rng, int k, int levels, int n) {
  std::uniform_int_distribution<std::int64_t> coord(0, std::int64_t{1}
                                                            << levels);
  std::vector<LatticePoint> support(n, LatticePoint(k));
  for (auto& x : support) {
    for (auto& c : x) c = coord(rng);
  }
  support.push_back(support.front());  // a duplicate column
  return PreconditionerP(std::move(support), k, levels);
}

TEST(PreconditionerTest, NormMatchesChain) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + trial % 3, levels = 2 + trial % 5;
    const PreconditionerP p = RandomP(rng, k, levels, 15);
    Vec b(p.cols());
    for (double& x : b) x = normal(rng);
    LatticeDemands top;
    top.level = levels;
    top.dim = k;
    for (int c = 0; c < p.cols(); ++c) top.entries[p.support()[c]] += b[c];
    const double direct = L1Norm(p.Apply(b));
    EXPECT_NEAR(direct, BuildChain(top).WeightedNorm(), 1e-10 * direct);
    // ColumnDemands puts the mass of duplicates on one column.
    const Vec coef = p.ColumnDemands(top);
    EXPECT_NEAR(L1Norm(p.Apply(coef)), direct, 1e-10 * direct);
  }
}

TEST(PreconditionerTest, AdjointAndScale) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 3, levels = 1 + trial % 6;
    const PreconditionerP p = RandomP(rng, k, levels, 10);
    Vec b(p.cols()), y(p.rows());
    for (double& x : b) x = normal(rng);
    for (double& x : y) x = normal(rng);
    const double lhs = Dot(p.Apply(b), y);
    const double rhs = Dot(b, p.ApplyAdjoint(y));
    EXPECT_NEAR(lhs, rhs, 1e-12 * (std::abs(lhs) + 1.0));
  }
  const PreconditionerP p1({{0, 1}, {3, 2}}, 2, 2);
  const PreconditionerP p3({{0, 1}, {3, 2}}, 2, 2, 3.0);
  const Vec b = {1.0, -1.0};
  const Vec a1 = p1.Apply(b), a3 = p3.Apply(b);
  ASSERT_EQ(a1.size(), a3.size());
  for (std::size_t i = 0; i < a1.size(); ++i) {
    EXPECT_DOUBLE_EQ(a3[i], 3.0 * a1[i]);
  }
}

TEST(PreconditionerTest, ColumnSparsity) {
  std::mt19937_64 rng(7);
  for (int k = 1; k <= 3; ++k) {
    for (int levels : {2, 4, 6}) {
      const PreconditionerP p = RandomP(rng, k, levels, 20);
      EXPECT_LE(p.MaxColumnNonzeros(), (levels + 1) << k);
      for (int c = 0; c < p.cols(); ++c) {
        EXPECT_GE(p.ColumnNonzeros(c), levels + 1);
      }
    }
  }
}

TEST(PreconditionerTest, Contracts) {
  const PreconditionerP p({{0, 1}, {3, 2}}, 2, 2);
  EXPECT_THROW(p.ColumnDemands(Demands(2, 2, {{{1, 1}, 1.0}})),
               ContractViolation);
  EXPECT_THROW(p.ColumnDemands(Demands(1, 2, {{{0, 1}, 1.0}})),
               ContractViolation);
  EXPECT_THROW(p.Apply(Vec{1.0}), ContractViolation);
  EXPECT_THROW(PreconditionerP({{5, 0}}, 2, 2), ContractViolation);
  EXPECT_THROW(PreconditionerP({{0, 0}}, 2, 2, 0.0), ConfigurationError);
}

TEST(ChainBoundsTest, RandomSupports) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const ReductionChain chain = BuildChain(RandomDemands(rng, 2, 4, 10));
    const ChainBoundsReport r = ChainBoundsCheck(chain);
    EXPECT_FALSE(r.skipped);
    EXPECT_TRUE(r.ok()) << "trial " << trial;
    EXPECT_LE(r.upper_ratio, 2.0 * 2 * 5 + 1e-9);
    EXPECT_GE(r.upper_ratio, 1.0 - 1e-9);
  }
  const ReductionChain big = BuildChain(RandomDemands(rng, 4, 2, 5));
  EXPECT_TRUE(ChainBoundsCheck(big).skipped);
}

TEST(ChainDumpTest, LevelsFromTop) {
  const ReductionChain chain =
      BuildChain(Demands(2, 1, {{{0}, 1.0}, {{1}, -1.0}}));
  const auto doc = nlohmann::json::parse(ChainDumpJson(chain));
  ASSERT_EQ(doc.size(), 3u);
  EXPECT_EQ(doc[0]["t"], 2);
  EXPECT_EQ(doc[2]["t"], 0);
}

}  // namespace
}  // namespace gpflow
