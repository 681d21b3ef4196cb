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

// Hierarchical demand reduction on the dyadic lattices V_t = (2^-t Z)^k and
// the preconditioner it induces.
//
// A point of V_t is stored as integer coordinates in units of 2^-t inside
// [0, 2^t]^k. One reduction step moves the demand at x to the 2^j nearest
// points of V_{t-1}, where j is the number of coordinates of x not on
// V_{t-1}, each receiving 2^-j of it. The preconditioner stacks the levels:
//   ||P b||_1 = sum_t k 2^-t ||b_t||_1,  t = T, ..., 0.

#ifndef GPFLOW_LATPRECOND_H_
#define GPFLOW_LATPRECOND_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gpflow/embed.h"
#include "gpflow/errors.h"
#include "gpflow/vector_ops.h"

namespace gpflow {

template <class V>
struct BasicLatticeDemands {
  int level = 0;
  int dim = 0;
  std::map<LatticePoint, V> entries;

  V Total() const {
    V s(0);
    for (const auto& [p, v] : entries) s += v;
    return s;
  }
};

using LatticeDemands = BasicLatticeDemands<double>;

// Points of V_{t-1} (in level t-1 units) nearest to x (level t units), in
// lexicographic order.
std::vector<LatticePoint> ParentCorners(const LatticePoint& x);

// b_t -> b_{t-1}. Exact for any value type closed under division by 2.
// Entries that cancel to exactly zero are dropped.
template <class V>
BasicLatticeDemands<V> ReduceLevel(const BasicLatticeDemands<V>& b) {
  if (b.level < 1) {
    throw ConfigurationError("ReduceLevel: level 0 has no coarser lattice");
  }
  BasicLatticeDemands<V> out;
  out.level = b.level - 1;
  out.dim = b.dim;
  for (const auto& [x, v] : b.entries) {
    const std::vector<LatticePoint> corners = ParentCorners(x);
    V share = v;
    for (std::size_t c = corners.size(); c > 1; c /= 2) share /= V(2);
    for (const LatticePoint& q : corners) out.entries[q] += share;
  }
  std::erase_if(out.entries, [](const auto& kv) { return kv.second == V(0); });
  return out;
}

struct ReductionChain {
  int dim = 0;
  int top_level = 0;
  std::vector<LatticeDemands> levels;  // levels[t] is b_t
  Vec weights;                         // k 2^-t
  Vec masses;                          // ||b_t||_1

  // sum_t weights[t] * masses[t].
  double WeightedNorm() const;
};

// Applies ReduceLevel T times starting from b_T (which must be at level T).
ReductionChain BuildChain(const LatticeDemands& b_top);

// Sparse matrix with one column per registered support point and one row
// per (level, lattice point) reached by that point's chain. Entry values are
// scale * k 2^-t * (chain of the unit demand at the point).
class PreconditionerP {
 public:
  // Duplicate support points give identical columns.
  PreconditionerP(std::vector<LatticePoint> support, int dim, int levels,
                  double scale = 1.0);

  int rows() const { return static_cast<int>(row_keys_.size()); }
  int cols() const { return static_cast<int>(support_.size()); }
  int dim() const { return dim_; }
  int levels() const { return levels_; }
  double scale() const { return scale_; }
  const std::vector<LatticePoint>& support() const { return support_; }
  // (level, point) of each row.
  const std::vector<std::pair<int, LatticePoint>>& row_keys() const {
    return row_keys_;
  }
  int ColumnNonzeros(int c) const { return col_ptr_[c + 1] - col_ptr_[c]; }
  int MaxColumnNonzeros() const;

  Vec Apply(std::span<const double> b) const;
  Vec ApplyAdjoint(std::span<const double> y) const;
  void ApplyInto(std::span<const double> b, std::span<double> out) const;
  void ApplyAdjointInto(std::span<const double> y, std::span<double> out) const;

  // Column coefficients for demands given at level-T lattice points. Throws
  // ContractViolation for a point that is not registered.
  Vec ColumnDemands(const LatticeDemands& b_top) const;

 private:
  std::vector<LatticePoint> support_;
  int dim_;
  int levels_;
  double scale_;
  std::vector<std::pair<int, LatticePoint>> row_keys_;
  std::vector<int> col_ptr_;
  std::vector<int> row_idx_;
  Vec values_;
  std::map<LatticePoint, int> first_column_;
};

// 1/2 k ||b_0||_1 for b_0 supported on the corners {0,1}^k.
double CornerRouteBound(const LatticeDemands& b0);

// Exact l1 earth mover's distance of lattice demands.
using LatticeEmd = std::function<double(const LatticeDemands&)>;

// EmdL1 from the oracle module applied to the lattice coordinates.
double LatticeEmdL1(const LatticeDemands& b);

struct ChainBoundsReport {
  bool skipped = false;
  std::string notice;
  Vec emd;  // emd[t] = EMD(b_t)
  double p_norm = 0.0;
  double lower_gap = 0.0;   // EMD(b_T) - ||P b_T||_1, <= 1e-9 required
  double upper_ratio = 0.0; // ||P b_T||_1 / EMD(b_T)
  bool monotone = true;
  bool lower_ok = true;
  bool upper_ok = true;
  bool ok() const { return skipped || (monotone && lower_ok && upper_ok); }
};

// Checks EMD(b_{t-1}) <= EMD(b_t) + 1e-9 and
// EMD(b_T) <= ||P b_T||_1 <= 2k(T+1) EMD(b_T) + 1e-9. Skipped for k > 3 or
// more than 40 support points.
ChainBoundsReport ChainBoundsCheck(const ReductionChain& chain,
                                   const LatticeEmd& emd = LatticeEmdL1);

// [{"t":..,"support":..,"mass":..,"weight":..}, ...] from level T down.
std::string ChainDumpJson(const ReductionChain& chain);

}  // namespace gpflow

#endif  // GPFLOW_LATPRECOND_H_
