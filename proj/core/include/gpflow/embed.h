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

// Metric embedding pipeline: graph metric -> l1 (Bourgain) -> low dimension
// (Johnson-Lindenstrauss) -> [0,1]^k -> dyadic lattice (2^-T Z)^k.

#ifndef GPFLOW_EMBED_H_
#define GPFLOW_EMBED_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gpflow/graph.h"
#include "gpflow/vector_ops.h"

namespace gpflow {

// Affine map applied by Normalize: normalized = (original - translation) *
// scale.
struct ScaleRecord {
  Vec translation;
  double scale = 1.0;
};

struct PointCloud {
  std::vector<Vec> points;
  int dim = 0;
  ScaleRecord scale;
};

struct BourgainOptions {
  // Repetitions per scale are ceil(repetition_constant * log2 n).
  double repetition_constant = 4.0;
};

// Coordinates are d(x, S) / (number of coordinates) for random vertex sets S
// of sizes 1, 2, 4, ..., 2^(ceil(log2 n) - 1). Each unscaled coordinate is
// 1-Lipschitz, so the map is non-expansive into l1. For n = 1 the single
// point is the origin of R^1.
PointCloud BourgainEmbed(const LengthGraph& g, std::uint64_t seed,
                         const BourgainOptions& options = {});

// Unscaled Bourgain coordinate sets, exposed for the Lipschitz check.
std::vector<std::vector<int>> BourgainSets(int n, std::uint64_t seed,
                                           const BourgainOptions& options = {});

// max(2, ceil(2 sqrt(log2 n))), capped at source_dim.
int JlTargetDimension(int n, int source_dim);

// Multiplies every point by a k x dim Gaussian matrix scaled by 1/sqrt(k).
// With identity_fallback and k >= dim the cloud is returned unchanged.
PointCloud JlProject(const PointCloud& p, int k, std::uint64_t seed,
                     bool identity_fallback = true);

// Translates the bounding box to the origin and scales uniformly so it fits
// in [0,1]^k. Ratios of distances are unchanged.
PointCloud Normalize(const PointCloud& p);

double L1Distance(std::span<const double> a, std::span<const double> b);

// Smallest T with 2^-T <= (min positive pairwise l1 distance) / (4k),
// capped at max_levels. Returns 0 when no two points differ.
int ChooseLevels(const PointCloud& p, int max_levels = 40);

using LatticePoint = std::vector<std::int64_t>;  // units of 2^-T

struct SnapReport {
  int levels = 0;
  double max_displacement = 0.0;  // l1, over points
  double displacement_bound = 0.0;  // k 2^(-T-1)
  int distinct_points = 0;
};

struct SnapResult {
  std::vector<LatticePoint> lattice;  // one per input point
  SnapReport report;
};

// Rounds every coordinate to the nearest multiple of 2^-T, ties downward.
// Requires a cloud inside [0,1]^k.
SnapResult SnapToLattice(const PointCloud& p, int levels);

// Upper bound on the l1 routing cost added by snapping: sum |b| k 2^(-T-1).
double SnapCostBound(std::span<const double> b, int k, int levels);

struct DistortionReport {
  double mu = 1.0;
  double distortion = 1.0;
  std::pair<int, int> worst_contracted{-1, -1};
  std::pair<int, int> worst_expanded{-1, -1};
};

enum class EmbeddedMetric { kL1, kL2 };

// mu = 1 / min ratio so that 1 <= mu d~/d <= L for every pair, L minimal.
// Throws ContractViolation when two distinct vertices have true distance 0.
// If some embedded distance is zero, mu and the distortion are infinite.
DistortionReport MeasureDistortion(const std::vector<Vec>& d_true,
                                   const PointCloud& p,
                                   EmbeddedMetric metric = EmbeddedMetric::kL1);

// {"points": [[...], ...], "snap": {...}} with 17 significant digits.
std::string EmbeddingDumpJson(const PointCloud& p, const SnapResult& snap);

}  // namespace gpflow

#endif  // GPFLOW_EMBED_H_
