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

#include "gpflow/embed.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "gpflow/errors.h"
#include "json.hpp"

namespace gpflow {

namespace {

int CeilLog2(int n) {
  int t = 0;
  while ((1 << t) < n) ++t;
  return t;
}

}  // namespace

std::vector<std::vector<int>> BourgainSets(int n, std::uint64_t seed,
                                           const BourgainOptions& options) {
  std::vector<std::vector<int>> sets;
  if (n <= 1) return sets;
  const int scales = CeilLog2(n);
  const int reps = static_cast<int>(
      std::ceil(options.repetition_constant * std::log2(static_cast<double>(n))));
  std::mt19937_64 rng(seed);
  std::vector<int> perm(n);
  for (int i = 1; i <= scales; ++i) {
    const int size = 1 << (i - 1);
    for (int r = 0; r < reps; ++r) {
      std::iota(perm.begin(), perm.end(), 0);
      // Partial Fisher-Yates: the first `size` entries are a uniform sample.
      for (int k = 0; k < size; ++k) {
        std::uniform_int_distribution<int> pick(k, n - 1);
        std::swap(perm[k], perm[pick(rng)]);
      }
      std::vector<int> s(perm.begin(), perm.begin() + size);
      std::sort(s.begin(), s.end());
      sets.push_back(std::move(s));
    }
  }
  return sets;
}

PointCloud BourgainEmbed(const LengthGraph& g, std::uint64_t seed,
                         const BourgainOptions& options) {
  const int n = g.num_vertices();
  PointCloud out;
  if (n == 1) {
    out.dim = 1;
    out.points.assign(1, Vec{0.0});
    return out;
  }
  const auto sets = BourgainSets(n, seed, options);
  const int dim = static_cast<int>(sets.size());
  out.dim = dim;
  out.points.assign(n, Vec(dim));
  for (int c = 0; c < dim; ++c) {
    const Vec d = ShortestPaths(g, sets[c]);
    for (int v = 0; v < n; ++v) out.points[v][c] = d[v] / dim;
  }
  return out;
}

int JlTargetDimension(int n, int source_dim) {
  const double lg = n > 1 ? std::log2(static_cast<double>(n)) : 0.0;
  const int k = std::max(2, static_cast<int>(std::ceil(2.0 * std::sqrt(lg))));
  return std::max(1, std::min(k, source_dim));
}

PointCloud JlProject(const PointCloud& p, int k, std::uint64_t seed,
                     bool identity_fallback) {
  if (k < 1) throw ConfigurationError("JlProject: k must be positive");
  if (identity_fallback && k >= p.dim) return p;
  if (k > p.dim) {
    throw ConfigurationError("JlProject: target dimension exceeds source");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double s = 1.0 / std::sqrt(static_cast<double>(k));
  Vec g(static_cast<std::size_t>(k) * p.dim);
  for (double& x : g) x = normal(rng) * s;
  PointCloud out;
  out.dim = k;
  out.points.assign(p.points.size(), Vec(k, 0.0));
  for (std::size_t v = 0; v < p.points.size(); ++v) {
    for (int r = 0; r < k; ++r) {
      out.points[v][r] = Dot(std::span<const double>(g).subspan(
                                 static_cast<std::size_t>(r) * p.dim, p.dim),
                             p.points[v]);
    }
  }
  return out;
}

PointCloud Normalize(const PointCloud& p) {
  PointCloud out = p;
  if (p.points.empty()) return out;
  Vec lo(p.dim, std::numeric_limits<double>::infinity());
  Vec hi(p.dim, -std::numeric_limits<double>::infinity());
  for (const Vec& x : p.points) {
    for (int c = 0; c < p.dim; ++c) {
      lo[c] = std::min(lo[c], x[c]);
      hi[c] = std::max(hi[c], x[c]);
    }
  }
  double extent = 0.0;
  for (int c = 0; c < p.dim; ++c) extent = std::max(extent, hi[c] - lo[c]);
  const double scale = extent > 0.0 ? 1.0 / extent : 1.0;
  for (Vec& x : out.points) {
    for (int c = 0; c < p.dim; ++c) {
      x[c] = std::clamp((x[c] - lo[c]) * scale, 0.0, 1.0);
    }
  }
  out.scale.translation = lo;
  out.scale.scale = scale;
  return out;
}

double L1Distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

int ChooseLevels(const PointCloud& p, int max_levels) {
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < p.points.size(); ++u) {
    for (std::size_t v = u + 1; v < p.points.size(); ++v) {
      const double d = L1Distance(p.points[u], p.points[v]);
      if (d > 0.0) dmin = std::min(dmin, d);
    }
  }
  if (!std::isfinite(dmin)) return 0;
  const double target = dmin / (4.0 * p.dim);
  int t = 0;
  while (t < max_levels && std::ldexp(1.0, -t) > target) ++t;
  return t;
}

SnapResult SnapToLattice(const PointCloud& p, int levels) {
  if (levels < 0 || levels > 62) {
    throw ConfigurationError("SnapToLattice: levels out of range");
  }
  SnapResult out;
  out.report.levels = levels;
  out.report.displacement_bound = p.dim * std::ldexp(1.0, -levels - 1);
  const std::int64_t top = std::int64_t{1} << levels;
  out.lattice.reserve(p.points.size());
  for (const Vec& x : p.points) {
    LatticePoint q(p.dim);
    double disp = 0.0;
    for (int c = 0; c < p.dim; ++c) {
      if (!(x[c] >= 0.0 && x[c] <= 1.0)) {
        throw ContractViolation("SnapToLattice: point outside [0,1]^k");
      }
      const double u = std::ldexp(x[c], levels);
      const double r = std::floor(u);
      std::int64_t i = static_cast<std::int64_t>(r);
      if (u - r > 0.5) ++i;
      i = std::clamp<std::int64_t>(i, 0, top);
      q[c] = i;
      disp += std::abs(x[c] - std::ldexp(static_cast<double>(i), -levels));
    }
    out.report.max_displacement = std::max(out.report.max_displacement, disp);
    out.lattice.push_back(std::move(q));
  }
  std::vector<LatticePoint> uniq = out.lattice;
  std::sort(uniq.begin(), uniq.end());
  out.report.distinct_points = static_cast<int>(
      std::unique(uniq.begin(), uniq.end()) - uniq.begin());
  return out;
}

double SnapCostBound(std::span<const double> b, int k, int levels) {
  return L1Norm(b) * k * std::ldexp(1.0, -levels - 1);
}

DistortionReport MeasureDistortion(const std::vector<Vec>& d_true,
                                   const PointCloud& p, EmbeddedMetric metric) {
  const std::size_t n = p.points.size();
  if (d_true.size() != n) {
    throw ContractViolation("MeasureDistortion: size mismatch");
  }
  DistortionReport rep;
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double d = d_true[u][v];
      if (!(d > 0.0) || !std::isfinite(d)) {
        throw ContractViolation("MeasureDistortion: distinct vertices at "
                                "non-positive or infinite distance");
      }
      double e = 0.0;
      if (metric == EmbeddedMetric::kL1) {
        e = L1Distance(p.points[u], p.points[v]);
      } else {
        e = L2Norm(Subtract(p.points[u], p.points[v]));
      }
      const double r = e / d;
      const std::pair<int, int> pair{static_cast<int>(u), static_cast<int>(v)};
      if (r < rmin) {
        rmin = r;
        rep.worst_contracted = pair;
      }
      if (r > rmax) {
        rmax = r;
        rep.worst_expanded = pair;
      }
    }
  }
  if (n < 2) return rep;
  if (rmin == 0.0) {
    rep.mu = rep.distortion = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.mu = 1.0 / rmin;
  rep.distortion = rmax / rmin;
  return rep;
}

std::string EmbeddingDumpJson(const PointCloud& p, const SnapResult& snap) {
  nlohmann::ordered_json doc;
  doc["dim"] = p.dim;
  doc["points"] = p.points;
  doc["lattice"] = snap.lattice;
  doc["snap"] = {{"levels", snap.report.levels},
                 {"max_displacement", snap.report.max_displacement},
                 {"displacement_bound", snap.report.displacement_bound},
                 {"distinct_points", snap.report.distinct_points}};
  return doc.dump(2);
}

}  // namespace gpflow
