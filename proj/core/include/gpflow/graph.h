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

// Undirected graphs with positive edge lengths and the discrete calculus on
// them.
//
// Sign convention: for a flow j on oriented edges, the divergence is
//   (D j)(x) = sum_{e into x} j(e) - sum_{e out of x} j(e),
// so a source carries negative demand. The derivative of a potential is
//   (D* phi)(e) = phi(head) - phi(tail),
// and D is the adjoint of D*: <D j, phi> = <j, D* phi>.

#ifndef GPFLOW_GRAPH_H_
#define GPFLOW_GRAPH_H_

#include <span>
#include <vector>

#include "gpflow/vector_ops.h"

namespace gpflow {

struct Edge {
  int tail = 0;
  int head = 0;
  double length = 1.0;
};

class LengthGraph {
 public:
  // Throws InfeasibleInput on self-loops, non-positive or non-finite
  // lengths, out-of-range endpoints, or a disconnected graph.
  LengthGraph(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  Vec Lengths() const;
  // Indices of edges incident to v, in increasing order.
  std::span<const int> Incident(int v) const {
    return {incident_.data() + offsets_[v],
            incident_.data() + offsets_[v + 1]};
  }
  int Other(int e, int v) const {
    return edges_[e].tail == v ? edges_[e].head : edges_[e].tail;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<int> offsets_;
  std::vector<int> incident_;
};

struct DualPotential {
  Vec phi;
  double lipschitz = 0.0;
};

// Throws InfeasibleInput unless |sum b| <= 1e-9 * ||b||_1 and sizes match.
void CheckDemand(const LengthGraph& g, std::span<const double> b);

Vec Derivative(const LengthGraph& g, std::span<const double> phi);
Vec Divergence(const LengthGraph& g, std::span<const double> j);
// sum_e |j(e)| len(e).
double Cost(const LengthGraph& g, std::span<const double> j);
// max_e |f(e)| / len(e).
double Stretch(const LengthGraph& g, std::span<const double> f);
// Smallest L with |phi(x) - phi(y)| <= L len(xy) on every edge.
double LipschitzConstant(const LengthGraph& g, std::span<const double> phi);

// Exact distances to the nearest member of `sources` (Dijkstra).
Vec ShortestPaths(const LengthGraph& g, std::span<const int> sources);
// All-pairs distance matrix, row-major n x n.
std::vector<Vec> AllPairsDistances(const LengthGraph& g);

// Kruskal with ties broken by (length, edge index). Returns edge indices.
std::vector<int> MinimumSpanningTree(const LengthGraph& g);
// The unique flow on the minimum spanning tree with D j = b.
Vec MstRoute(const LengthGraph& g, std::span<const double> b);

struct CutSet {
  std::vector<int> members;
};
// max_S |1_S . b| / cap(boundary S) over the family.
double CutFamilyNorm(const LengthGraph& g, std::span<const double> capacities,
                     const std::vector<CutSet>& family,
                     std::span<const double> b);
// Boundary capacity of a vertex set.
double BoundaryCapacity(const LengthGraph& g,
                        std::span<const double> capacities,
                        const CutSet& set);

}  // namespace gpflow

#endif  // GPFLOW_GRAPH_H_
