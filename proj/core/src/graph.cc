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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "gpflow/errors.h"

namespace gpflow {

namespace {

// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

void CheckSize(std::size_t got, int want, const char* what) {
  if (got != static_cast<std::size_t>(want)) {
    throw ContractViolation(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

LengthGraph::LengthGraph(int num_vertices, std::vector<Edge> edges)
    : n_(num_vertices), edges_(std::move(edges)) {
  if (n_ <= 0) throw InfeasibleInput("graph must have at least one vertex");
  std::vector<int> degree(n_ + 1, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.tail < 0 || ed.tail >= n_ || ed.head < 0 || ed.head >= n_) {
      throw InfeasibleInput("edge " + std::to_string(e) +
                            " has an endpoint out of range");
    }
    if (ed.tail == ed.head) {
      throw InfeasibleInput("edge " + std::to_string(e) + " is a self-loop");
    }
    if (!(ed.length > 0.0) || !std::isfinite(ed.length)) {
      throw InfeasibleInput("edge " + std::to_string(e) +
                            " has a non-positive length");
    }
    ++degree[ed.tail + 1];
    ++degree[ed.head + 1];
  }
  offsets_.assign(n_ + 1, 0);
  for (int v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v + 1];
  incident_.assign(offsets_[n_], 0);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  DisjointSets ds(n_);
  int components = n_;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    incident_[fill[edges_[e].tail]++] = static_cast<int>(e);
    incident_[fill[edges_[e].head]++] = static_cast<int>(e);
    if (ds.Union(edges_[e].tail, edges_[e].head)) --components;
  }
  if (components != 1) throw InfeasibleInput("graph is not connected");
}

Vec LengthGraph::Lengths() const {
  Vec len(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) len[e] = edges_[e].length;
  return len;
}

void CheckDemand(const LengthGraph& g, std::span<const double> b) {
  if (b.size() != static_cast<std::size_t>(g.num_vertices())) {
    throw InfeasibleInput("demand vector has the wrong length");
  }
  for (double x : b) {
    if (!std::isfinite(x)) throw InfeasibleInput("demand is not finite");
  }
  if (std::abs(Sum(b)) > 1e-9 * L1Norm(b)) {
    throw InfeasibleInput("total demand is not zero");
  }
}

Vec Derivative(const LengthGraph& g, std::span<const double> phi) {
  CheckSize(phi.size(), g.num_vertices(), "Derivative");
  Vec f(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    f[e] = phi[g.edge(e).head] - phi[g.edge(e).tail];
  }
  return f;
}

Vec Divergence(const LengthGraph& g, std::span<const double> j) {
  CheckSize(j.size(), g.num_edges(), "Divergence");
  Vec b(g.num_vertices(), 0.0);
  // Per-vertex pairwise sums keep the result independent of edge order.
  for (int v = 0; v < g.num_vertices(); ++v) {
    auto inc = g.Incident(v);
    b[v] = PairwiseReduce(inc.size(), [&](std::size_t k) {
      const int e = inc[k];
      return g.edge(e).head == v ? j[e] : -j[e];
    });
  }
  return b;
}

double Cost(const LengthGraph& g, std::span<const double> j) {
  CheckSize(j.size(), g.num_edges(), "Cost");
  return PairwiseReduce(j.size(), [&](std::size_t e) {
    return std::abs(j[e]) * g.edge(static_cast<int>(e)).length;
  });
}

double Stretch(const LengthGraph& g, std::span<const double> f) {
  CheckSize(f.size(), g.num_edges(), "Stretch");
  double m = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    m = std::max(m, std::abs(f[e]) / g.edge(e).length);
  }
  return m;
}

double LipschitzConstant(const LengthGraph& g, std::span<const double> phi) {
  return Stretch(g, Derivative(g, phi));
}

Vec ShortestPaths(const LengthGraph& g, std::span<const int> sources) {
  const double inf = std::numeric_limits<double>::infinity();
  Vec dist(g.num_vertices(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (int s : sources) {
    if (s < 0 || s >= g.num_vertices()) {
      throw ContractViolation("ShortestPaths: source out of range");
    }
    dist[s] = 0.0;
    heap.emplace(0.0, s);
  }
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (int e : g.Incident(u)) {
      const int w = g.Other(e, u);
      const double nd = d + g.edge(e).length;
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.emplace(nd, w);
      }
    }
  }
  return dist;
}

std::vector<Vec> AllPairsDistances(const LengthGraph& g) {
  std::vector<Vec> d(g.num_vertices());
  for (int s = 0; s < g.num_vertices(); ++s) {
    const int src[1] = {s};
    d[s] = ShortestPaths(g, src);
  }
  return d;
}

std::vector<int> MinimumSpanningTree(const LengthGraph& g) {
  std::vector<int> order(g.num_edges());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.edge(a).length != g.edge(b).length) {
      return g.edge(a).length < g.edge(b).length;
    }
    return a < b;
  });
  DisjointSets ds(g.num_vertices());
  std::vector<int> tree;
  tree.reserve(g.num_vertices() - 1);
  for (int e : order) {
    if (ds.Union(g.edge(e).tail, g.edge(e).head)) tree.push_back(e);
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

Vec MstRoute(const LengthGraph& g, std::span<const double> b) {
  CheckDemand(g, b);
  const int n = g.num_vertices();
  const std::vector<int> tree = MinimumSpanningTree(g);
  std::vector<char> in_tree(g.num_edges(), 0);
  for (int e : tree) in_tree[e] = 1;
  // BFS from vertex 0 over tree edges; order[] lists parents before children.
  std::vector<int> parent_edge(n, -1), order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  order.push_back(0);
  seen[0] = 1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int u = order[k];
    for (int e : g.Incident(u)) {
      if (!in_tree[e]) continue;
      const int w = g.Other(e, u);
      if (seen[w]) continue;
      seen[w] = 1;
      parent_edge[w] = e;
      order.push_back(w);
    }
  }
  // The subtree of c must receive exactly its total demand through the
  // parent edge: flow toward c equals sum of b over the subtree.
  Vec subtree(b.begin(), b.end());
  Vec j(g.num_edges(), 0.0);
  for (std::size_t k = order.size(); k-- > 1;) {
    const int c = order[k];
    const int e = parent_edge[c];
    const int p = g.Other(e, c);
    j[e] = g.edge(e).head == c ? subtree[c] : -subtree[c];
    subtree[p] += subtree[c];
  }
  return j;
}

double BoundaryCapacity(const LengthGraph& g,
                        std::span<const double> capacities,
                        const CutSet& set) {
  CheckSize(capacities.size(), g.num_edges(), "BoundaryCapacity");
  std::vector<char> in(g.num_vertices(), 0);
  for (int v : set.members) {
    if (v < 0 || v >= g.num_vertices()) {
      throw ContractViolation("cut set member out of range");
    }
    in[v] = 1;
  }
  double cap = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (in[g.edge(e).tail] != in[g.edge(e).head]) cap += capacities[e];
  }
  return cap;
}

double CutFamilyNorm(const LengthGraph& g, std::span<const double> capacities,
                     const std::vector<CutSet>& family,
                     std::span<const double> b) {
  if (family.empty()) throw ContractViolation("CutFamilyNorm: empty family");
  CheckSize(b.size(), g.num_vertices(), "CutFamilyNorm");
  double best = 0.0;
  for (const CutSet& s : family) {
    const double cap = BoundaryCapacity(g, capacities, s);
    if (!(cap > 0.0)) {
      throw ContractViolation("CutFamilyNorm: set with zero boundary capacity");
    }
    double total = PairwiseReduce(s.members.size(),
                                  [&](std::size_t k) { return b[s.members[k]]; });
    best = std::max(best, std::abs(total) / cap);
  }
  return best;
}

}  // namespace gpflow
