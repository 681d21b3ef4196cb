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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <utility>

#include "gpflow/errors.h"

namespace gpflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ------------------------------------------------------- min-cost flow

McfResult ExactMcf(const LengthGraph& g, std::span<const double> b) {
  CheckDemand(g, b);
  const int n = g.num_vertices();
  if (n > kMcfVertexBudget) {
    throw OracleBudgetExceeded("ExactMcf: " + std::to_string(n) +
                               " vertices exceeds the budget");
  }
  const double tol = 1e-12 * std::max(1.0, L1Norm(b));
  Vec supply(n), demand(n);
  for (int v = 0; v < n; ++v) {
    supply[v] = std::max(0.0, -b[v]);
    demand[v] = std::max(0.0, b[v]);
  }
  McfResult out;
  out.flow.assign(g.num_edges(), 0.0);
  Vec& j = out.flow;
  Vec pi(n, 0.0), dist(n);
  std::vector<int> pred_edge(n), root(n);
  using Item = std::pair<double, int>;

  // Residual arc u -> w along edge e: cancels opposite flow first (cost
  // -len, capacity |j|), otherwise adds flow (cost +len, unbounded).
  auto arc = [&](int e, int u, double* cost, double* cap) {
    const double dir = g.edge(e).tail == u ? 1.0 : -1.0;
    const double along = dir * j[e];
    if (along < 0.0) {
      *cost = -g.edge(e).length;
      *cap = -along;
    } else {
      *cost = g.edge(e).length;
      *cap = kInf;
    }
  };

  while (true) {
    bool any_supply = false, any_demand = false;
    for (int v = 0; v < n; ++v) {
      any_supply |= supply[v] > tol;
      any_demand |= demand[v] > tol;
    }
    if (!any_supply || !any_demand) break;

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred_edge.begin(), pred_edge.end(), -1);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int v = 0; v < n; ++v) {
      if (supply[v] > tol) {
        dist[v] = 0.0;
        root[v] = v;
        heap.emplace(0.0, v);
      }
    }
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (int e : g.Incident(u)) {
        const int w = g.Other(e, u);
        double cost, cap;
        arc(e, u, &cost, &cap);
        const double reduced = std::max(0.0, cost + pi[u] - pi[w]);
        if (d + reduced < dist[w]) {
          dist[w] = d + reduced;
          pred_edge[w] = e;
          root[w] = root[u];
          heap.emplace(dist[w], w);
        }
      }
    }
    int t = -1;
    for (int v = 0; v < n; ++v) {
      if (demand[v] > tol && dist[v] < kInf &&
          (t < 0 || dist[v] < dist[t])) {
        t = v;
      }
    }
    if (t < 0) throw ContractViolation("ExactMcf: no augmenting path");
    const int s = root[t];
    double amount = std::min(supply[s], demand[t]);
    for (int v = t; v != s;) {
      const int e = pred_edge[v];
      const int u = g.Other(e, v);
      double cost, cap;
      arc(e, u, &cost, &cap);
      amount = std::min(amount, cap);
      v = u;
    }
    for (int v = t; v != s;) {
      const int e = pred_edge[v];
      const int u = g.Other(e, v);
      j[e] += (g.edge(e).tail == u ? 1.0 : -1.0) * amount;
      v = u;
    }
    supply[s] -= amount;
    demand[t] -= amount;
    for (int v = 0; v < n; ++v) pi[v] += std::min(dist[v], dist[t]);
  }
  out.cost = Cost(g, j);
  // Shift so the potential is zero at vertex 0; differences are unchanged.
  const double base = pi[0];
  for (double& p : pi) p -= base;
  out.potential = std::move(pi);
  return out;
}

// ------------------------------------------------------ linear programs

namespace {

class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols),
      t_((rows + 1) * static_cast<std::size_t>(cols + 1), 0.0),
      basis_(rows, -1) {}

  double& at(int r, int c) { return t_[r * static_cast<std::size_t>(cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double& obj(int c) { return at(rows_, c); }
  std::vector<int>& basis() { return basis_; }

  void Pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Bland's rule over columns [0, allowed). Returns false if unbounded.
  bool Run(int allowed, double eps) {
    while (true) {
      int pc = -1;
      for (int c = 0; c < allowed; ++c) {
        if (obj(c) < -eps) {
          pc = c;
          break;
        }
      }
      if (pc < 0) return true;
      int pr = -1;
      double best = kInf;
      for (int r = 0; r < rows_; ++r) {
        const double a = at(r, pc);
        if (a > eps) {
          const double ratio = rhs(r) / a;
          if (ratio < best - eps ||
              (std::abs(ratio - best) <= eps && basis_[r] < basis_[pr])) {
            best = ratio;
            pr = r;
          }
        }
      }
      if (pr < 0) return false;
      Pivot(pr, pc);
    }
  }

 private:
  int rows_;
  int cols_;
  Vec t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult SolveLp(const LinearProgram& lp) {
  const int m = lp.rows;
  const int n = lp.cols;
  if (lp.a.size() != static_cast<std::size_t>(m) * n ||
      lp.b.size() != static_cast<std::size_t>(m) ||
      lp.c.size() != static_cast<std::size_t>(n)) {
    throw ContractViolation("SolveLp: inconsistent dimensions");
  }
  double scale = 1.0;
  for (double v : lp.a) scale = std::max(scale, std::abs(v));
  for (double v : lp.b) scale = std::max(scale, std::abs(v));
  const double eps = 1e-11 * scale;

  Tableau tab(m, n + m);
  for (int r = 0; r < m; ++r) {
    const double sign = lp.b[r] < 0.0 ? -1.0 : 1.0;
    for (int c = 0; c < n; ++c) tab.at(r, c) = sign * lp.a[r * n + c];
    tab.at(r, n + r) = 1.0;
    tab.rhs(r) = sign * lp.b[r];
    tab.basis()[r] = n + r;
  }
  // Phase 1: minimize the sum of artificials.
  for (int c = 0; c < n; ++c) {
    double s = 0.0;
    for (int r = 0; r < m; ++r) s += tab.at(r, c);
    tab.obj(c) = -s;
  }
  double total = 0.0;
  for (int r = 0; r < m; ++r) total += tab.rhs(r);
  tab.obj(n + m) = -total;
  tab.Run(n, eps);
  LpResult out;
  double infeas = 0.0;
  for (int r = 0; r < m; ++r) {
    if (tab.basis()[r] >= n) infeas += std::abs(tab.rhs(r));
  }
  if (infeas > 1e-9 * scale) {
    out.status = LpResult::Status::kInfeasible;
    return out;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) continue;
    for (int c = 0; c < n; ++c) {
      if (std::abs(tab.at(r, c)) > eps) {
        tab.Pivot(r, c);
        break;
      }
    }
  }
  // Phase 2 objective row: reduced costs of the original problem.
  for (int c = 0; c <= n + m; ++c) tab.obj(c) = c < n ? lp.c[c] : 0.0;
  for (int r = 0; r < m; ++r) {
    const int bc = tab.basis()[r];
    if (bc >= n) continue;
    const double cb = lp.c[bc];
    if (cb == 0.0) continue;
    for (int c = 0; c <= n + m; ++c) tab.obj(c) -= cb * tab.at(r, c);
  }
  if (!tab.Run(n, eps)) {
    out.status = LpResult::Status::kUnbounded;
    return out;
  }
  out.status = LpResult::Status::kOptimal;
  out.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) out.x[tab.basis()[r]] = tab.rhs(r);
  }
  out.objective = Dot(out.x, lp.c);
  return out;
}

LpResult MinL1NormLp(int rows, int cols, std::span<const double> a,
                     std::span<const double> b) {
  LinearProgram lp;
  lp.rows = rows;
  lp.cols = 2 * cols;
  lp.a.assign(static_cast<std::size_t>(rows) * 2 * cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      lp.a[r * 2 * cols + c] = a[r * cols + c];
      lp.a[r * 2 * cols + cols + c] = -a[r * cols + c];
    }
  }
  lp.b.assign(b.begin(), b.end());
  lp.c.assign(2 * cols, 1.0);
  LpResult res = SolveLp(lp);
  if (res.status == LpResult::Status::kOptimal) {
    Vec x(cols);
    for (int c = 0; c < cols; ++c) x[c] = res.x[c] - res.x[cols + c];
    res.x = std::move(x);
  }
  return res;
}

double MinCostFlowLp(const LengthGraph& g, std::span<const double> b) {
  CheckDemand(g, b);
  const int n = g.num_vertices();
  const int m = g.num_edges();
  LinearProgram lp;
  lp.rows = n;
  lp.cols = 2 * m;
  lp.a.assign(static_cast<std::size_t>(n) * 2 * m, 0.0);
  lp.c.assign(2 * m, 0.0);
  for (int e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    lp.a[ed.head * 2 * m + e] += 1.0;
    lp.a[ed.tail * 2 * m + e] -= 1.0;
    lp.a[ed.head * 2 * m + m + e] -= 1.0;
    lp.a[ed.tail * 2 * m + m + e] += 1.0;
    lp.c[e] = lp.c[m + e] = ed.length;
  }
  lp.b.assign(b.begin(), b.end());
  LpResult res = SolveLp(lp);
  if (res.status != LpResult::Status::kOptimal) {
    throw OracleInconsistency("MinCostFlowLp: LP not optimal");
  }
  return res.objective;
}

// ------------------------------------------------------ transportation

double Transportation(std::span<const double> supplies,
                      std::span<const double> demands,
                      std::span<const double> costs) {
  const int ns = static_cast<int>(supplies.size());
  const int nd = static_cast<int>(demands.size());
  if (costs.size() != static_cast<std::size_t>(ns) * nd) {
    throw ContractViolation("Transportation: cost matrix shape");
  }
  const int nn = ns + nd;
  double scale = 0.0;
  for (double s : supplies) scale += s;
  const double tol = 1e-12 * std::max(1.0, scale);
  Vec sup(supplies.begin(), supplies.end());
  Vec dem(demands.begin(), demands.end());
  Vec flow(static_cast<std::size_t>(ns) * nd, 0.0);
  Vec pi(nn, 0.0), dist(nn);
  std::vector<int> pred(nn), root(nn);
  std::vector<char> done(nn);
  double total = 0.0;
  while (true) {
    bool any_s = false, any_d = false;
    for (double s : sup) any_s |= s > tol;
    for (double d : dem) any_d |= d > tol;
    if (!any_s || !any_d) break;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    std::fill(pred.begin(), pred.end(), -1);
    for (int s = 0; s < ns; ++s) {
      if (sup[s] > tol) {
        dist[s] = 0.0;
        root[s] = s;
      }
    }
    // Dense Dijkstra.
    while (true) {
      int u = -1;
      for (int v = 0; v < nn; ++v) {
        if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
      }
      if (u < 0) break;
      done[u] = 1;
      if (u < ns) {
        for (int d = 0; d < nd; ++d) {
          const int w = ns + d;
          const double rc =
              std::max(0.0, costs[u * nd + d] + pi[u] - pi[w]);
          if (dist[u] + rc < dist[w]) {
            dist[w] = dist[u] + rc;
            pred[w] = u;
            root[w] = root[u];
          }
        }
      } else {
        const int d = u - ns;
        for (int s = 0; s < ns; ++s) {
          if (flow[s * nd + d] <= 0.0) continue;
          const double rc = std::max(0.0, -costs[s * nd + d] + pi[u] - pi[s]);
          if (dist[u] + rc < dist[s]) {
            dist[s] = dist[u] + rc;
            pred[s] = u;
            root[s] = root[u];
          }
        }
      }
    }
    int t = -1;
    for (int d = 0; d < nd; ++d) {
      const int w = ns + d;
      if (dem[d] > tol && dist[w] < kInf && (t < 0 || dist[w] < dist[t])) {
        t = w;
      }
    }
    if (t < 0) throw ContractViolation("Transportation: no augmenting path");
    const int s0 = root[t];
    double amount = std::min(sup[s0], dem[t - ns]);
    for (int v = t; v != s0; v = pred[v]) {
      const int u = pred[v];
      if (u >= ns) amount = std::min(amount, flow[v * nd + (u - ns)]);
    }
    for (int v = t; v != s0; v = pred[v]) {
      const int u = pred[v];
      if (u < ns) {
        flow[u * nd + (v - ns)] += amount;
      } else {
        flow[v * nd + (u - ns)] -= amount;
      }
    }
    sup[s0] -= amount;
    dem[t - ns] -= amount;
    for (int v = 0; v < nn; ++v) pi[v] += std::min(dist[v], dist[t]);
  }
  for (std::size_t k = 0; k < flow.size(); ++k) total += flow[k] * costs[k];
  return total;
}

namespace {

struct MergedSupport {
  std::vector<Vec> points;
  Vec mass;
};

MergedSupport Merge(const std::vector<Vec>& points, std::span<const double> b) {
  if (points.size() != b.size()) {
    throw ContractViolation("EMD: points and masses differ in length");
  }
  std::map<Vec, double> acc;
  for (std::size_t i = 0; i < points.size(); ++i) acc[points[i]] += b[i];
  MergedSupport out;
  for (auto& [p, v] : acc) {
    if (v == 0.0) continue;
    out.points.push_back(p);
    out.mass.push_back(v);
  }
  if (out.points.size() > static_cast<std::size_t>(kEmdPointBudget)) {
    throw OracleBudgetExceeded("EMD: support of " +
                               std::to_string(out.points.size()) +
                               " points exceeds the budget");
  }
  return out;
}

double L1Distance(const Vec& p, const Vec& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return d;
}

}  // namespace

double EmdL1(const std::vector<Vec>& points, std::span<const double> b) {
  MergedSupport ms = Merge(points, b);
  std::vector<int> pos, neg;
  for (std::size_t i = 0; i < ms.mass.size(); ++i) {
    (ms.mass[i] > 0 ? pos : neg).push_back(static_cast<int>(i));
  }
  if (pos.empty() || neg.empty()) return 0.0;
  Vec sup, dem, cost;
  for (int i : pos) sup.push_back(ms.mass[i]);
  for (int i : neg) dem.push_back(-ms.mass[i]);
  cost.reserve(pos.size() * neg.size());
  for (int i : pos) {
    for (int k : neg) cost.push_back(L1Distance(ms.points[i], ms.points[k]));
  }
  return Transportation(sup, dem, cost);
}

double EmdL1ViaMcf(const std::vector<Vec>& points, std::span<const double> b) {
  MergedSupport ms = Merge(points, b);
  const int s = static_cast<int>(ms.points.size());
  if (s < 2) return 0.0;
  std::vector<Edge> edges;
  for (int u = 0; u < s; ++u) {
    for (int v = u + 1; v < s; ++v) {
      edges.push_back({u, v, L1Distance(ms.points[u], ms.points[v])});
    }
  }
  LengthGraph g(s, std::move(edges));
  Vec mass = ms.mass;
  // Absorb rounding drift so the demand check sees an exact zero total.
  mass[0] -= Sum(mass);
  return ExactMcf(g, mass).cost;
}

// ------------------------------------------------------------ generators

InstanceKind ParseInstanceKind(const std::string& name) {
  if (name == "random_geometric") return InstanceKind::kRandomGeometric;
  if (name == "grid") return InstanceKind::kGrid;
  if (name == "star") return InstanceKind::kStar;
  if (name == "path") return InstanceKind::kPath;
  if (name == "dipole") return InstanceKind::kDipole;
  throw ContractViolation("unknown instance kind '" + name + "'");
}

std::string InstanceKindName(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kRandomGeometric:
      return "random_geometric";
    case InstanceKind::kGrid:
      return "grid";
    case InstanceKind::kStar:
      return "star";
    case InstanceKind::kPath:
      return "path";
    case InstanceKind::kDipole:
      return "dipole";
  }
  return "unknown";
}

namespace {

bool Connected(int n, const std::vector<Edge>& edges) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = n;
  for (const Edge& e : edges) {
    int a = find(e.tail), b = find(e.head);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return comps == 1;
}

Vec BalancedNormalDemands(int n, std::mt19937_64& rng) {
  Vec b(n, 0.0);
  if (n < 2) return b;
  std::normal_distribution<double> normal;
  for (double& x : b) x = normal(rng);
  const double mean = Sum(b) / n;
  const double unit = std::ldexp(1.0, 20);
  for (double& x : b) x = std::nearbyint((x - mean) * unit) / unit;
  double rest = 0.0;
  for (int v = 1; v < n; ++v) rest += b[v];
  b[0] = -rest;
  return b;
}

}  // namespace

GeneratedInstance GenerateInstance(const InstanceParams& params,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n_param = params.n;
  auto length = [&]() { return params.unit_lengths ? 1.0 : 0.5 + unif(rng); };
  std::vector<Edge> edges;
  std::vector<Vec> coords;
  int n = 0;
  switch (params.kind) {
    case InstanceKind::kRandomGeometric:
    case InstanceKind::kDipole: {
      if (n_param < 2) throw ContractViolation("random_geometric: need n >= 2");
      n = n_param;
      const double radius =
          params.radius_scale * std::sqrt(std::log(n) / static_cast<double>(n));
      for (int attempt = 0;; ++attempt) {
        if (attempt > 1000) {
          throw ContractViolation("random_geometric: no connected sample");
        }
        coords.assign(n, Vec(2));
        for (Vec& p : coords) {
          p[0] = unif(rng);
          p[1] = unif(rng);
        }
        edges.clear();
        for (int u = 0; u < n; ++u) {
          for (int v = u + 1; v < n; ++v) {
            const double d = std::hypot(coords[u][0] - coords[v][0],
                                        coords[u][1] - coords[v][1]);
            if (d < radius && d > 0.0) edges.push_back({u, v, d});
          }
        }
        if (Connected(n, edges)) break;
      }
      break;
    }
    case InstanceKind::kGrid: {
      const int s = n_param;
      if (s < 1) throw ContractViolation("grid: side must be positive");
      n = s * s;
      for (int r = 0; r < s; ++r) {
        for (int c = 0; c < s; ++c) {
          const int v = r * s + c;
          if (c + 1 < s) edges.push_back({v, v + 1, length()});
          if (r + 1 < s) edges.push_back({v, v + s, length()});
        }
      }
      break;
    }
    case InstanceKind::kStar:
      if (n_param < 2) throw ContractViolation("star: need n >= 2");
      n = n_param;
      for (int v = 1; v < n; ++v) edges.push_back({0, v, length()});
      break;
    case InstanceKind::kPath:
      if (n_param < 2) throw ContractViolation("path: need n >= 2");
      n = n_param;
      for (int v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, length()});
      break;
  }
  Vec b;
  if (params.kind == InstanceKind::kDipole) {
    b.assign(n, 0.0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int s = pick(rng);
    int t = pick(rng);
    while (t == s) t = pick(rng);
    b[s] = -1.0;
    b[t] = 1.0;
  } else {
    b = BalancedNormalDemands(n, rng);
  }
  return GeneratedInstance{LengthGraph(n, std::move(edges)), std::move(b),
                           std::move(coords)};
}

}  // namespace gpflow
