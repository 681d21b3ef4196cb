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

#include <algorithm>
#include <cmath>

#include "gpflow/oracle.h"
#include "json.hpp"

namespace gpflow {

std::vector<LatticePoint> ParentCorners(const LatticePoint& x) {
  std::vector<LatticePoint> out(1, LatticePoint(x.size()));
  for (std::size_t c = 0; c < x.size(); ++c) {
    if (x[c] % 2 == 0) {
      for (LatticePoint& p : out) p[c] = x[c] / 2;
    } else {
      const std::int64_t lo = (x[c] - 1) / 2;
      std::vector<LatticePoint> next;
      next.reserve(out.size() * 2);
      for (const LatticePoint& p : out) {
        next.push_back(p);
        next.back()[c] = lo;
      }
      for (const LatticePoint& p : out) {
        next.push_back(p);
        next.back()[c] = lo + 1;
      }
      out = std::move(next);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double ReductionChain::WeightedNorm() const {
  return PairwiseReduce(masses.size(),
                        [&](std::size_t t) { return weights[t] * masses[t]; });
}

namespace {

double Mass(const LatticeDemands& b) {
  double s = 0.0;
  for (const auto& [p, v] : b.entries) s += std::abs(v);
  return s;
}

}  // namespace

ReductionChain BuildChain(const LatticeDemands& b_top) {
  ReductionChain chain;
  chain.dim = b_top.dim;
  chain.top_level = b_top.level;
  chain.levels.resize(b_top.level + 1);
  chain.levels[b_top.level] = b_top;
  for (int t = b_top.level; t >= 1; --t) {
    chain.levels[t - 1] = ReduceLevel(chain.levels[t]);
  }
  chain.weights.resize(b_top.level + 1);
  chain.masses.resize(b_top.level + 1);
  for (int t = 0; t <= b_top.level; ++t) {
    chain.weights[t] = b_top.dim * std::ldexp(1.0, -t);
    chain.masses[t] = Mass(chain.levels[t]);
  }
  return chain;
}

PreconditionerP::PreconditionerP(std::vector<LatticePoint> support, int dim,
                                 int levels, double scale)
    : support_(std::move(support)), dim_(dim), levels_(levels), scale_(scale) {
  if (dim < 1 || levels < 0) {
    throw ConfigurationError("PreconditionerP: bad dimension or levels");
  }
  if (!(scale > 0.0)) throw ConfigurationError("PreconditionerP: bad scale");
  const std::int64_t top = std::int64_t{1} << levels;
  // Chains of distinct points, in point order.
  std::map<LatticePoint, std::vector<std::pair<std::pair<int, LatticePoint>,
                                               double>>> chains;
  std::map<std::pair<int, LatticePoint>, int> rows;
  for (std::size_t c = 0; c < support_.size(); ++c) {
    const LatticePoint& p = support_[c];
    if (static_cast<int>(p.size()) != dim) {
      throw ContractViolation("PreconditionerP: support point dimension");
    }
    for (std::int64_t x : p) {
      if (x < 0 || x > top) {
        throw ContractViolation("PreconditionerP: support point outside box");
      }
    }
    first_column_.emplace(p, static_cast<int>(c));
    if (chains.count(p)) continue;
    LatticeDemands unit;
    unit.level = levels;
    unit.dim = dim;
    unit.entries[p] = 1.0;
    const ReductionChain chain = BuildChain(unit);
    auto& col = chains[p];
    for (int t = levels; t >= 0; --t) {
      for (const auto& [q, v] : chain.levels[t].entries) {
        col.push_back({{t, q}, scale * chain.weights[t] * v});
        rows.emplace(std::make_pair(t, q), 0);
      }
    }
  }
  int id = 0;
  row_keys_.reserve(rows.size());
  for (auto& [key, r] : rows) {
    r = id++;
    row_keys_.push_back(key);
  }
  col_ptr_.assign(1, 0);
  for (const LatticePoint& p : support_) {
    for (const auto& [key, v] : chains[p]) {
      row_idx_.push_back(rows[key]);
      values_.push_back(v);
    }
    col_ptr_.push_back(static_cast<int>(row_idx_.size()));
  }
}

int PreconditionerP::MaxColumnNonzeros() const {
  int m = 0;
  for (int c = 0; c < cols(); ++c) m = std::max(m, ColumnNonzeros(c));
  return m;
}

void PreconditionerP::ApplyInto(std::span<const double> b,
                                std::span<double> out) const {
  if (b.size() != support_.size() || out.size() != row_keys_.size()) {
    throw ContractViolation("PreconditionerP::Apply: dimension mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (int c = 0; c < cols(); ++c) {
    const double bc = b[c];
    if (bc == 0.0) continue;
    for (int k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      out[row_idx_[k]] += values_[k] * bc;
    }
  }
}

void PreconditionerP::ApplyAdjointInto(std::span<const double> y,
                                       std::span<double> out) const {
  if (y.size() != row_keys_.size() || out.size() != support_.size()) {
    throw ContractViolation("PreconditionerP::ApplyAdjoint: dimension mismatch");
  }
  for (int c = 0; c < cols(); ++c) {
    double s = 0.0;
    for (int k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      s += values_[k] * y[row_idx_[k]];
    }
    out[c] = s;
  }
}

Vec PreconditionerP::Apply(std::span<const double> b) const {
  Vec out(row_keys_.size());
  ApplyInto(b, out);
  return out;
}

Vec PreconditionerP::ApplyAdjoint(std::span<const double> y) const {
  Vec out(support_.size());
  ApplyAdjointInto(y, out);
  return out;
}

Vec PreconditionerP::ColumnDemands(const LatticeDemands& b_top) const {
  if (b_top.level != levels_ || b_top.dim != dim_) {
    throw ContractViolation("PreconditionerP: demand level or dimension");
  }
  Vec b(support_.size(), 0.0);
  for (const auto& [p, v] : b_top.entries) {
    auto it = first_column_.find(p);
    if (it == first_column_.end()) {
      throw ContractViolation("PreconditionerP: unregistered support point");
    }
    b[it->second] += v;
  }
  return b;
}

double CornerRouteBound(const LatticeDemands& b0) {
  if (b0.level != 0) throw ContractViolation("CornerRouteBound: level != 0");
  for (const auto& [p, v] : b0.entries) {
    for (std::int64_t x : p) {
      if (x != 0 && x != 1) {
        throw ContractViolation("CornerRouteBound: support off the corners");
      }
    }
  }
  return 0.5 * b0.dim * Mass(b0);
}

double LatticeEmdL1(const LatticeDemands& b) {
  std::vector<Vec> pts;
  Vec mass;
  for (const auto& [p, v] : b.entries) {
    Vec x(p.size());
    for (std::size_t c = 0; c < p.size(); ++c) {
      x[c] = std::ldexp(static_cast<double>(p[c]), -b.level);
    }
    pts.push_back(std::move(x));
    mass.push_back(v);
  }
  return EmdL1(pts, mass);
}

ChainBoundsReport ChainBoundsCheck(const ReductionChain& chain,
                                   const LatticeEmd& emd) {
  ChainBoundsReport rep;
  const int top = chain.top_level;
  if (chain.dim > 3 || chain.levels[top].entries.size() > 40) {
    rep.skipped = true;
    rep.notice = "instance exceeds the oracle budget (k <= 3, support <= 40)";
    return rep;
  }
  rep.emd.resize(top + 1);
  for (int t = 0; t <= top; ++t) rep.emd[t] = emd(chain.levels[t]);
  for (int t = 1; t <= top; ++t) {
    if (rep.emd[t - 1] > rep.emd[t] + 1e-9) rep.monotone = false;
  }
  rep.p_norm = chain.WeightedNorm();
  rep.lower_gap = rep.emd[top] - rep.p_norm;
  rep.lower_ok = rep.lower_gap <= 1e-9;
  const double bound = 2.0 * chain.dim * (top + 1);
  rep.upper_ratio = rep.emd[top] > 0.0 ? rep.p_norm / rep.emd[top] : 0.0;
  rep.upper_ok = rep.p_norm <= bound * rep.emd[top] + 1e-9;
  return rep;
}

std::string ChainDumpJson(const ReductionChain& chain) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (int t = chain.top_level; t >= 0; --t) {
    doc.push_back({{"t", t},
                   {"support", chain.levels[t].entries.size()},
                   {"mass", chain.masses[t]},
                   {"weight", chain.weights[t]}});
  }
  return doc.dump(2);
}

}  // namespace gpflow
