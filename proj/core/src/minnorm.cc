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

#include "gpflow/minnorm.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <utility>

#include "gpflow/errors.h"

namespace gpflow {

// ---------------------------------------------------------------- NormTag

NormTag NormTag::L1() { return NormTag(NormKind::kL1); }
NormTag NormTag::Linf() { return NormTag(NormKind::kLinf); }
NormTag NormTag::L2() { return NormTag(NormKind::kL2); }

NormTag NormTag::Cost(Vec lengths) {
  NormTag t(NormKind::kCost);
  t.lengths_ = std::make_shared<const Vec>(std::move(lengths));
  return t;
}

NormTag NormTag::Stretch(Vec lengths) {
  NormTag t(NormKind::kStretch);
  t.lengths_ = std::make_shared<const Vec>(std::move(lengths));
  return t;
}

NormTag NormTag::CutFamily(std::vector<CutSet> family) {
  if (family.empty()) throw ContractViolation("CutFamily: empty family");
  for (const CutSet& s : family) {
    if (!(s.boundary_capacity > 0.0)) {
      throw ContractViolation("CutFamily: non-positive boundary capacity");
    }
  }
  NormTag t(NormKind::kCutFamily);
  t.family_ =
      std::make_shared<const std::vector<CutSet>>(std::move(family));
  return t;
}

NormTag NormTag::Preconditioned(LinearMap p) {
  NormTag t(NormKind::kPreconditioned);
  t.map_ = std::make_shared<const LinearMap>(std::move(p));
  return t;
}

double NormTag::Evaluate(std::span<const double> v) const {
  switch (kind_) {
    case NormKind::kL1:
      return L1Norm(v);
    case NormKind::kLinf:
      return LinfNorm(v);
    case NormKind::kL2:
      return L2Norm(v);
    case NormKind::kCost: {
      const Vec& len = *lengths_;
      if (len.size() != v.size()) throw ContractViolation("Cost: size");
      return PairwiseReduce(
          v.size(), [&](std::size_t i) { return std::abs(v[i]) * len[i]; });
    }
    case NormKind::kStretch: {
      const Vec& len = *lengths_;
      if (len.size() != v.size()) throw ContractViolation("Stretch: size");
      double m = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        m = std::max(m, std::abs(v[i]) / len[i]);
      }
      return m;
    }
    case NormKind::kCutFamily: {
      double m = 0.0;
      for (const CutSet& s : *family_) {
        double total = PairwiseReduce(s.members.size(), [&](std::size_t i) {
          int u = s.members[i];
          if (u < 0 || static_cast<std::size_t>(u) >= v.size()) {
            throw ContractViolation("CutFamily: member out of range");
          }
          return v[u];
        });
        m = std::max(m, std::abs(total) / s.boundary_capacity);
      }
      return m;
    }
    case NormKind::kPreconditioned:
      return L1Norm((*map_)(v));
  }
  return 0.0;
}

// --------------------------------------------------------- NormedOperator

struct NormedOperator::State {
  std::once_flag once;
  std::optional<double> opnorm;
};

NormedOperator::NormedOperator(int domain_dim, int codomain_dim, Map apply,
                               Map adjoint, NormTag domain_norm,
                               NormTag codomain_norm,
                               std::optional<double> opnorm)
    : domain_dim_(domain_dim),
      codomain_dim_(codomain_dim),
      apply_(std::move(apply)),
      adjoint_(std::move(adjoint)),
      domain_norm_(std::move(domain_norm)),
      codomain_norm_(std::move(codomain_norm)),
      state_(std::make_shared<State>()) {
  if (domain_dim <= 0 || codomain_dim <= 0) {
    throw ContractViolation("NormedOperator: dimensions must be positive");
  }
  state_->opnorm = opnorm;
}

NormedOperator NormedOperator::Identity(int n, NormTag norm) {
  auto copy = [](std::span<const double> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), out.begin());
  };
  std::optional<double> one = 1.0;
  if (norm.is_seminorm()) one.reset();
  return NormedOperator(n, n, copy, copy, norm, norm, one);
}

NormedOperator NormedOperator::Dense(int rows, int cols, Vec entries,
                                     NormTag domain_norm,
                                     NormTag codomain_norm) {
  if (entries.size() != static_cast<std::size_t>(rows) * cols) {
    throw ContractViolation("Dense: entry count does not match shape");
  }
  auto data = std::make_shared<const Vec>(std::move(entries));
  auto apply = [data, rows, cols](std::span<const double> x,
                                  std::span<double> y) {
    for (int r = 0; r < rows; ++r) {
      const double* row = data->data() + static_cast<std::size_t>(r) * cols;
      y[r] = PairwiseReduce(cols, [&](std::size_t c) { return row[c] * x[c]; });
    }
  };
  auto adjoint = [data, rows, cols](std::span<const double> y,
                                    std::span<double> x) {
    for (int c = 0; c < cols; ++c) {
      x[c] = PairwiseReduce(rows, [&](std::size_t r) {
        return (*data)[r * cols + c] * y[r];
      });
    }
  };
  return NormedOperator(cols, rows, apply, adjoint, std::move(domain_norm),
                        std::move(codomain_norm));
}

Vec NormedOperator::Apply(std::span<const double> x) const {
  Vec out(codomain_dim_);
  ApplyInto(x, out);
  return out;
}

Vec NormedOperator::ApplyAdjoint(std::span<const double> y) const {
  Vec out(domain_dim_);
  ApplyAdjointInto(y, out);
  return out;
}

void NormedOperator::ApplyInto(std::span<const double> x,
                               std::span<double> out) const {
  if (x.size() != static_cast<std::size_t>(domain_dim_) ||
      out.size() != static_cast<std::size_t>(codomain_dim_)) {
    throw ContractViolation("NormedOperator::Apply: dimension mismatch");
  }
  apply_(x, out);
}

void NormedOperator::ApplyAdjointInto(std::span<const double> y,
                                      std::span<double> out) const {
  if (y.size() != static_cast<std::size_t>(codomain_dim_) ||
      out.size() != static_cast<std::size_t>(domain_dim_)) {
    throw ContractViolation("NormedOperator::ApplyAdjoint: dimension mismatch");
  }
  adjoint_(y, out);
}

double NormedOperator::OpNorm() const {
  std::call_once(state_->once, [this] {
    if (state_->opnorm.has_value()) return;
    const NormKind dom = domain_norm_.kind();
    const NormKind cod = codomain_norm_.kind();
    double best = 0.0;
    if (dom == NormKind::kL1 || dom == NormKind::kCost) {
      // The unit ball is the convex hull of +-e_i (scaled by 1/len_i for
      // the cost norm), so the sup is attained at a vertex.
      Vec e(domain_dim_, 0.0), col(codomain_dim_);
      Vec len;
      if (dom == NormKind::kCost) {
        len.resize(domain_dim_);
        for (int i = 0; i < domain_dim_; ++i) {
          e[i] = 1.0;
          len[i] = domain_norm_.Evaluate(e);
          e[i] = 0.0;
        }
      }
      for (int i = 0; i < domain_dim_; ++i) {
        e[i] = 1.0;
        apply_(e, col);
        e[i] = 0.0;
        double v = codomain_norm_.Evaluate(col);
        if (dom == NormKind::kCost) v /= len[i];
        best = std::max(best, v);
      }
    } else if (dom == NormKind::kLinf && cod == NormKind::kLinf) {
      Vec e(codomain_dim_, 0.0), row(domain_dim_);
      for (int r = 0; r < codomain_dim_; ++r) {
        e[r] = 1.0;
        adjoint_(e, row);
        e[r] = 0.0;
        best = std::max(best, L1Norm(row));
      }
    } else {
      throw ConfigurationError(
          "OpNorm: no exact formula for this norm pair; supply it");
    }
    state_->opnorm = best;
  });
  if (!state_->opnorm.has_value()) {
    throw ConfigurationError("OpNorm: unavailable");
  }
  return *state_->opnorm;
}

// ----------------------------------------------------------- ApproxSolver

ApproxSolver::ApproxSolver(std::shared_ptr<const NormedOperator> op,
                           double alpha, double beta, SolveFn solve,
                           double cost_model, std::string name)
    : op_(std::move(op)),
      alpha_(alpha),
      beta_(beta),
      solve_(std::move(solve)),
      cost_model_(cost_model),
      name_(std::move(name)) {
  if (!op_) throw ContractViolation("ApproxSolver: null operator");
  if (!(alpha >= 1.0) || !(beta >= 0.0)) {
    throw ContractViolation("ApproxSolver: need alpha >= 1 and beta >= 0");
  }
}

Vec ApproxSolver::Solve(std::span<const double> b) const {
  if (b.size() != static_cast<std::size_t>(op_->codomain_dim())) {
    throw ContractViolation("ApproxSolver::Solve: dimension mismatch");
  }
  if (IsZero(b)) return Vec(op_->domain_dim(), 0.0);
  Vec x = solve_(b);
  if (x.size() != static_cast<std::size_t>(op_->domain_dim())) {
    throw ContractViolation("ApproxSolver::Solve: solver returned wrong size");
  }
  return x;
}

Vec Residual(const NormedOperator& a, std::span<const double> b,
             std::span<const double> x) {
  if (b.size() != static_cast<std::size_t>(a.codomain_dim()) ||
      x.size() != static_cast<std::size_t>(a.domain_dim())) {
    throw ContractViolation("Residual: dimension mismatch");
  }
  Vec ax = a.Apply(x);
  return Subtract(b, ax);
}

namespace {

void CheckSameOperator(const ApproxSolver& f, const NormedOperator& a) {
  if (!f.op().SameAs(a)) {
    throw ConfigurationError("solver '" + f.name() +
                             "' acts on a different operator");
  }
}

void CheckKappa(double kappa) {
  if (!(kappa >= 1.0)) throw ContractViolation("kappa must be >= 1");
}

}  // namespace

ApproxSolver Compose(const ApproxSolver& f1, const ApproxSolver& f2,
                     const NormedOperator& a, double kappa) {
  CheckSameOperator(f1, a);
  CheckSameOperator(f2, a);
  CheckKappa(kappa);
  const double alpha = f1.alpha() + f2.alpha() * f1.beta() * kappa;
  const double beta = f1.beta() * f2.beta() * kappa;
  auto solve = [f1, f2](std::span<const double> b) {
    Vec x = f1.Solve(b);
    Vec r = Residual(f1.op(), b, x);
    Vec dx = f2.Solve(r);
    Axpy(1.0, dx, x);
    return x;
  };
  return ApproxSolver(f1.op_ptr(), alpha, beta, solve,
                      f1.cost_model() + f2.cost_model(),
                      f2.name() + "*" + f1.name());
}

ApproxSolver Iterate(const ApproxSolver& f, int t, const NormedOperator& a,
                     double kappa) {
  CheckSameOperator(f, a);
  CheckKappa(kappa);
  if (t < 1) throw ContractViolation("Iterate: t must be positive");
  const double rel = f.beta() * kappa;
  if (!(rel < 1.0)) {
    throw ConfigurationError("Iterate: beta * kappa >= 1 diverges");
  }
  const double alpha = f.alpha() / (1.0 - rel);
  const double beta = std::pow(rel, t) / kappa;
  auto solve = [f, t](std::span<const double> b) {
    Vec x = f.Solve(b);
    for (int i = 1; i < t; ++i) {
      Vec r = Residual(f.op(), b, x);
      Vec dx = f.Solve(r);
      Axpy(1.0, dx, x);
    }
    return x;
  };
  return ApproxSolver(f.op_ptr(), alpha, beta, solve, t * f.cost_model(),
                      f.name() + "^" + std::to_string(t));
}

ApproxSolver ChainTerminate(const ApproxSolver& f,
                            const ApproxSolver& terminal,
                            const NormedOperator& a, double kappa) {
  if (terminal.beta() != 0.0) {
    throw ConfigurationError("ChainTerminate: terminal must have beta = 0");
  }
  return Compose(f, terminal, a, kappa);
}

Quality MeasureQuality(const NormedOperator& a, std::span<const double> b,
                       std::span<const double> x, double opt_norm) {
  if (IsZero(b)) return {};
  if (!(opt_norm > 0.0)) {
    throw OracleInconsistency("MeasureQuality: zero optimum for nonzero b");
  }
  Quality q;
  q.alpha_obs = a.domain_norm().Evaluate(x) / opt_norm;
  Vec r = Residual(a, b, x);
  q.beta_obs = a.codomain_norm().Evaluate(r) / (a.OpNorm() * opt_norm);
  return q;
}

ConditionEstimate EstimateKappaTilde(const NormedOperator& a, int trials,
                                     const OptOracle& opt_oracle,
                                     std::uint64_t seed,
                                     std::optional<double> assumed) {
  ConditionEstimate est;
  est.kappa_tilde_lower = 0.0;
  const double norm_a = a.OpNorm();
  auto consider = [&](const Vec& b) {
    double nb = a.codomain_norm().Evaluate(b);
    if (nb <= 0.0) return;
    double ratio = norm_a * opt_oracle(b) / nb;
    if (std::isfinite(ratio) && ratio > est.kappa_tilde_lower) {
      est.kappa_tilde_lower = ratio;
      est.witness = b;
    }
  };
  Vec e(a.domain_dim(), 0.0);
  for (int i = 0; i < a.domain_dim(); ++i) {
    e[i] = 1.0;
    consider(a.Apply(e));
    e[i] = 0.0;
  }
  Vec f(a.codomain_dim(), 0.0);
  for (int i = 0; i < a.codomain_dim(); ++i) {
    f[i] = 1.0;
    consider(f);
    f[i] = 0.0;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vec x(a.domain_dim());
  for (int t = 0; t < trials; ++t) {
    for (double& v : x) v = normal(rng);
    consider(a.Apply(x));
  }
  est.kappa_tilde_lower = std::max(1.0, est.kappa_tilde_lower);
  est.kappa_tilde_assumed =
      std::max(est.kappa_tilde_lower, assumed.value_or(0.0));
  return est;
}

}  // namespace gpflow
