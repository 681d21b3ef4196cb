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

// Norm-generic algebra of approximate minimum-norm solvers.
//
// For a linear map A and a target b in its image, x is an (alpha, beta)
// solution when
//
//   ||x|| <= alpha * ||x_opt(b)||   and   ||Ax - b|| <= beta * ||A|| * ||x_opt||.
//
// Every ApproxSolver carries its declared (alpha, beta). Beta is stored as an
// absolute number, i.e. a schedule written as beta/kappa stores beta/kappa.
// Composition and iteration take the assumed nonlinear condition number
// kappa explicitly and update the declarations accordingly.

#ifndef GPFLOW_MINNORM_H_
#define GPFLOW_MINNORM_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpflow/vector_ops.h"

namespace gpflow {

enum class NormKind {
  kL1,
  kLinf,
  kL2,
  kCost,             // sum_e |v_e| * len_e
  kStretch,          // max_e |v_e| / len_e
  kCutFamily,        // max_S |1_S . v| / cap(boundary S), a semi-norm
  kPreconditioned,   // ||P v||_1 for a fixed linear map P
};

class NormTag {
 public:
  struct CutSet {
    std::vector<int> members;
    double boundary_capacity = 0.0;
  };
  using LinearMap = std::function<Vec(std::span<const double>)>;

  static NormTag L1();
  static NormTag Linf();
  static NormTag L2();
  static NormTag Cost(Vec lengths);
  static NormTag Stretch(Vec lengths);
  static NormTag CutFamily(std::vector<CutSet> family);
  static NormTag Preconditioned(LinearMap p);

  NormKind kind() const { return kind_; }
  bool is_seminorm() const { return kind_ == NormKind::kCutFamily; }
  double Evaluate(std::span<const double> v) const;

 private:
  explicit NormTag(NormKind kind) : kind_(kind) {}

  NormKind kind_;
  std::shared_ptr<const Vec> lengths_;
  std::shared_ptr<const std::vector<CutSet>> family_;
  std::shared_ptr<const LinearMap> map_;
};

// A linear map with declared norms on both sides. Copies share identity, so
// solvers built on a copy are recognised as acting on the same operator.
class NormedOperator {
 public:
  using Map = std::function<void(std::span<const double>, std::span<double>)>;

  // If `opnorm` is not given it is computed on first use from basis vectors
  // when the domain is L1/Cost, or from adjoint basis vectors for
  // Linf -> Linf. Other norm pairs must supply it.
  NormedOperator(int domain_dim, int codomain_dim, Map apply, Map adjoint,
                 NormTag domain_norm, NormTag codomain_norm,
                 std::optional<double> opnorm = std::nullopt);

  static NormedOperator Identity(int n, NormTag norm);
  // Row-major dense matrix.
  static NormedOperator Dense(int rows, int cols, Vec entries,
                              NormTag domain_norm, NormTag codomain_norm);

  int domain_dim() const { return domain_dim_; }
  int codomain_dim() const { return codomain_dim_; }
  const NormTag& domain_norm() const { return domain_norm_; }
  const NormTag& codomain_norm() const { return codomain_norm_; }

  Vec Apply(std::span<const double> x) const;
  Vec ApplyAdjoint(std::span<const double> y) const;
  void ApplyInto(std::span<const double> x, std::span<double> out) const;
  void ApplyAdjointInto(std::span<const double> y, std::span<double> out) const;

  double OpNorm() const;
  bool SameAs(const NormedOperator& other) const {
    return state_ == other.state_;
  }

 private:
  struct State;
  int domain_dim_;
  int codomain_dim_;
  Map apply_;
  Map adjoint_;
  NormTag domain_norm_;
  NormTag codomain_norm_;
  std::shared_ptr<State> state_;
};

// A callable b -> x with a declared (alpha, beta) contract on `op`.
class ApproxSolver {
 public:
  using SolveFn = std::function<Vec(std::span<const double>)>;

  ApproxSolver(std::shared_ptr<const NormedOperator> op, double alpha,
               double beta, SolveFn solve, double cost_model = 0.0,
               std::string name = "");

  // Zero input returns zero without calling the wrapped function.
  Vec Solve(std::span<const double> b) const;

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double cost_model() const { return cost_model_; }
  const std::string& name() const { return name_; }
  const NormedOperator& op() const { return *op_; }
  const std::shared_ptr<const NormedOperator>& op_ptr() const { return op_; }

 private:
  std::shared_ptr<const NormedOperator> op_;
  double alpha_;
  double beta_;
  SolveFn solve_;
  double cost_model_;
  std::string name_;
};

// b - A x.
Vec Residual(const NormedOperator& a, std::span<const double> b,
             std::span<const double> x);

// F2 after F1: x = F1(b), x~ = F2(b - A x), returns x + x~.
// Declared (a1 + a2 * b1 * kappa, b1 * b2 * kappa) in absolute beta units.
ApproxSolver Compose(const ApproxSolver& f1, const ApproxSolver& f2,
                     const NormedOperator& a, double kappa);

// F applied t times by residual recursion. Requires beta * kappa < 1.
// Declared (alpha / (1 - beta * kappa), (beta * kappa)^t / kappa).
ApproxSolver Iterate(const ApproxSolver& f, int t, const NormedOperator& a,
                     double kappa);

// Compose with an exact-feasibility (M, 0) terminal solver.
// Declared (alpha_f + M * beta_f * kappa, 0).
ApproxSolver ChainTerminate(const ApproxSolver& f,
                            const ApproxSolver& terminal,
                            const NormedOperator& a, double kappa);

struct Quality {
  double alpha_obs = 0.0;
  double beta_obs = 0.0;
};

// (||x|| / opt, ||Ax - b|| / (||A|| opt)); (0, 0) for b = 0.
Quality MeasureQuality(const NormedOperator& a, std::span<const double> b,
                       std::span<const double> x, double opt_norm);

struct ConditionEstimate {
  double kappa_tilde_lower = 1.0;
  double kappa_tilde_assumed = 1.0;
  Vec witness;
  // The linear condition number is never computed; kept for completeness.
  std::optional<double> kappa_linear;
};

using OptOracle = std::function<double(std::span<const double>)>;

// Lower bound on the nonlinear condition number from sampled targets: the
// codomain basis vectors, the images of all domain basis vectors and `trials`
// Gaussian combinations of columns. Non-finite oracle values (targets outside
// the range) are ignored. For an onto operator with an l1 codomain the
// supremum is attained at a basis vector, so the bound is exact.
ConditionEstimate EstimateKappaTilde(const NormedOperator& a, int trials,
                                     const OptOracle& opt_oracle,
                                     std::uint64_t seed,
                                     std::optional<double> assumed = {});

}  // namespace gpflow

#endif  // GPFLOW_MINNORM_H_
