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

// Multiplicative-weights saddle-point engine and the (1 + eps, delta)
// minimum-norm solvers built on it.
//
// The engine solves  max_{w in simplex} min_{z in C} w . (M z + c)  where C is
// a unit simplex, l1 ball or linf ball. The w-player runs multiplicative
// weights on payoffs normalized by the width rho; the z-player best-responds
// through a support oracle. Both averages are kept so that every run carries
// a lower and an upper bound on the game value.

#ifndef GPFLOW_MWSOLVE_H_
#define GPFLOW_MWSOLVE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "gpflow/errors.h"
#include "gpflow/minnorm.h"
#include "gpflow/vector_ops.h"

namespace gpflow {

enum class Ball { kSimplex, kL1, kLinf };

struct SaddleProblem {
  int w_dim = 0;
  int z_dim = 0;
  // g = M z, size w_dim.
  std::function<void(std::span<const double>, std::span<double>)> apply_m;
  // v = M^T w, size z_dim.
  std::function<void(std::span<const double>, std::span<double>)> apply_mt;
  // Constant term c; empty means zero.
  Vec offset;
  Ball z_ball = Ball::kLinf;
  // Optional support oracle: given v, writes a minimizer of z . v over the
  // ball. Defaults to the closed-form minimizer for `z_ball`.
  std::function<void(std::span<const double>, std::span<double>)> oracle;
  // Bound on |w_i-th payoff| for every z in the ball.
  double width = 0.0;
};

struct SimplexPoint {
  Vec weights;
  // Signed view w+ - w- of a point on the 2n-simplex.
  Vec Signed() const;
};

struct MwProgress {
  std::int64_t iteration = 0;
  double lower = 0.0;           // min_z w_avg . (M z + c)
  double upper = 0.0;           // max_i (M z_avg + c)_i
  double average_payoff = 0.0;  // mean of w_t . (M z_t + c)
};

// kBestResponse is the textbook scheme: the w-player runs multiplicative
// weights and the z-player answers through the oracle. kOptimistic lets both
// players use the previous payoff as a prediction (optimistic hedge for w,
// lazily projected optimistic gradient for z); it needs the linf ball and
// the default oracle. The certified bounds are the same for both.
enum class MwDynamics { kBestResponse, kOptimistic };

struct MwOptions {
  double c_constant = 4.0;
  MwDynamics dynamics = MwDynamics::kBestResponse;
  // Optimistic step sizes, relative to 1 / width and 1 / max|M^T w|.
  double w_step = 1.0;
  double z_step = 1.0;
  // Hard cap below the a-priori bound; 0 means no cap.
  std::int64_t max_iterations = 0;
  // Checked after every iteration; returning true stops the run.
  std::function<bool(const MwProgress&)> stop;
  // Optional JSONL trace: {"iteration","value","residual"} per iteration,
  // where value is the average payoff and residual is upper - lower.
  std::ostream* trace = nullptr;
};

enum class MwStop { kGap, kBound, kCap, kPredicate };

struct MwResult {
  SimplexPoint w_avg;
  Vec z_avg;
  double value = 0.0;  // midpoint of [lower, upper]
  double lower = 0.0;
  double upper = 0.0;
  std::int64_t iterations = 0;
  std::int64_t bound = 0;
  MwStop reason = MwStop::kBound;
};

// ceil(C * rho^2 * eps^-2 * ln(w_dim)), at least 1.
std::int64_t MwIterationBound(double width, double eps_additive, int w_dim,
                              double c_constant = 4.0);

MwResult MwRun(const SaddleProblem& problem, double eps_additive,
               const MwOptions& options = {});

// ------------------------------------------------------------ mu search

struct ProbeRecord {
  enum class Outcome { kFeasible, kInfeasible, kUndecided };
  double tau = 0.0;
  Outcome outcome = Outcome::kUndecided;
  std::int64_t iterations = 0;
  double residual = 0.0;          // residual of the probe's candidate
  double certified_lower = 0.0;   // dual bound on the optimum, 0 if none
};

class UnbracketedError : public Error {
 public:
  UnbracketedError(const std::string& what, std::vector<ProbeRecord> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<ProbeRecord>& trace() const { return trace_; }

 private:
  std::vector<ProbeRecord> trace_;
};

// A probe at objective estimate tau (mu = 1 / tau), given the current lower
// end of the bracket. Feasible means a candidate of norm <= tau meeting the
// residual target was found.
using MuProbe = std::function<ProbeRecord(double tau, double lo)>;

struct MuSearchResult {
  double tau_lo = 0.0;
  double tau_hi = 0.0;
  double mu = 0.0;  // 1 / tau_hi, the scale of the accepted probe
  double certified_lower = 0.0;
  std::vector<ProbeRecord> trace;
};

// Geometric bisection on tau over [lo, hi] until a feasible probe exists and
// hi / lo <= ratio. Infeasible probes raise lo to max(tau, certified bound).
// If the bracket collapses without a feasible probe, hi is multiplied by
// `widen` once; a second collapse throws UnbracketedError.
// With hi_feasible the upper end is known to be attained and is never
// probed.
MuSearchResult MuSearch(const MuProbe& probe, double lo, double hi,
                        double ratio, double widen, bool hi_feasible = false);

// ----------------------------------------------------- min-norm solvers

enum class InducedNorm { kOne, kInf };

// Induced norm of an operator given only apply/adjoint: kOne is the max
// column l1 sum, kInf the max row l1 sum. Computed from basis vectors.
double OpNorm(const NormedOperator& a, InducedNorm p);

struct PrimalDualPair {
  Vec x;
  Vec y;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
};

struct MinNormOptions {
  double c_constant = 4.0;
  // Per-probe cap on MW iterations below the a-priori bound; 0 = none.
  // When a cap binds the result is flagged and carries no a-priori claim.
  std::int64_t probe_iteration_cap = 0;
  std::ostream* trace = nullptr;
  MwDynamics dynamics = MwDynamics::kBestResponse;
  double w_step = 1.0;
  double z_step = 1.0;
};

// One residual-recursion stage: mu search to `bracket_ratio` with probes
// whose residual target is residual_rel * ||A|| * (current lower end), or
// residual_abs when set.
struct StageConfig {
  double bracket_ratio = 2.0;
  double residual_rel = 0.5;
  double kappa = 1.0;
  // When positive, replaces residual_rel * ||A|| * lo as the probe target.
  double residual_abs = 0.0;
  // Optional candidate already meeting the residual target. Its norm becomes
  // the upper end of the bracket and it is returned if no probe improves it.
  Vec known_feasible_x;
};

struct StageResult {
  Vec x;
  Vec residual;
  double residual_norm = 0.0;
  double tau_lo = 0.0;           // bracket lower end (<= opt)
  double certified_lower = 0.0;  // a-posteriori dual bound (<= opt)
  Vec dual_y;                    // certificate with ||A* y|| <= 1
  double dual_value = 0.0;
  std::int64_t iterations = 0;
  bool capped = false;
  std::vector<ProbeRecord> trace;
};

StageResult SolveL1Stage(const NormedOperator& a, std::span<const double> b,
                         const StageConfig& config,
                         const MinNormOptions& options = {});
StageResult SolveLinfStage(const NormedOperator& a, std::span<const double> b,
                           const StageConfig& config,
                           const MinNormOptions& options = {});

struct MinNormResult {
  Vec x;
  PrimalDualPair dual;
  double residual_norm = 0.0;
  double certified_lower = 0.0;
  std::int64_t iterations = 0;
  int stages = 0;
  bool capped = false;
  std::vector<ProbeRecord> trace;
};

// Schedule: base stage at bracket 1 + eps/4 and residual target
// 3 eps / (16 kappa), then up to t refinement stages of (2, 1/(2 kappa)),
// stopping early once the measured residual is within delta * ||A|| times a
// certified lower bound on the optimum.
MinNormResult SolveL1(const NormedOperator& a, std::span<const double> b,
                      double eps, double delta, double kappa_assumed,
                      const MinNormOptions& options = {});
MinNormResult SolveLinf(const NormedOperator& a, std::span<const double> b,
                        double eps, double delta, double kappa_assumed,
                        const MinNormOptions& options = {});

}  // namespace gpflow

#endif  // GPFLOW_MWSOLVE_H_
