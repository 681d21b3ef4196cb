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

#include "gpflow/mwsolve.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace gpflow {

namespace {

constexpr double kBallTolerance = 1e-9;
constexpr double kWidthTolerance = 1e-9;

void DefaultOracle(Ball ball, std::span<const double> v, std::span<double> z) {
  if (ball == Ball::kLinf) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      z[i] = v[i] > 0.0 ? -1.0 : (v[i] < 0.0 ? 1.0 : 0.0);
    }
    return;
  }
  std::fill(z.begin(), z.end(), 0.0);
  switch (ball) {
    case Ball::kLinf:
      return;
    case Ball::kSimplex: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] < v[best]) best = i;
      }
      z[best] = 1.0;
      return;
    }
    case Ball::kL1: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
      }
      if (v[best] != 0.0) z[best] = v[best] > 0.0 ? -1.0 : 1.0;
      return;
    }
  }
}

void CheckInBall(Ball ball, std::span<const double> z) {
  bool ok = true;
  switch (ball) {
    case Ball::kLinf:
      ok = LinfNorm(z) <= 1.0 + kBallTolerance;
      break;
    case Ball::kL1:
      ok = L1Norm(z) <= 1.0 + kBallTolerance;
      break;
    case Ball::kSimplex:
      ok = std::all_of(z.begin(), z.end(),
                       [](double x) { return x >= -kBallTolerance; }) &&
           std::abs(Sum(z) - 1.0) <= kBallTolerance;
      break;
  }
  if (!ok) throw ContractViolation("MW oracle returned a point outside the ball");
}

}  // namespace

Vec SimplexPoint::Signed() const {
  const std::size_t n = weights.size() / 2;
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = weights[i] - weights[n + i];
  return x;
}

std::int64_t MwIterationBound(double width, double eps_additive, int w_dim,
                              double c_constant) {
  if (!(eps_additive > 0.0)) {
    throw ContractViolation("MW: eps_additive must be positive");
  }
  const double r = width / eps_additive;
  const double bound = std::ceil(c_constant * r * r * std::log(w_dim));
  if (!(bound < 9e18)) return std::numeric_limits<std::int64_t>::max();
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(bound));
}

MwResult MwRun(const SaddleProblem& p, double eps_additive,
               const MwOptions& options) {
  if (p.w_dim <= 0 || p.z_dim <= 0) {
    throw ContractViolation("MW: dimensions must be positive");
  }
  if (!p.offset.empty() && p.offset.size() != static_cast<std::size_t>(p.w_dim)) {
    throw ContractViolation("MW: offset size mismatch");
  }
  if (!(p.width >= 0.0)) throw ContractViolation("MW: negative width");
  const std::size_t nw = p.w_dim;
  const std::size_t nz = p.z_dim;
  // The closed-form oracles are trusted; supplied ones are checked.
  auto oracle = [&](std::span<const double> v, std::span<double> z) {
    if (p.oracle) {
      p.oracle(v, z);
      CheckInBall(p.z_ball, z);
    } else {
      DefaultOracle(p.z_ball, v, z);
    }
  };

  MwResult out;
  out.bound = MwIterationBound(p.width, eps_additive, p.w_dim,
                               options.c_constant);
  std::int64_t limit = out.bound;
  if (options.max_iterations > 0) {
    limit = std::min(limit, options.max_iterations);
  }
  // Normalized payoffs g / rho with learning rate eps / (2 rho).
  const double step =
      p.width > 0.0 ? eps_additive / (2.0 * p.width * p.width) : 0.0;
  const bool optimistic = options.dynamics == MwDynamics::kOptimistic;
  if (optimistic && (p.oracle || p.z_ball != Ball::kLinf)) {
    throw ConfigurationError("MW: optimistic dynamics need the default linf oracle");
  }
  const double w_step = p.width > 0.0 ? options.w_step / p.width : 0.0;
  double z_step = 0.0;
  const double width_limit = p.width * (1.0 + kWidthTolerance);

  Vec logits(nw, 0.0), w(nw), v(nz), z(nz), g(nw);
  Vec sum_w(nw, 0.0), sum_v(nz, 0.0), sum_z(nz, 0.0), sum_g(nw, 0.0);
  Vec z_at_avg(nz);
  Vec g_prev(nw, 0.0), v_prev(nz, 0.0);
  double sum_payoff = 0.0;

  MwProgress progress;
  out.reason = limit < out.bound ? MwStop::kCap : MwStop::kBound;
  std::int64_t t = 0;
  while (t < limit) {
    ++t;
    if (optimistic) {
      for (std::size_t i = 0; i < nw; ++i) {
        logits[i] = w_step * (sum_g[i] + g_prev[i]);
      }
    }
    const double mx = *std::max_element(logits.begin(), logits.end());
    for (std::size_t i = 0; i < nw; ++i) w[i] = std::exp(logits[i] - mx);
    const double total = Sum(w);
    for (double& x : w) x /= total;
    if (std::abs(Sum(w) - 1.0) > 1e-12) {
      throw ContractViolation("MW: iterate left the simplex");
    }

    p.apply_mt(w, v);
    if (!optimistic) {
      oracle(v, z);
    } else if (t == 1) {
      const double vmax = LinfNorm(v);
      z_step = vmax > 0.0 ? options.z_step / vmax : 0.0;
      oracle(v, z);
    } else {
      for (std::size_t r = 0; r < nz; ++r) {
        z[r] = std::clamp(-z_step * (sum_v[r] + v_prev[r]), -1.0, 1.0);
      }
    }
    p.apply_m(z, g);
    if (!p.offset.empty()) Axpy(1.0, p.offset, g);
    if (const double gmax = LinfNorm(g); gmax > width_limit) {
      throw WidthViolation("MW: payoff magnitude " + std::to_string(gmax) +
                           " exceeds declared width " + std::to_string(p.width));
    }
    sum_payoff += Dot(w, g);
    Axpy(1.0, w, sum_w);
    Axpy(1.0, v, sum_v);
    Axpy(1.0, z, sum_z);
    Axpy(1.0, g, sum_g);
    if (optimistic) {
      g_prev.swap(g);
      v_prev.assign(v.begin(), v.end());
    } else {
      for (std::size_t i = 0; i < nw; ++i) logits[i] += step * g[i];
    }

    const double inv_t = 1.0 / static_cast<double>(t);
    // Minimizers over a ball are invariant under positive scaling, so the
    // oracle is applied to the running sum instead of the average. Over the
    // linf ball the minimum is -||sum_v||_1 in closed form.
    double lower;
    if (!p.oracle && p.z_ball == Ball::kLinf) {
      lower = -L1Norm(sum_v) * inv_t;
    } else {
      oracle(sum_v, z_at_avg);
      lower = Dot(z_at_avg, sum_v) * inv_t;
    }
    if (!p.offset.empty()) lower += Dot(sum_w, p.offset) * inv_t;
    const double upper =
        *std::max_element(sum_g.begin(), sum_g.end()) * inv_t;
    progress.iteration = t;
    progress.lower = lower;
    progress.upper = upper;
    progress.average_payoff = sum_payoff * inv_t;
    if (options.trace != nullptr) {
      *options.trace << std::setprecision(17) << "{\"iteration\":" << t
                     << ",\"value\":" << progress.average_payoff
                     << ",\"residual\":" << (upper - lower) << "}\n";
    }
    if (upper - lower <= eps_additive) {
      out.reason = MwStop::kGap;
      break;
    }
    if (options.stop && options.stop(progress)) {
      out.reason = MwStop::kPredicate;
      break;
    }
  }

  const double inv_t = 1.0 / static_cast<double>(t);
  out.iterations = t;
  out.w_avg.weights = Scaled(sum_w, inv_t);
  out.z_avg = Scaled(sum_z, inv_t);
  out.lower = progress.lower;
  out.upper = progress.upper;
  out.value = 0.5 * (progress.lower + progress.upper);
  return out;
}

// ------------------------------------------------------------ mu search

MuSearchResult MuSearch(const MuProbe& probe, double lo, double hi,
                        double ratio, double widen, bool hi_feasible) {
  if (!(lo > 0.0) || !(hi >= lo) || !(ratio > 1.0)) {
    throw ContractViolation("MuSearch: need 0 < lo <= hi and ratio > 1");
  }
  MuSearchResult out;
  out.certified_lower = 0.0;
  bool have_feasible = hi_feasible;
  bool widened = false;
  while (!(have_feasible && hi <= lo * ratio)) {
    const double tau = hi <= lo * ratio ? hi : std::sqrt(lo * hi);
    ProbeRecord rec = probe(tau, lo);
    out.trace.push_back(rec);
    out.certified_lower = std::max(out.certified_lower, rec.certified_lower);
    if (rec.outcome == ProbeRecord::Outcome::kFeasible) {
      hi = tau;
      have_feasible = true;
      lo = std::max(lo, rec.certified_lower);
      if (lo >= hi) lo = hi;
      continue;
    }
    lo = std::max({lo, tau, rec.certified_lower});
    if (tau == hi || lo >= hi) {
      if (have_feasible) {
        // A certificate above the accepted point: the candidate is already
        // no larger than the optimum.
        lo = hi;
        break;
      }
      if (widened) {
        throw UnbracketedError(
            "mu search failed to bracket the optimum after widening",
            out.trace);
      }
      widened = true;
      hi = std::max(hi, lo) * widen;
    }
  }
  out.tau_lo = lo;
  out.tau_hi = hi;
  out.mu = 1.0 / hi;
  return out;
}

// ----------------------------------------------------- min-norm solvers

double OpNorm(const NormedOperator& a, InducedNorm p) {
  double best = 0.0;
  if (p == InducedNorm::kOne) {
    Vec e(a.domain_dim(), 0.0), col(a.codomain_dim());
    for (int i = 0; i < a.domain_dim(); ++i) {
      e[i] = 1.0;
      a.ApplyInto(e, col);
      e[i] = 0.0;
      best = std::max(best, L1Norm(col));
    }
  } else {
    Vec e(a.codomain_dim(), 0.0), row(a.domain_dim());
    for (int r = 0; r < a.codomain_dim(); ++r) {
      e[r] = 1.0;
      a.ApplyAdjointInto(e, row);
      e[r] = 0.0;
      best = std::max(best, L1Norm(row));
    }
  }
  return best;
}

namespace {

// Shared bookkeeping for the two stage solvers.
struct StageState {
  double best_dual = 0.0;
  Vec best_y;
  Vec feasible_x;
  Vec feasible_residual;
  double feasible_residual_norm = 0.0;
  std::int64_t iterations = 0;
  bool capped = false;

  void OfferDual(const Vec& y, double scale, double value) {
    if (value > best_dual) {
      best_dual = value;
      best_y = Scaled(y, 1.0 / scale);
    }
  }
};

ProbeRecord::Outcome Classify(bool feasible, double cert, double tau) {
  if (feasible) return ProbeRecord::Outcome::kFeasible;
  if (cert > tau) return ProbeRecord::Outcome::kInfeasible;
  return ProbeRecord::Outcome::kUndecided;
}

StageResult FinishStage(const NormedOperator& a, std::span<const double> b,
                        const MuSearchResult& search, StageState& st) {
  StageResult out;
  out.x = std::move(st.feasible_x);
  out.residual = std::move(st.feasible_residual);
  out.residual_norm = st.feasible_residual_norm;
  out.tau_lo = search.tau_lo;
  out.certified_lower = st.best_dual;
  out.dual_y = std::move(st.best_y);
  out.dual_value = Dot(out.dual_y, b);
  out.iterations = st.iterations;
  out.capped = st.capped;
  out.trace = search.trace;
  (void)a;
  return out;
}

// Installs config.known_feasible_x as the incumbent when it meets the
// initial residual target, lowering *hi to its norm.
bool SeedFeasible(const NormedOperator& a, std::span<const double> b,
                  const StageConfig& config, double norm_a, double lo, bool l1,
                  StageState& st, double* hi) {
  if (config.known_feasible_x.empty()) return false;
  const Vec& x = config.known_feasible_x;
  if (x.size() != static_cast<std::size_t>(a.domain_dim())) {
    throw ContractViolation("known_feasible_x: dimension mismatch");
  }
  const double target = config.residual_abs > 0.0
                            ? config.residual_abs
                            : config.residual_rel * norm_a * lo;
  Vec res = Residual(a, b, x);
  const double rn = l1 ? L1Norm(res) : LinfNorm(res);
  if (rn > target) return false;
  *hi = std::max(lo, l1 ? L1Norm(x) : LinfNorm(x));
  st.feasible_x = x;
  st.feasible_residual = std::move(res);
  st.feasible_residual_norm = rn;
  return true;
}

void CheckKinds(const NormedOperator& a, NormKind kind, const char* who) {
  if (a.domain_norm().kind() != kind || a.codomain_norm().kind() != kind) {
    throw ConfigurationError(std::string(who) + ": operator norms mismatch");
  }
}

}  // namespace

StageResult SolveL1Stage(const NormedOperator& a, std::span<const double> b,
                         const StageConfig& config,
                         const MinNormOptions& options) {
  CheckKinds(a, NormKind::kL1, "SolveL1Stage");
  if (b.size() != static_cast<std::size_t>(a.codomain_dim())) {
    throw ContractViolation("SolveL1Stage: dimension mismatch");
  }
  const int m = a.domain_dim();
  const int rows = a.codomain_dim();
  const double norm_a = a.OpNorm();
  const double nb = L1Norm(b);
  StageState st;
  if (nb == 0.0) {
    StageResult out;
    out.x.assign(m, 0.0);
    out.residual.assign(rows, 0.0);
    out.dual_y.assign(rows, 0.0);
    return out;
  }
  // Trivial certificate y = sign(b): y . b = ||b||_1, ||A* y|| <= ||A||.
  {
    Vec y(rows);
    for (int r = 0; r < rows; ++r) y[r] = b[r] > 0 ? 1.0 : (b[r] < 0 ? -1.0 : 0.0);
    Vec u = a.ApplyAdjoint(y);
    double nu = LinfNorm(u);
    if (nu > 0.0) st.OfferDual(y, nu, nb / nu);
  }

  Vec ax(rows), u(m), xs(m);
  auto probe = [&](double tau, double lo) {
    const double mu = 1.0 / tau;
    const double target = config.residual_abs > 0.0
                              ? config.residual_abs
                              : config.residual_rel * norm_a * lo;
    const double eps_add = target / tau;
    SaddleProblem sp;
    sp.w_dim = 2 * m;
    sp.z_dim = rows;
    sp.z_ball = Ball::kLinf;
    sp.width = norm_a + mu * nb;
    // v = M^T w = mu b - A x with x = w+ - w-.
    sp.apply_mt = [&](std::span<const double> w, std::span<double> v) {
      double total = 0.0;
      for (int i = 0; i < m; ++i) {
        xs[i] = w[i] - w[m + i];
        total += w[i] + w[m + i];
      }
      a.ApplyInto(xs, ax);
      for (int r = 0; r < rows; ++r) v[r] = mu * b[r] * total - ax[r];
    };
    // g_{i+} = mu y.b - (A* y)_i, g_{i-} = mu y.b + (A* y)_i.
    sp.apply_m = [&](std::span<const double> y, std::span<double> g) {
      a.ApplyAdjointInto(y, u);
      const double s = mu * Dot(y, b);
      for (int i = 0; i < m; ++i) {
        g[i] = s - u[i];
        g[m + i] = s + u[i];
      }
    };
    MwOptions mo;
    mo.c_constant = options.c_constant;
    mo.max_iterations = options.probe_iteration_cap;
    mo.trace = options.trace;
    mo.dynamics = options.dynamics;
    mo.w_step = options.w_step;
    mo.z_step = options.z_step;
    mo.stop = [eps_add](const MwProgress& pr) {
      return -pr.lower <= eps_add || pr.upper < 0.0;
    };
    MwResult run = MwRun(sp, eps_add, mo);
    st.iterations += run.iterations;
    if (run.reason == MwStop::kCap) st.capped = true;

    ProbeRecord rec;
    rec.tau = tau;
    rec.iterations = run.iterations;
    Vec x = Scaled(run.w_avg.Signed(), tau);
    Vec res = Residual(a, b, x);
    rec.residual = L1Norm(res);
    // Dual candidate y = -z_avg: opt >= y.b / ||A* y||_inf.
    Vec y = Scaled(run.z_avg, -1.0);
    Vec aty = a.ApplyAdjoint(y);
    const double nu = LinfNorm(aty);
    const double yb = Dot(y, b);
    double cert = 0.0;
    if (nu > 0.0 && yb > 0.0) {
      cert = yb / nu;
      st.OfferDual(y, nu, cert);
    }
    rec.certified_lower = cert;
    const bool feasible = rec.residual <= target;
    rec.outcome = Classify(feasible, cert, tau);
    if (feasible) {
      st.feasible_x = std::move(x);
      st.feasible_residual = std::move(res);
      st.feasible_residual_norm = rec.residual;
    }
    return rec;
  };
  const double lo = nb / norm_a;
  double hi = std::max(config.kappa, 1.0) * lo;
  const bool hi_feasible = SeedFeasible(a, b, config, norm_a, lo, true, st, &hi);
  MuSearchResult search = MuSearch(probe, lo, hi, config.bracket_ratio,
                                   std::max(2.0, config.kappa), hi_feasible);
  return FinishStage(a, b, search, st);
}

StageResult SolveLinfStage(const NormedOperator& a, std::span<const double> b,
                           const StageConfig& config,
                           const MinNormOptions& options) {
  CheckKinds(a, NormKind::kLinf, "SolveLinfStage");
  if (b.size() != static_cast<std::size_t>(a.codomain_dim())) {
    throw ContractViolation("SolveLinfStage: dimension mismatch");
  }
  const int m = a.domain_dim();
  const int rows = a.codomain_dim();
  const double norm_a = a.OpNorm();
  const double nb = LinfNorm(b);
  StageState st;
  if (nb == 0.0) {
    StageResult out;
    out.x.assign(m, 0.0);
    out.residual.assign(rows, 0.0);
    out.dual_y.assign(rows, 0.0);
    return out;
  }
  {
    std::size_t r0 = 0;
    for (std::size_t r = 1; r < b.size(); ++r) {
      if (std::abs(b[r]) > std::abs(b[r0])) r0 = r;
    }
    Vec y(rows, 0.0);
    y[r0] = b[r0] > 0 ? 1.0 : -1.0;
    Vec u = a.ApplyAdjoint(y);
    double nu = L1Norm(u);
    if (nu > 0.0) st.OfferDual(y, nu, nb / nu);
  }

  Vec ax(rows), u(m), ys(rows), offset(2 * rows);
  auto probe = [&](double tau, double lo) {
    const double mu = 1.0 / tau;
    const double target = config.residual_abs > 0.0
                              ? config.residual_abs
                              : config.residual_rel * norm_a * lo;
    const double eps_add = target / tau;
    for (int r = 0; r < rows; ++r) {
      offset[r] = mu * b[r];
      offset[rows + r] = -mu * b[r];
    }
    SaddleProblem sp;
    sp.w_dim = 2 * rows;
    sp.z_dim = m;
    sp.z_ball = Ball::kLinf;
    sp.width = norm_a + mu * nb;
    sp.offset = offset;
    // M x = [-A x; A x], M^T w = -A* (w+ - w-).
    sp.apply_m = [&](std::span<const double> x, std::span<double> g) {
      a.ApplyInto(x, ax);
      for (int r = 0; r < rows; ++r) {
        g[r] = -ax[r];
        g[rows + r] = ax[r];
      }
    };
    sp.apply_mt = [&](std::span<const double> w, std::span<double> v) {
      for (int r = 0; r < rows; ++r) ys[r] = w[r] - w[rows + r];
      a.ApplyAdjointInto(ys, v);
      for (double& x : v) x = -x;
    };
    MwOptions mo;
    mo.c_constant = options.c_constant;
    mo.max_iterations = options.probe_iteration_cap;
    mo.trace = options.trace;
    mo.dynamics = options.dynamics;
    mo.w_step = options.w_step;
    mo.z_step = options.z_step;
    mo.stop = [eps_add](const MwProgress& pr) {
      return pr.upper <= eps_add || pr.lower > 0.0;
    };
    MwResult run = MwRun(sp, eps_add, mo);
    st.iterations += run.iterations;
    if (run.reason == MwStop::kCap) st.capped = true;

    ProbeRecord rec;
    rec.tau = tau;
    rec.iterations = run.iterations;
    Vec x = Scaled(run.z_avg, tau);
    Vec res = Residual(a, b, x);
    rec.residual = LinfNorm(res);
    // Dual candidate y = w+ - w-: opt >= y.b / ||A* y||_1.
    Vec y = run.w_avg.Signed();
    Vec aty = a.ApplyAdjoint(y);
    const double nu = L1Norm(aty);
    const double yb = Dot(y, b);
    double cert = 0.0;
    if (nu > 0.0 && yb > 0.0) {
      cert = yb / nu;
      st.OfferDual(y, nu, cert);
    }
    rec.certified_lower = cert;
    const bool feasible = rec.residual <= target;
    rec.outcome = Classify(feasible, cert, tau);
    if (feasible) {
      st.feasible_x = std::move(x);
      st.feasible_residual = std::move(res);
      st.feasible_residual_norm = rec.residual;
    }
    return rec;
  };
  const double lo = nb / norm_a;
  double hi = std::max(config.kappa, 1.0) * lo;
  const bool hi_feasible = SeedFeasible(a, b, config, norm_a, lo, false, st, &hi);
  MuSearchResult search = MuSearch(probe, lo, hi, config.bracket_ratio,
                                   std::max(2.0, config.kappa), hi_feasible);
  return FinishStage(a, b, search, st);
}

namespace {

using StageFn = StageResult (*)(const NormedOperator&, std::span<const double>,
                                const StageConfig&, const MinNormOptions&);

MinNormResult RunSchedule(StageFn stage, bool l1, const NormedOperator& a,
                          std::span<const double> b, double eps, double delta,
                          double kappa, const MinNormOptions& options) {
  if (!(eps > 0.0 && eps <= 1.0) || !(delta > 0.0 && delta <= 1.0)) {
    throw ContractViolation("SolveL1/SolveLinf: eps, delta must be in (0, 1]");
  }
  if (!(kappa >= 1.0)) throw ContractViolation("kappa_assumed must be >= 1");
  auto norm = [l1](std::span<const double> v) {
    return l1 ? L1Norm(v) : LinfNorm(v);
  };
  auto dual_norm = [l1](std::span<const double> v) {
    return l1 ? LinfNorm(v) : L1Norm(v);
  };
  MinNormResult out;
  if (IsZero(b)) {
    out.x.assign(a.domain_dim(), 0.0);
    out.dual.x = out.x;
    out.dual.y.assign(a.codomain_dim(), 0.0);
    return out;
  }
  const double norm_a = a.OpNorm();
  const double theta = 3.0 * eps / (16.0 * kappa);
  StageConfig base_config;
  base_config.bracket_ratio = 1.0 + eps / 4.0;
  base_config.residual_rel = theta;
  base_config.kappa = kappa;
  StageResult base = stage(a, b, base_config, options);
  out.x = base.x;
  out.iterations = base.iterations;
  out.capped = base.capped;
  out.trace = base.trace;
  out.stages = 1;
  out.certified_lower = base.certified_lower;
  // tau_lo <= opt follows from the MW bound unless a cap bound a probe.
  const double lower = base.capped ? base.certified_lower
                                   : std::max(base.tau_lo, base.certified_lower);
  Vec r = base.residual;
  const int t =
      theta > delta ? static_cast<int>(std::ceil(std::log2(theta / delta))) : 0;
  StageConfig refine_config;
  refine_config.bracket_ratio = 2.0;
  refine_config.residual_rel = 1.0 / (2.0 * kappa);
  refine_config.kappa = kappa;
  for (int i = 0; i < t; ++i) {
    if (norm(r) <= delta * norm_a * lower) break;
    StageResult refine = stage(a, r, refine_config, options);
    Axpy(1.0, refine.x, out.x);
    r = Residual(a, b, out.x);
    out.iterations += refine.iterations;
    out.capped = out.capped || refine.capped;
    out.trace.insert(out.trace.end(), refine.trace.begin(), refine.trace.end());
    ++out.stages;
  }
  out.residual_norm = norm(r);

  PrimalDualPair& pd = out.dual;
  pd.x = out.x;
  pd.y = base.dual_y;
  pd.dual_value = Dot(pd.y, b);
  pd.primal_value = norm(out.x) + dual_norm(pd.y) * out.residual_norm;
  pd.gap = pd.primal_value - pd.dual_value;
  return out;
}

}  // namespace

MinNormResult SolveL1(const NormedOperator& a, std::span<const double> b,
                      double eps, double delta, double kappa_assumed,
                      const MinNormOptions& options) {
  return RunSchedule(&SolveL1Stage, true, a, b, eps, delta, kappa_assumed,
                     options);
}

MinNormResult SolveLinf(const NormedOperator& a, std::span<const double> b,
                        double eps, double delta, double kappa_assumed,
                        const MinNormOptions& options) {
  return RunSchedule(&SolveLinfStage, false, a, b, eps, delta, kappa_assumed,
                     options);
}

}  // namespace gpflow
