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

#include "gpflow/driver.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

#include "gpflow/errors.h"
#include "gpflow/minnorm.h"
#include "gpflow/mwsolve.h"
#include "json.hpp"

namespace gpflow {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Runs f, rewrapping library errors other than InfeasibleInput with the
// stage name.
template <class F>
auto RunStage(const std::string& stage, std::vector<StageTiming>& timings,
              F&& f) {
  Stopwatch sw;
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      timings.push_back({stage, sw.Seconds()});
    } else {
      auto result = f();
      timings.push_back({stage, sw.Seconds()});
      return result;
    }
  } catch (const InfeasibleInput&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void CheckConfig(const PipelineConfig& c) {
  if (!(c.epsilon > 0.0 && c.epsilon <= 1.0)) {
    throw ConfigurationError("epsilon must lie in (0, 1]");
  }
  if (c.kappa_assumed && !(*c.kappa_assumed >= 1.0)) {
    throw ConfigurationError("kappa_assumed must be >= 1");
  }
  if (c.levels && (*c.levels < 0 || *c.levels > 40)) {
    throw ConfigurationError("levels must lie in [0, 40]");
  }
  if (c.dim && *c.dim < 1) throw ConfigurationError("dim must be positive");
  if (!(c.delta >= 0.0 && c.delta <= 1.0)) {
    throw ConfigurationError("delta must lie in [0, 1]");
  }
  if (!c.measure_distortion && !c.kappa_assumed) {
    throw ConfigurationError(
        "kappa_assumed is required when distortion is not measured");
  }
}

}  // namespace

DualPotential ExtractDual(const PreconditionerP& p, std::span<const double> y,
                          const LengthGraph& g) {
  DualPotential out;
  out.phi.assign(g.num_vertices(), 0.0);
  if (y.empty() || IsZero(y)) return out;
  Vec phi = p.ApplyAdjoint(y);
  const double base = phi[0];
  for (double& v : phi) v -= base;
  double lip = LipschitzConstant(g, phi);
  if (!(lip > 0.0)) return out;
  for (double& v : phi) v /= lip;
  // Division can leave the constant an ulp above 1; a fixed factor of
  // 1 - 2^-52 may round back to the identity, so the slack doubles.
  double slack = 0x1p-52;
  while ((lip = LipschitzConstant(g, phi)) > 1.0) {
    for (double& v : phi) v *= 1.0 - slack;
    slack *= 2.0;
  }
  out.phi = std::move(phi);
  out.lipschitz = lip;
  return out;
}

GapReport Certify(const LengthGraph& g, std::span<const double> b,
                  std::span<const double> j, std::span<const double> phi) {
  GapReport rep;
  rep.cost = Cost(g, j);
  rep.conservation_residual = LinfNorm(Subtract(Divergence(g, j), b));
  if (rep.conservation_residual > 1e-9 * std::max(1.0, L1Norm(b))) {
    throw ContractViolation("Certify: flow does not route the demands");
  }
  rep.lipschitz = LipschitzConstant(g, phi);
  if (rep.lipschitz > 1.0 + 1e-9) {
    throw ContractViolation("Certify: potential is not 1-Lipschitz");
  }
  rep.dual_value = Dot(phi, b);
  if (rep.dual_value > rep.cost * (1.0 + 1e-9) + 1e-12) {
    throw ContractViolation("Certify: weak duality violated");
  }
  if (rep.dual_value > 0.0) {
    rep.ratio = rep.cost / rep.dual_value;
  } else {
    rep.ratio = rep.cost > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return rep;
}

NormedOperator PreconditionedFlowOperator(
    const LengthGraph& g, std::shared_ptr<const PreconditionerP> p) {
  const int n = g.num_vertices();
  const int m = g.num_edges();
  if (p->cols() != n) {
    throw ContractViolation("PreconditionedFlowOperator: P has " +
                            std::to_string(p->cols()) + " columns for " +
                            std::to_string(n) + " vertices");
  }
  const int rows = p->rows();
  auto len = std::make_shared<const Vec>(g.Lengths());
  auto buf_j = std::make_shared<Vec>(m);
  auto buf_d = std::make_shared<Vec>(n);
  auto apply = [&g, p, len, buf_j, buf_d](std::span<const double> x,
                                          std::span<double> out) {
    Vec& j = *buf_j;
    for (std::size_t e = 0; e < j.size(); ++e) j[e] = x[e] / (*len)[e];
    Vec& d = *buf_d;
    std::fill(d.begin(), d.end(), 0.0);
    for (std::size_t e = 0; e < j.size(); ++e) {
      d[g.edge(static_cast<int>(e)).head] += j[e];
      d[g.edge(static_cast<int>(e)).tail] -= j[e];
    }
    p->ApplyInto(d, out);
  };
  // (D L^-1)* phi = (phi(head) - phi(tail)) / len.
  auto adjoint = [&g, p, len, buf_d](std::span<const double> y,
                                     std::span<double> out) {
    Vec& phi = *buf_d;
    p->ApplyAdjointInto(y, phi);
    for (std::size_t e = 0; e < out.size(); ++e) {
      const Edge& ed = g.edge(static_cast<int>(e));
      out[e] = (phi[ed.head] - phi[ed.tail]) / (*len)[e];
    }
  };
  // ||A'||_1 is the largest column norm || P (e_head - e_tail) ||_1 / len.
  double opnorm = 0.0;
  Vec unit(n, 0.0), col(rows);
  for (int e = 0; e < m; ++e) {
    unit[g.edge(e).head] = 1.0;
    unit[g.edge(e).tail] = -1.0;
    p->ApplyInto(unit, col);
    unit[g.edge(e).head] = unit[g.edge(e).tail] = 0.0;
    opnorm = std::max(opnorm, L1Norm(col) / (*len)[e]);
  }
  if (!(opnorm > 0.0)) {
    throw ContractViolation("PreconditionedFlowOperator: operator is zero");
  }
  return NormedOperator(m, rows, apply, adjoint, NormTag::L1(), NormTag::L1(),
                        opnorm);
}

SolveReport SolveMinCost(const LengthGraph& g, std::span<const double> b,
                         const PipelineConfig& config) {
  CheckConfig(config);
  CheckDemand(g, b);
  const int n = g.num_vertices();
  const int m = g.num_edges();
  SolveReport rep;
  rep.flow.assign(m, 0.0);
  rep.dual.phi.assign(n, 0.0);
  if (n == 1 || IsZero(b)) {
    rep.gap_ratio = 1.0;
    return rep;
  }
  if (config.identity_embedding &&
      config.coordinates.size() != static_cast<std::size_t>(n)) {
    throw ConfigurationError("identity embedding needs one point per vertex");
  }

  // Embedding.
  PointCloud cloud = RunStage("embed", rep.timings, [&] {
    PointCloud c;
    if (config.identity_embedding) {
      c.points = config.coordinates;
      c.dim = static_cast<int>(c.points[0].size());
      rep.bourgain_dim = c.dim;
      return c;
    }
    c = BourgainEmbed(g, config.seed, {config.bourgain_constant});
    rep.bourgain_dim = c.dim;
    if (!config.skip_jl) {
      const int k = config.dim ? std::min(*config.dim, c.dim)
                               : JlTargetDimension(n, c.dim);
      c = JlProject(c, k, config.seed + 1);
    }
    return c;
  });
  rep.dim = cloud.dim;
  if (config.measure_distortion) {
    RunStage("distortion", rep.timings, [&] {
      const std::vector<Vec> d = AllPairsDistances(g);
      rep.total_distortion = MeasureDistortion(d, cloud).distortion;
      rep.bourgain_distortion = rep.total_distortion;
      if (!config.identity_embedding && !config.skip_jl) {
        rep.bourgain_distortion =
            MeasureDistortion(
                d, BourgainEmbed(g, config.seed, {config.bourgain_constant}))
                .distortion;
      }
    });
  }

  // Snapping and preconditioner.
  std::shared_ptr<const PreconditionerP> p;
  RunStage("precondition", rep.timings, [&] {
    const PointCloud norm = Normalize(cloud);
    rep.levels = config.levels ? *config.levels : ChooseLevels(norm);
    const SnapResult snap = SnapToLattice(norm, rep.levels);
    rep.distinct_lattice_points = snap.report.distinct_points;
    rep.snap_cost_bound = SnapCostBound(b, rep.dim, rep.levels);
    p = std::make_shared<const PreconditionerP>(snap.lattice, rep.dim,
                                                 rep.levels);
    rep.p_rows = p->rows();
    rep.p_max_column_nonzeros = p->MaxColumnNonzeros();
    LatticeDemands top;
    top.level = rep.levels;
    top.dim = rep.dim;
    for (int v = 0; v < n; ++v) {
      if (b[v] != 0.0) top.entries[snap.lattice[v]] += b[v];
    }
    std::erase_if(top.entries, [](const auto& kv) { return kv.second == 0.0; });
    rep.chain = BuildChain(top);
  });
  const double lattice_bound = 2.0 * rep.dim * (rep.levels + 1);
  if (config.kappa_assumed) {
    rep.kappa_assumed = *config.kappa_assumed;
  } else if (std::isfinite(rep.total_distortion)) {
    rep.kappa_assumed = std::max(1.0, rep.total_distortion * lattice_bound);
  } else {
    // Coincident embedded vertices: fall back to the spanning-tree bound.
    rep.kappa_assumed = lattice_bound * n;
  }
  const bool measured = config.schedule == Schedule::kMeasured;
  if (config.delta > 0.0) {
    rep.delta = config.delta;
  } else {
    rep.delta = measured ? config.epsilon / 100.0 : 1.0 / (4.0 * n);
  }

  const NormedOperator a = PreconditionedFlowOperator(g, p);
  rep.operator_norm = a.OpNorm();
  const Vec len = g.Lengths();
  const Vec pb = p->Apply(b);

  MinNormResult sol = RunStage("solve_l1", rep.timings, [&] {
    MinNormOptions opts;
    opts.probe_iteration_cap = config.probe_iteration_cap;
    if (!measured) {
      return SolveL1(a, pb, config.epsilon / 2.0, rep.delta,
                     rep.kappa_assumed, opts);
    }
    if (opts.probe_iteration_cap == 0) {
      opts.probe_iteration_cap = kMeasuredProbeCap;
    }
    opts.dynamics = MwDynamics::kOptimistic;
    opts.w_step = 4.0;
    opts.z_step = 1.0;
    StageConfig sc;
    sc.bracket_ratio = 1.0 + config.epsilon / 10.0;
    sc.kappa = rep.kappa_assumed;
    sc.residual_abs = rep.delta * L1Norm(pb);
    // x = L j for the tree routing meets any target with zero residual.
    sc.known_feasible_x = MstRoute(g, b);
    for (int e = 0; e < m; ++e) sc.known_feasible_x[e] *= len[e];
    StageResult st = SolveL1Stage(a, pb, sc, opts);
    MinNormResult out;
    out.x = std::move(st.x);
    out.residual_norm = st.residual_norm;
    out.certified_lower = st.certified_lower;
    out.iterations = st.iterations;
    out.stages = 1;
    out.capped = st.capped;
    out.dual.y = std::move(st.dual_y);
    out.dual.x = out.x;
    out.dual.dual_value = st.dual_value;
    return out;
  });
  rep.schedule = measured ? "measured" : "theoretical";
  rep.iterations = sol.iterations;
  rep.solver_stages = sol.stages;
  rep.capped = sol.capped;
  rep.solver_lower = sol.certified_lower;

  RunStage("terminal", rep.timings, [&] {
    Vec j(m);
    for (int e = 0; e < m; ++e) j[e] = sol.x[e] / len[e];
    rep.l1_cost = Cost(g, j);
    Vec r = Subtract(b, Divergence(g, j));
    // Absorb rounding drift so the residual is an exactly balanced demand.
    r[0] -= Sum(r);
    const Vec jt = MstRoute(g, r);
    rep.terminal_cost = Cost(g, jt);
    Axpy(1.0, jt, j);
    rep.flow = std::move(j);
  });

  RunStage("dual", rep.timings, [&] {
    rep.dual = ExtractDual(*p, sol.dual.y, g);
    const GapReport gap = Certify(g, b, rep.flow, rep.dual.phi);
    rep.cost = gap.cost;
    rep.dual_value = gap.dual_value;
    rep.gap_ratio = gap.ratio;
    rep.conservation_residual = gap.conservation_residual;
  });
  return rep;
}

std::string ReportJson(const SolveReport& r, bool include_timings) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["cost"] = r.cost;
  doc["dual_value"] = r.dual_value;
  doc["gap_ratio"] = r.gap_ratio;
  doc["conservation_residual"] = r.conservation_residual;
  ordered_json flow = ordered_json::array();
  for (std::size_t e = 0; e < r.flow.size(); ++e) {
    flow.push_back({{"edge", e + 1}, {"value", r.flow[e]}});
  }
  doc["flow"] = std::move(flow);
  ordered_json pot = ordered_json::array();
  for (std::size_t v = 0; v < r.dual.phi.size(); ++v) {
    pot.push_back({{"vertex", v + 1}, {"value", r.dual.phi[v]}});
  }
  doc["potential"] = std::move(pot);
  ordered_json stages;
  stages["embed"] = {{"bourgain_dim", r.bourgain_dim},
                     {"dim", r.dim},
                     {"levels", r.levels},
                     {"bourgain_distortion", r.bourgain_distortion},
                     {"total_distortion", r.total_distortion},
                     {"snap_cost_bound", r.snap_cost_bound},
                     {"distinct_lattice_points", r.distinct_lattice_points}};
  stages["precondition"] = {{"rows", r.p_rows},
                            {"max_column_nonzeros", r.p_max_column_nonzeros},
                            {"operator_norm", r.operator_norm},
                            {"kappa_assumed", r.kappa_assumed}};
  stages["solve_l1"] = {{"schedule", r.schedule},
                        {"delta", r.delta},
                        {"iterations", r.iterations},
                        {"stages", r.solver_stages},
                        {"capped", r.capped},
                        {"cost", r.l1_cost},
                        {"certified_lower", r.solver_lower}};
  stages["terminal"] = {{"cost", r.terminal_cost}};
  doc["stages"] = std::move(stages);
  if (include_timings) {
    ordered_json t = ordered_json::object();
    for (const StageTiming& s : r.timings) t[s.stage] = s.seconds;
    doc["timings"] = std::move(t);
  }
  return doc.dump(2);
}

}  // namespace gpflow
