#include "stochround/primal_dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochround/jms.hpp"

namespace stochround {

namespace {
void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5))
    throw ValidationError("threshold parameter alpha must lie in (0, 1/2]");
}
}  // namespace

double draw_threshold(double alpha, Rng& rng) {
  check_alpha(alpha);
  if (rng.uniform01() < alpha / (1.0 - alpha)) return 0.5;
  return rng.uniform(alpha, 1.0 - alpha);
}

double selection_probability(double r, double alpha) {
  check_alpha(alpha);
  if (r < alpha) return 0.0;
  if (r >= 1.0 - alpha) return 1.0;
  // Uniform density 1/(1-alpha) plus the atom at 1/2.
  double cdf = (r - alpha) / (1.0 - alpha);
  if (r >= 0.5) cdf += alpha / (1.0 - alpha);
  return cdf;
}

double expected_inverse_threshold(double alpha) {
  check_alpha(alpha);
  return (2.0 * alpha + std::log((1.0 - alpha) / alpha)) / (1.0 - alpha);
}

RatioBound evaluate_ratio(double alpha) {
  RatioBound r;
  r.facility = 1.11 * expected_inverse_threshold(alpha);
  r.connection = 1.78 / (1.0 - alpha);
  r.worst = std::max(r.facility, r.connection);
  return r;
}

SelectionSet select_pairs(const DecomposedSolution& dec, double z) {
  SelectionSet sel;
  sel.z = z;
  sel.selected.resize(dec.r1.size());
  for (std::size_t a = 0; a < dec.r1.size(); ++a) {
    sel.selected[a].resize(dec.r1[a].size());
    for (std::size_t t = 0; t < dec.r1[a].size(); ++t)
      sel.selected[a][t] = z <= dec.r1[a][t];
  }
  return sel;
}

PrimalDualOutcome run_primal_dual(const SuflInstance& inst, const FractionalSolution& frac,
                                  double alpha, Rng& rng) {
  const int F = inst.num_facilities();
  const int M = inst.num_scenarios();

  DecomposedSolution dec = decompose(inst, frac);
  PrimalDualOutcome out;
  out.selection = select_pairs(dec, draw_threshold(alpha, rng));

  // Stage-I facility location over the selected pairs: pair (j, A) is a
  // client at j's location weighted by d_j * p_A.
  UflSubinstance stage1;
  stage1.open_cost.resize(F);
  for (int i = 0; i < F; ++i) stage1.open_cost[i] = inst.facilities[i].open_stage1;
  std::vector<std::pair<int, int>> stage1_pairs;  // (scenario, client_pos)
  for (int a = 0; a < M; ++a) {
    for (std::size_t t = 0; t < inst.scenarios[a].clients.size(); ++t) {
      if (!out.selection.selected[a][t]) continue;
      int j = inst.scenarios[a].clients[t];
      stage1.demand.push_back(inst.clients[j].demand * inst.scenarios[a].prob);
      std::vector<double> row(F);
      for (int i = 0; i < F; ++i) row[i] = inst.c(i, j);
      stage1.dist.push_back(std::move(row));
      stage1_pairs.emplace_back(a, static_cast<int>(t));
    }
  }

  std::vector<bool> open1(F, false);
  std::vector<std::vector<int>> stage1_assign(M);
  for (int a = 0; a < M; ++a)
    stage1_assign[a].assign(inst.scenarios[a].clients.size(), -1);
  if (!stage1.demand.empty()) {
    std::vector<int> rep;
    UflSubinstance merged = coalesce_clients(stage1, &rep);
    JmsResult res = jms_solve(merged);
    for (int i : res.open) open1[i] = true;
    out.stage1_cost = res.open_cost;
    out.stage1_open = res.open;
    for (std::size_t k = 0; k < stage1_pairs.size(); ++k) {
      auto [a, t] = stage1_pairs[k];
      stage1_assign[a][t] = res.assign[rep[k]];
    }
  }

  out.stage2_open.resize(M);
  out.stage2_cost.assign(M, 0);
  out.assign.resize(M);
  out.assign_closest.resize(M);
  out.connection.assign(M, 0);
  out.connection_closest.assign(M, 0);
  out.scen_cost.assign(M, 0);
  out.scen_cost_closest.assign(M, 0);

  for (int a = 0; a < M; ++a) {
    const auto& members = inst.scenarios[a].clients;
    out.assign[a].assign(members.size(), -1);
    out.assign_closest[a].assign(members.size(), -1);

    // Recourse facility location over this scenario's unselected clients.
    UflSubinstance stage2;
    stage2.open_cost.resize(F);
    for (int i = 0; i < F; ++i) stage2.open_cost[i] = inst.facilities[i].open_stage2[a];
    std::vector<int> positions;
    for (std::size_t t = 0; t < members.size(); ++t) {
      if (out.selection.selected[a][t]) continue;
      int j = members[t];
      stage2.demand.push_back(inst.clients[j].demand);
      std::vector<double> row(F);
      for (int i = 0; i < F; ++i) row[i] = inst.c(i, j);
      stage2.dist.push_back(std::move(row));
      positions.push_back(static_cast<int>(t));
    }
    std::vector<bool> open2(F, false);
    if (!stage2.demand.empty()) {
      JmsResult res = jms_solve(stage2);
      out.stage2_open[a] = res.open;
      out.stage2_cost[a] = res.open_cost;
      for (int i : res.open) open2[i] = true;
      for (std::size_t k = 0; k < positions.size(); ++k)
        out.assign[a][positions[k]] = res.assign[k];
    }

    for (std::size_t t = 0; t < members.size(); ++t) {
      if (out.selection.selected[a][t]) out.assign[a][t] = stage1_assign[a][t];
      int j = members[t];
      if (out.assign[a][t] < 0) throw InternalError("rounding left a client unassigned");
      out.connection[a] += inst.clients[j].demand * inst.c(out.assign[a][t], j);

      double best = std::numeric_limits<double>::infinity();
      int arg = -1;
      for (int i = 0; i < F; ++i) {
        if (!open1[i] && !open2[i]) continue;
        if (inst.c(i, j) < best) {
          best = inst.c(i, j);
          arg = i;
        }
      }
      if (arg < 0) throw InternalError("no open facility reachable in scenario");
      out.assign_closest[a][t] = arg;
      out.connection_closest[a] += inst.clients[j].demand * best;
    }

    out.scen_cost[a] = out.stage1_cost + out.stage2_cost[a] + out.connection[a];
    out.scen_cost_closest[a] = out.stage1_cost + out.stage2_cost[a] + out.connection_closest[a];
    out.expected_cost += inst.scenarios[a].prob * out.scen_cost[a];
    out.expected_cost_closest += inst.scenarios[a].prob * out.scen_cost_closest[a];
  }
  return out;
}

}  // namespace stochround
