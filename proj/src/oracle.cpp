#include "stochround/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "stochround/solution.hpp"

namespace stochround {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SuflOracleResult oracle_sufl(const SuflInstance& inst) {
  const int F = inst.num_facilities();
  const int M = inst.num_scenarios();
  if (F > 12) throw ValidationError("exact search handles at most 12 facilities");
  if (M > 8) throw ValidationError("exact search handles at most 8 scenarios");
  const int masks = 1 << F;

  // closest-open distance per client and facility subset
  std::vector<std::vector<double>> min_dist(inst.num_clients(),
                                            std::vector<double>(masks, kInf));
  for (int j = 0; j < inst.num_clients(); ++j)
    for (int m = 1; m < masks; ++m) {
      int low = m & -m;
      int i = std::countr_zero(static_cast<unsigned>(low));
      min_dist[j][m] = std::min(min_dist[j][m ^ low], inst.c(i, j));
    }

  std::vector<double> open1(masks, 0);
  std::vector<std::vector<double>> open2(M, std::vector<double>(masks, 0));
  std::vector<std::vector<double>> conn(M, std::vector<double>(masks, 0));
  for (int m = 1; m < masks; ++m) {
    int low = m & -m;
    int i = std::countr_zero(static_cast<unsigned>(low));
    open1[m] = open1[m ^ low] + inst.facilities[i].open_stage1;
    for (int a = 0; a < M; ++a)
      open2[a][m] = open2[a][m ^ low] + inst.facilities[i].open_stage2[a];
  }
  for (int a = 0; a < M; ++a)
    for (int m = 0; m < masks; ++m) {
      double s = 0;
      for (int j : inst.scenarios[a].clients) s += inst.clients[j].demand * min_dist[j][m];
      conn[a][m] = s;
    }

  SuflOracleResult out;
  double best = kInf;
  int best1 = 0;
  std::vector<int> best2(M, 0);
  std::vector<int> pick(M, 0);
  for (int s1 = 0; s1 < masks; ++s1) {
    double total = open1[s1];
    for (int a = 0; a < M && total < best; ++a) {
      double inner = kInf;
      for (int s2 = 0; s2 < masks; ++s2) {
        double v = open2[a][s2] + conn[a][s1 | s2];
        if (v < inner) {
          inner = v;
          pick[a] = s2;
        }
      }
      total += inst.scenarios[a].prob * inner;
      out.enumerated += masks;
    }
    if (total < best) {
      best = total;
      best1 = s1;
      best2 = pick;
    }
  }

  out.optimum = best;
  out.stage2_open.resize(M);
  out.scen_cost.assign(M, 0);
  for (int i = 0; i < F; ++i)
    if (best1 >> i & 1) out.stage1_open.push_back(i);
  out.facility_cost = open1[best1];
  for (int a = 0; a < M; ++a) {
    for (int i = 0; i < F; ++i)
      if (best2[a] >> i & 1) out.stage2_open[a].push_back(i);
    double c = conn[a][best1 | best2[a]];
    out.scen_cost[a] = open1[best1] + open2[a][best2[a]] + c;
    out.facility_cost += inst.scenarios[a].prob * open2[a][best2[a]];
    out.connection_cost += inst.scenarios[a].prob * c;
  }
  return out;
}

CipOracleResult oracle_cip(const ScenarioTreeCip& tree) {
  // flatten the variables in node order
  struct Slot {
    int node, var;
    double cost;  // probability-weighted
    int cap;
  };
  std::vector<Slot> slots;
  for (int n = 0; n < static_cast<int>(tree.nodes.size()); ++n) {
    double p = tree.absolute_prob(n);
    for (int v = 0; v < static_cast<int>(tree.nodes[n].vars.size()); ++v)
      slots.push_back({n, v, p * tree.nodes[n].vars[v].cost, 0});
  }
  if (slots.size() > 20) throw ValidationError("exact search handles at most 20 variables");

  // one covering constraint per (leaf, row) with a positive requirement
  const std::vector<int> leaves = tree.leaves();
  struct Constraint {
    std::vector<double> coef;  // per slot
    double need;
  };
  std::vector<Constraint> cons;
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    std::vector<int> path = tree.path_to_root(leaves[l]);
    for (int r = 0; r < tree.rows; ++r) {
      if (tree.b_by_leaf[l][r] <= 0) continue;
      Constraint c;
      c.coef.assign(slots.size(), 0);
      c.need = tree.b_by_leaf[l][r];
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (std::find(path.begin(), path.end(), slots[s].node) != path.end())
          c.coef[s] = tree.nodes[slots[s].node].vars[slots[s].var].column[r];
      cons.push_back(std::move(c));
    }
  }

  // a variable never needs more than what saturates its hungriest row alone
  for (std::size_t s = 0; s < slots.size(); ++s) {
    int cap = 0;
    for (const auto& c : cons)
      if (c.coef[s] > 0)
        cap = std::max(cap, static_cast<int>(std::ceil(c.need / c.coef[s] - 1e-9)));
    slots[s].cap = cap;
  }

  // suffix_max[c][s]: most constraint c can still gain from slots s..end
  std::vector<std::vector<double>> suffix_max(cons.size(),
                                              std::vector<double>(slots.size() + 1, 0));
  for (std::size_t c = 0; c < cons.size(); ++c)
    for (int s = static_cast<int>(slots.size()) - 1; s >= 0; --s)
      suffix_max[c][s] = suffix_max[c][s + 1] + slots[s].cap * cons[c].coef[s];

  // rounded-up fractional point as the starting incumbent
  CipSolution frac = solve_cip(tree);
  std::vector<int> incumbent(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s)
    incumbent[s] = std::min(slots[s].cap,
                            static_cast<int>(std::ceil(frac.x[slots[s].node][slots[s].var] - 1e-9)));
  auto value_of = [&](const std::vector<int>& y) {
    double v = 0;
    for (std::size_t s = 0; s < slots.size(); ++s) v += y[s] * slots[s].cost;
    return v;
  };
  auto feasible = [&](const std::vector<int>& y) {
    for (const auto& c : cons) {
      double got = 0;
      for (std::size_t s = 0; s < slots.size(); ++s) got += y[s] * c.coef[s];
      if (got < c.need - 1e-9) return false;
    }
    return true;
  };
  if (!feasible(incumbent)) {
    for (std::size_t s = 0; s < slots.size(); ++s) incumbent[s] = slots[s].cap;
    if (!feasible(incumbent)) throw InternalError("covering tree cannot be satisfied");
  }
  double best = value_of(incumbent);

  std::vector<int> cur(slots.size(), 0);
  std::vector<double> got(cons.size(), 0);
  CipOracleResult out;

  auto dfs = [&](auto&& self, std::size_t s, double cost) -> void {
    ++out.enumerated;
    if (cost >= best - 1e-12) return;
    for (std::size_t c = 0; c < cons.size(); ++c)
      if (got[c] + suffix_max[c][s] < cons[c].need - 1e-9) return;
    if (s == slots.size()) {
      best = cost;  // feasibility is exactly the pruning test at s == end
      incumbent = cur;
      return;
    }
    for (int v = 0; v <= slots[s].cap; ++v) {
      cur[s] = v;
      for (std::size_t c = 0; c < cons.size(); ++c) got[c] += v * cons[c].coef[s];
      self(self, s + 1, cost + v * slots[s].cost);
      for (std::size_t c = 0; c < cons.size(); ++c) got[c] -= v * cons[c].coef[s];
    }
    cur[s] = 0;
  };
  dfs(dfs, 0, 0.0);

  out.optimum = best;
  out.y.resize(tree.nodes.size());
  for (std::size_t n = 0; n < tree.nodes.size(); ++n)
    out.y[n].assign(tree.nodes[n].vars.size(), 0);
  for (std::size_t s = 0; s < slots.size(); ++s) out.y[slots[s].node][slots[s].var] = incumbent[s];
  if (best < frac.objective - 1e-6)
    throw InternalError("integer optimum fell below the fractional bound");
  return out;
}

}  // namespace stochround
