#include "stochround/decompose.hpp"

#include <algorithm>
#include <cmath>

#include "stochround/common.hpp"

namespace stochround {

namespace {
constexpr double kTol = 1e-12;
}

DecomposedSolution decompose(const SuflInstance& inst, const FractionalSolution& sol) {
  const int F = inst.num_facilities();
  const int S = inst.num_scenarios();
  DecomposedSolution dec;
  dec.x1.resize(S);
  dec.x2.resize(S);
  dec.r1.resize(S);
  dec.r2.resize(S);
  for (int a = 0; a < S; ++a) {
    const std::size_t T = sol.x[a].size();
    dec.x1[a].assign(T, std::vector<double>(F, 0.0));
    dec.x2[a].assign(T, std::vector<double>(F, 0.0));
    dec.r1[a].assign(T, 0.0);
    dec.r2[a].assign(T, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      for (int i = 0; i < F; ++i) {
        const double x = sol.x[a][t][i];
        if (x <= kTol) continue;
        const double opened = sol.y[i] + sol.y_scen[a][i];
        if (opened <= kTol)
          throw ValidationError("client assigned to facility " + std::to_string(i) +
                                " with no opening mass in scenario " + std::to_string(a));
        const double share1 = x * (sol.y[i] / opened);
        dec.x1[a][t][i] = share1;
        dec.x2[a][t][i] = x - share1;
        dec.r1[a][t] += share1;
        dec.r2[a][t] += x - share1;
      }
    }
  }
  return dec;
}

StageCopySplit split_stage_copies(const SuflInstance& inst, const FractionalSolution& sol) {
  const int F = inst.num_facilities();
  const int S = inst.num_scenarios();
  const int D = inst.num_clients();
  DecomposedSolution dec = decompose(inst, sol);

  StageCopySplit out;
  SuflInstance& ni = out.instance;
  ni.clients = inst.clients;
  ni.scenarios = inst.scenarios;
  ni.facilities.resize(2 * F);
  for (int i = 0; i < F; ++i) {
    ni.facilities[2 * i] = inst.facilities[i];
    ni.facilities[2 * i].id = inst.facilities[i].id + "#1";
    ni.facilities[2 * i + 1] = inst.facilities[i];
    ni.facilities[2 * i + 1].id = inst.facilities[i].id + "#2";
  }
  const int NP = 2 * F + D;
  ni.dist.assign(NP, std::vector<double>(NP, 0.0));
  auto src = [&](int p) { return p < 2 * F ? p / 2 : F + (p - 2 * F); };
  for (int p = 0; p < NP; ++p)
    for (int q = 0; q < NP; ++q)
      ni.dist[p][q] = inst.dist[src(p)][src(q)];
  for (int p = 0; p < NP; ++p) ni.dist[p][p] = 0.0;

  FractionalSolution& ns = out.solution;
  ns.lp_objective = sol.lp_objective;
  ns.y.assign(2 * F, 0.0);
  for (int i = 0; i < F; ++i) ns.y[2 * i] = sol.y[i];
  ns.y_scen.assign(S, std::vector<double>(2 * F, 0.0));
  ns.x.resize(S);
  for (int a = 0; a < S; ++a) {
    for (int i = 0; i < F; ++i) ns.y_scen[a][2 * i + 1] = sol.y_scen[a][i];
    const std::size_t T = sol.x[a].size();
    ns.x[a].assign(T, std::vector<double>(2 * F, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
      for (int i = 0; i < F; ++i) {
        ns.x[a][t][2 * i] = dec.x1[a][t][i];
        ns.x[a][t][2 * i + 1] = dec.x2[a][t][i];
      }
    }
  }
  normalize_solution(ni, ns);
  return out;
}

SaturatedSolution::SaturatedSolution(const SuflInstance& inst, const FractionalSolution& sol,
                                     const DecomposedSolution& dec, double gamma)
    : inst_(&inst), gamma_(gamma) {
  if (gamma < 1.0) throw ValidationError("scale must be >= 1");
  const int F = inst.num_facilities();
  const int S = inst.num_scenarios();

  std::vector<int> stage1_index(F, -1);
  for (int i = 0; i < F; ++i) {
    const double total = gamma * sol.y[i];
    if (total <= kTol) continue;
    stage1_index[i] = static_cast<int>(facilities_.size());
    stage1_.push_back(stage1_index[i]);
    facilities_.push_back({i, -1, total, inst.facilities[i].open_stage1});
  }
  per_scenario_.resize(S);
  std::vector<std::vector<int>> scen_index(S, std::vector<int>(F, -1));
  for (int a = 0; a < S; ++a) {
    for (int i = 0; i < F; ++i) {
      const double total = gamma * sol.y_scen[a][i];
      if (total <= kTol) continue;
      scen_index[a][i] = static_cast<int>(facilities_.size());
      per_scenario_[a].push_back(scen_index[a][i]);
      facilities_.push_back({i, a, total, inst.facilities[i].open_stage2[a]});
    }
  }

  const int NS = num_stage_facilities();
  served_.resize(S);
  for (int a = 0; a < S; ++a) {
    const std::size_t T = sol.x[a].size();
    served_[a].assign(T, std::vector<double>(NS, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
      for (int i = 0; i < F; ++i) {
        const double m1 = gamma * dec.x1[a][t][i];
        if (m1 > kTol) {
          const int sf = stage1_index[i];
          served_[a][t][sf] = std::min(m1, facilities_[sf].total);
        }
        const double m2 = gamma * dec.x2[a][t][i];
        if (m2 > kTol) {
          const int sf = scen_index[a][i];
          served_[a][t][sf] = std::min(m2, facilities_[sf].total);
        }
      }
    }
  }

  // Initial boundaries: every served value plus unit caps.
  cuts_.resize(NS);
  for (int sf = 0; sf < NS; ++sf) cuts_[sf].push_back(facilities_[sf].total);
  for (int a = 0; a < S; ++a)
    for (const auto& row : served_[a])
      for (int sf = 0; sf < NS; ++sf)
        if (row[sf] > kTol) cut(sf, row[sf]);
  for (int sf = 0; sf < NS; ++sf)
    for (double b = 1.0; b < facilities_[sf].total - kTol; b += 1.0) cut(sf, b);
}

double SaturatedSolution::served(int a, int t, int sf) const { return served_[a][t][sf]; }

double SaturatedSolution::distance(int a, int t, int sf) const {
  return inst_->c(facilities_[sf].facility, inst_->scenarios[a].clients[t]);
}

void SaturatedSolution::cut(int sf, double at) {
  auto& cs = cuts_[sf];
  if (at <= kTol || at >= facilities_[sf].total - kTol) return;
  auto it = std::lower_bound(cs.begin(), cs.end(), at - kTol);
  if (it != cs.end() && std::abs(*it - at) <= kTol) return;
  cs.insert(it, at);
}

std::vector<SaturatedSolution::Copy> SaturatedSolution::copies(int sf) const {
  std::vector<Copy> out;
  double prev = 0;
  for (double b : cuts_[sf]) {
    out.push_back({sf, prev, b});
    prev = b;
  }
  return out;
}

SaturatedSolution split_to_saturation(const SuflInstance& inst, const FractionalSolution& sol,
                                      const DecomposedSolution& dec, double gamma) {
  return SaturatedSolution(inst, sol, dec, gamma);
}

}  // namespace stochround
