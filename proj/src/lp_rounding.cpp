#include "stochround/lp_rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "copy_rounding.hpp"

namespace stochround {

namespace {
constexpr double kMassTol = 1e-9;
}

std::vector<std::vector<bool>> threshold_select_half(const DecomposedSolution& dec) {
  std::vector<std::vector<bool>> sel(dec.r1.size());
  for (std::size_t a = 0; a < dec.r1.size(); ++a) {
    sel[a].resize(dec.r1[a].size());
    for (std::size_t t = 0; t < dec.r1[a].size(); ++t) sel[a][t] = dec.r1[a][t] >= 0.5;
  }
  return sel;
}

namespace detail {

CopyArtifacts build_copy_artifacts(const SuflInstance& work, SaturatedSolution& sat,
                                   const std::vector<std::vector<bool>>& use_stage1) {
  CopyArtifacts art;
  const int M = work.num_scenarios();
  art.candidate_index.resize(M);
  for (int a = 0; a < M; ++a) {
    const auto& members = work.scenarios[a].clients;
    art.candidate_index[a].assign(members.size(), -1);
    for (std::size_t t = 0; t < members.size(); ++t) {
      ClusterCandidate cand;
      cand.scenario = a;
      cand.client_pos = static_cast<int>(t);
      cand.pool = use_stage1[a][t] ? -1 : a;
      const std::vector<int>& sfs =
          cand.pool < 0 ? sat.stage1_facilities() : sat.scenario_facilities(a);

      std::vector<std::pair<double, int>> order;  // (distance, sf)
      for (int sf : sfs)
        if (sat.served(a, static_cast<int>(t), sf) > 1e-12)
          order.emplace_back(sat.distance(a, static_cast<int>(t), sf), sf);
      std::sort(order.begin(), order.end());

      double cum = 0;
      for (auto [d, sf] : order) {
        double mass = sat.served(a, static_cast<int>(t), sf);
        double take = std::min(mass, 1.0 - cum);
        if (take <= 1e-15) break;
        cand.spans.push_back({sf, take});
        cand.radius = d;
        cum += take;
        if (cum >= 1.0) break;
      }
      if (cum < 1.0 - kMassTol)
        throw InternalError("candidate neighborhood mass " + std::to_string(cum) +
                            " below one unit");
      for (const auto& sp : cand.spans) sat.cut(sp.sf, sp.upto);
      art.candidate_index[a][t] = static_cast<int>(art.candidates.size());
      art.candidates.push_back(std::move(cand));
    }
  }

  // Greedy clustering: smallest radius first, each stage facility owned by at
  // most one cluster.  Sharing a facility means overlapping prefixes, and
  // pools never mix stage facilities, so one owner table covers them all.
  std::vector<int> order(art.candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int u, int v) {
    const ClusterCandidate& a = art.candidates[u];
    const ClusterCandidate& b = art.candidates[v];
    if (a.radius != b.radius) return a.radius < b.radius;
    if (a.scenario != b.scenario) return a.scenario < b.scenario;
    return a.client_pos < b.client_pos;
  });
  std::vector<int> owner(sat.num_stage_facilities(), -1);
  for (int idx : order) {
    ClusterCandidate& cand = art.candidates[idx];
    int blocker = -1;
    for (const auto& sp : cand.spans)
      if (owner[sp.sf] >= 0) {
        blocker = owner[sp.sf];
        break;
      }
    if (blocker >= 0) {
      cand.blocked_by = blocker;
      // metric detour via the shared facility and the blocking center
      cand.guarantee = cand.radius + 2.0 * art.candidates[blocker].radius;
      continue;
    }
    cand.clustered = true;
    cand.guarantee = cand.radius;
    art.cluster_order.push_back(idx);
    for (const auto& sp : cand.spans) owner[sp.sf] = idx;
  }

  // Copies not consumed by any cluster open independently.
  for (int sf = 0; sf < sat.num_stage_facilities(); ++sf) {
    double owned_upto = 0;
    if (owner[sf] >= 0)
      for (const auto& sp : art.candidates[owner[sf]].spans)
        if (sp.sf == sf) owned_upto = sp.upto;
    for (const auto& copy : sat.copies(sf))
      if (copy.end > owned_upto + 1e-12) art.free_copies.push_back({sf, copy.begin, copy.end});
  }
  return art;
}

RoundingTrial run_copy_trial(const SuflInstance& original, const SaturatedSolution& sat,
                             const std::vector<ClusterCandidate>& candidates,
                             const std::vector<std::vector<int>>& candidate_index,
                             const std::vector<int>& cluster_order,
                             const std::vector<FreeCopy>& free_copies, Rng& rng) {
  const int M = original.num_scenarios();

  RoundingTrial out;
  out.stage2_cost.assign(M, 0);
  out.stage2_cost_per_copy.assign(M, 0);
  out.assign.resize(M);
  out.pair_distance.resize(M);
  out.connection.assign(M, 0);
  out.scen_cost.assign(M, 0);
  out.scen_cost_per_copy.assign(M, 0);

  std::vector<bool> sf_open(sat.num_stage_facilities(), false);
  auto pay_copy = [&](int sf) {
    const StageFacility& f = sat.stage_facility(sf);
    if (f.scenario < 0)
      out.stage1_cost_per_copy += f.open_cost;
    else
      out.stage2_cost_per_copy[f.scenario] += f.open_cost;
    sf_open[sf] = true;
  };

  // Exactly one copy per cluster, weighted by copy size.
  for (int idx : cluster_order) {
    const ClusterCandidate& cand = candidates[idx];
    std::vector<int> sfs;
    std::vector<double> weights;
    for (const auto& sp : cand.spans)
      for (const auto& copy : sat.copies(sp.sf))
        if (copy.end <= sp.upto + 1e-12) {
          sfs.push_back(sp.sf);
          weights.push_back(copy.size());
        }
    pay_copy(sfs[static_cast<std::size_t>(rng.categorical(weights))]);
  }
  for (const auto& fc : free_copies)
    if (rng.bernoulli(fc.end - fc.begin)) pay_copy(fc.sf);

  // Settle opened facilities once per stage role.
  std::vector<int> open1;                 // original ids
  std::vector<std::vector<int>> open2(M);
  for (int sf = 0; sf < sat.num_stage_facilities(); ++sf) {
    if (!sf_open[sf]) continue;
    const StageFacility& f = sat.stage_facility(sf);
    const int orig = f.facility / 2;      // split places roles at 2i, 2i+1
    if (f.scenario < 0) {
      out.stage1_cost += f.open_cost;
      open1.push_back(orig);
    } else {
      out.stage2_cost[f.scenario] += f.open_cost;
      open2[f.scenario].push_back(orig);
    }
  }
  auto tidy = [](std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  tidy(open1);
  for (auto& v : open2) tidy(v);
  out.stage1_open = open1;
  out.stage2_open = open2;

  for (int a = 0; a < M; ++a) {
    const auto& members = original.scenarios[a].clients;
    out.assign[a].assign(members.size(), -1);
    out.pair_distance[a].assign(members.size(), 0);
    for (std::size_t t = 0; t < members.size(); ++t) {
      const int j = members[t];
      double best = std::numeric_limits<double>::infinity();
      int arg = -1;
      for (int i : open1)
        if (original.c(i, j) < best) {
          best = original.c(i, j);
          arg = i;
        }
      for (int i : open2[a])
        if (original.c(i, j) < best) {
          best = original.c(i, j);
          arg = i;
        }
      if (arg < 0) throw InternalError("rounding trial left a client without a facility");
      const ClusterCandidate& cand = candidates[candidate_index[a][t]];
      if (best > cand.guarantee + 1e-9)
        throw InternalError("connection exceeded its cluster distance guarantee");
      out.assign[a][t] = arg;
      out.pair_distance[a][t] = best;
      out.connection[a] += original.clients[j].demand * best;
    }
    out.scen_cost[a] = out.stage1_cost + out.stage2_cost[a] + out.connection[a];
    out.scen_cost_per_copy[a] =
        out.stage1_cost_per_copy + out.stage2_cost_per_copy[a] + out.connection[a];
    out.expected_cost += original.scenarios[a].prob * out.scen_cost[a];
    out.expected_cost_per_copy += original.scenarios[a].prob * out.scen_cost_per_copy[a];
  }
  return out;
}

}  // namespace detail

LpRoundingPlan::LpRoundingPlan(const SuflInstance& inst, double facility_scale,
                               double connection_scale, double gamma)
    : instance_(inst),
      solved_(solve_sufl(instance_, facility_scale, connection_scale)),
      split_(split_stage_copies(instance_, solved_.frac)),
      dec_(decompose(split_.instance, split_.solution)),
      gamma_(gamma),
      sat_(split_.instance, split_.solution, dec_, gamma_) {
  if (!(gamma_ >= 2.0)) throw ValidationError("rounding scale must be >= 2");
  selected_ = threshold_select_half(dec_);
  detail::CopyArtifacts art = detail::build_copy_artifacts(split_.instance, sat_, selected_);
  candidates_ = std::move(art.candidates);
  candidate_index_ = std::move(art.candidate_index);
  cluster_order_ = std::move(art.cluster_order);
  free_copies_ = std::move(art.free_copies);
}

std::unique_ptr<LpRoundingPlan> make_lp_rounding_plan(const SuflInstance& inst,
                                                      double facility_scale,
                                                      double connection_scale, double gamma) {
  return std::make_unique<LpRoundingPlan>(inst, facility_scale, connection_scale, gamma);
}

std::unique_ptr<LpRoundingPlan> make_scaled_plan(const SuflInstance& inst) {
  return std::make_unique<LpRoundingPlan>(inst, kScaledFacilityFactor, kScaledConnectionFactor,
                                          2.0);
}

RoundingTrial run_rounding_trial(const LpRoundingPlan& plan, Rng& rng) {
  return detail::run_copy_trial(plan.instance(), plan.saturated(), plan.candidates(),
                                plan.candidate_table(), plan.cluster_order(),
                                plan.free_copies(), rng);
}

BestOfTwoTrial run_best_of_two_trial(const LpRoundingPlan& plan,
                                     const FractionalSolution& plain_frac, Rng& rng,
                                     bool coin_mode) {
  BestOfTwoTrial out;
  if (coin_mode) {
    out.used_scaled = rng.bernoulli(kBestOfTwoCoin);
    if (out.used_scaled) {
      RoundingTrial t = run_rounding_trial(plan, rng);
      out.scaled_cost = t.expected_cost;
      out.threshold_cost = std::numeric_limits<double>::quiet_NaN();
      out.cost = out.scaled_cost;
      out.scen_cost = std::move(t.scen_cost);
    } else {
      PrimalDualOutcome t = run_primal_dual(plan.instance(), plain_frac, 0.37, rng);
      out.threshold_cost = t.expected_cost;
      out.scaled_cost = std::numeric_limits<double>::quiet_NaN();
      out.cost = out.threshold_cost;
      out.scen_cost = std::move(t.scen_cost);
    }
    return out;
  }
  RoundingTrial scaled = run_rounding_trial(plan, rng);
  PrimalDualOutcome thresh = run_primal_dual(plan.instance(), plain_frac, 0.37, rng);
  out.scaled_cost = scaled.expected_cost;
  out.threshold_cost = thresh.expected_cost;
  out.used_scaled = out.scaled_cost <= out.threshold_cost;
  out.cost = std::min(out.scaled_cost, out.threshold_cost);
  out.scen_cost = out.used_scaled ? std::move(scaled.scen_cost) : std::move(thresh.scen_cost);
  return out;
}

std::vector<ScenarioBoundLine> per_scenario_bound_check(const FractionalSolution& frac,
                                                        const DualSolution& dual,
                                                        const std::vector<double>& mean_cost,
                                                        const std::vector<double>& stderr_cost) {
  const double e2 = std::exp(-2.0);
  std::vector<ScenarioBoundLine> lines;
  for (std::size_t a = 0; a < mean_cost.size(); ++a) {
    ScenarioBoundLine ln;
    ln.scenario = static_cast<int>(a);
    ln.mean = mean_cost[a];
    ln.stderr_ = stderr_cost[a];
    ln.bound = 3.0 * e2 * dual.budget[a] + (1.0 - e2) * frac.scen_connection[a] +
               2.0 * frac.scen_facility[a];
    ln.ok = ln.mean <= ln.bound + 3.0 * ln.stderr_;
    lines.push_back(ln);
  }
  return lines;
}

}  // namespace stochround
