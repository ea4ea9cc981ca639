#include "stochround/per_scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "copy_rounding.hpp"

namespace stochround {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-9;

double checked_gamma(double gamma) {
  if (!(gamma > 2.0)) throw ValidationError("per-scenario scale must exceed 2");
  return gamma;
}
}  // namespace

double connection_factor(double gamma) {
  checked_gamma(gamma);
  return 1.0 + (2.0 * gamma + 2.0) / (gamma - 2.0) * std::exp(-gamma);
}

double stretch_bound(double gamma) {
  checked_gamma(gamma);
  return 3.0 * gamma / (gamma - 2.0);
}

double equalization_root() {
  double lo = 2.1, hi = 3.0;  // factor is huge near 2 and below gamma at 3
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (connection_factor(mid) - mid > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::vector<FilteredPair>> build_filtered(const SuflInstance& inst,
                                                      const FractionalSolution& frac,
                                                      double gamma) {
  checked_gamma(gamma);
  DecomposedSolution dec = decompose(inst, frac);
  const int F = inst.num_facilities();

  std::vector<std::vector<FilteredPair>> out(inst.num_scenarios());
  for (int a = 0; a < inst.num_scenarios(); ++a) {
    const auto& members = inst.scenarios[a].clients;
    out[a].resize(members.size());
    for (std::size_t t = 0; t < members.size(); ++t) {
      FilteredPair& fp = out[a][t];
      fp.scenario = a;
      fp.client_pos = static_cast<int>(t);
      const int j = members[t];

      auto fill = [&](const std::vector<double>& x, std::vector<FilteredPair::Member>& set,
                      double& radius) {
        std::vector<std::pair<double, int>> order;
        for (int i = 0; i < F; ++i)
          if (gamma * x[i] > 1e-12) order.emplace_back(inst.c(i, j), i);
        std::sort(order.begin(), order.end());
        double cum = 0;
        radius = kInf;
        std::vector<FilteredPair::Member> taken;
        for (auto [d, i] : order) {
          double take = std::min(gamma * x[i], 1.0 - cum);
          if (take <= 1e-15) break;
          taken.push_back({i, take});
          cum += take;
          if (cum >= 1.0) {
            radius = d;
            break;
          }
        }
        if (radius == kInf && cum >= 1.0 - kMassTol && !taken.empty())
          radius = inst.c(taken.back().facility, j);
        if (radius < kInf) set = std::move(taken);
      };
      fill(dec.x1[a][t], fp.stage1, fp.d1);
      fill(dec.x2[a][t], fp.stage2, fp.d2);

      if (fp.stage1.empty() && fp.stage2.empty())
        throw InternalError("pair with no full neighborhood in either stage");
      fp.first_stage = fp.d1 <= fp.d2;
      fp.d = std::min(fp.d1, fp.d2);

      // Markov: mass beyond this radius would exceed the 2/gamma tail room.
      double cap = gamma / (gamma - 2.0) * frac.pair_connection[a][t];
      if (fp.d > cap + 1e-9)
        throw InternalError("filtered radius exceeds its fractional-cost bound");
    }
  }
  return out;
}

PerScenarioPlan::PerScenarioPlan(const SuflInstance& inst, double gamma)
    : instance_(inst),
      solved_(solve_sufl(instance_)),
      split_(split_stage_copies(instance_, solved_.frac)),
      dec_(decompose(split_.instance, split_.solution)),
      gamma_(checked_gamma(gamma)),
      sat_(split_.instance, split_.solution, dec_, gamma_),
      filtered_(build_filtered(instance_, solved_.frac, gamma_)) {
  std::vector<std::vector<bool>> use_stage1(filtered_.size());
  for (std::size_t a = 0; a < filtered_.size(); ++a) {
    use_stage1[a].resize(filtered_[a].size());
    for (std::size_t t = 0; t < filtered_[a].size(); ++t)
      use_stage1[a][t] = filtered_[a][t].first_stage;
  }
  detail::CopyArtifacts art = detail::build_copy_artifacts(split_.instance, sat_, use_stage1);
  candidates_ = std::move(art.candidates);
  candidate_index_ = std::move(art.candidate_index);
  cluster_order_ = std::move(art.cluster_order);
  free_copies_ = std::move(art.free_copies);

  // The carved neighborhoods must land on the filtered radii exactly.
  for (const auto& cand : candidates_) {
    double d = filtered_[cand.scenario][cand.client_pos].d;
    if (std::abs(cand.radius - d) > 1e-9)
      throw InternalError("carved neighborhood radius drifted from the filtered one");
  }
}

std::unique_ptr<PerScenarioPlan> make_per_scenario_plan(const SuflInstance& inst, double gamma) {
  return std::make_unique<PerScenarioPlan>(inst, gamma);
}

RoundingTrial run_per_scenario_trial(const PerScenarioPlan& plan, Rng& rng) {
  return detail::run_copy_trial(plan.instance(), plan.saturated(), plan.candidates(),
                                plan.candidate_table(), plan.cluster_order(),
                                plan.free_copies(), rng);
}

}  // namespace stochround
