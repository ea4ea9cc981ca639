#pragma once

#include <memory>
#include <vector>

#include "stochround/decompose.hpp"
#include "stochround/instance.hpp"
#include "stochround/lp_rounding.hpp"
#include "stochround/rng.hpp"
#include "stochround/solution.hpp"

namespace stochround {

// Scale-gamma rounding whose guarantee holds inside every scenario at once:
// expected cost in scenario A stays within gamma times the fractional value
// of A, with no dual quantities involved.  gamma must exceed 2; the default
// is the published choice.
inline constexpr double kPerScenarioGamma = 2.4957;

// Factor on the fractional connection cost: 1 + ((2g + 2) / (g - 2)) e^{-g}.
double connection_factor(double gamma);
// Deterministic per-client distance stretch: 3g / (g - 2).
double stretch_bound(double gamma);
// Where gamma == connection_factor(gamma); bisection to 1e-12.  Sits near
// 2.425, noticeably below the published default -- reports show both.
double equalization_root();

// A pair's filtered neighborhoods: per stage, the nearest facilities whose
// scaled assignment mass reaches one unit (empty when the whole stage holds
// less).  d1/d2 are the neighborhood radii, d = min picks the stage the pair
// is clustered on; first stage wins ties.
struct FilteredPair {
  int scenario = 0;
  int client_pos = 0;
  struct Member {
    int facility = 0;
    double mass = 0;
  };
  std::vector<Member> stage1, stage2;  // masses sum to 1 when non-empty
  double d1 = 0, d2 = 0;               // infinity when the stage set is empty
  double d = 0;
  bool first_stage = false;
};

// Builds every pair's neighborhoods and audits the radius bound
// d <= gamma / (gamma - 2) * C_pair before any coin is flipped.
std::vector<std::vector<FilteredPair>> build_filtered(const SuflInstance& inst,
                                                      const FractionalSolution& frac,
                                                      double gamma);

// Same copy-cluster machinery as LpRoundingPlan, but each pair picks the
// stage with the smaller filtered radius instead of the half threshold, and
// every candidate's distance guarantee feeds off those radii.
class PerScenarioPlan {
 public:
  PerScenarioPlan(const SuflInstance& inst, double gamma);
  PerScenarioPlan(const PerScenarioPlan&) = delete;
  PerScenarioPlan& operator=(const PerScenarioPlan&) = delete;

  const SuflInstance& instance() const { return instance_; }
  const FractionalSolution& fractional() const { return solved_.frac; }
  double gamma() const { return gamma_; }
  const std::vector<std::vector<FilteredPair>>& filtered() const { return filtered_; }
  const SaturatedSolution& saturated() const { return sat_; }
  const std::vector<ClusterCandidate>& candidates() const { return candidates_; }
  int candidate_index(int scenario, int client_pos) const {
    return candidate_index_[scenario][client_pos];
  }
  const std::vector<std::vector<int>>& candidate_table() const { return candidate_index_; }
  const std::vector<int>& cluster_order() const { return cluster_order_; }
  const std::vector<FreeCopy>& free_copies() const { return free_copies_; }

 private:
  SuflInstance instance_;
  SolvedSufl solved_;
  StageCopySplit split_;
  DecomposedSolution dec_;
  double gamma_;
  SaturatedSolution sat_;
  std::vector<std::vector<FilteredPair>> filtered_;
  std::vector<ClusterCandidate> candidates_;
  std::vector<std::vector<int>> candidate_index_;
  std::vector<int> cluster_order_;
  std::vector<FreeCopy> free_copies_;
};

std::unique_ptr<PerScenarioPlan> make_per_scenario_plan(const SuflInstance& inst,
                                                        double gamma = kPerScenarioGamma);

// One outcome; clients connect to the closest open site of their scenario.
// Realized distances are audited against each candidate's guarantee, which
// stays within stretch_bound(gamma) times the pair's fractional connection
// cost by the filtering bound.
RoundingTrial run_per_scenario_trial(const PerScenarioPlan& plan, Rng& rng);

}  // namespace stochround
