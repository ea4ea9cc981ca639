#pragma once

#include <memory>
#include <vector>

#include "stochround/decompose.hpp"
#include "stochround/instance.hpp"
#include "stochround/primal_dual.hpp"
#include "stochround/rng.hpp"
#include "stochround/solution.hpp"

namespace stochround {

// Pairs whose assignment is at least half stage-I; they get clustered on the
// first-stage facilities, everyone else on their scenario's recourse ones.
std::vector<std::vector<bool>> threshold_select_half(const DecomposedSolution& dec);

// A pair's candidate neighborhood: the cheapest-by-distance prefix of its
// serving facility copies holding exactly one unit of scaled opening mass.
// Spans always start at mass 0 of their stage facility, so two candidates
// conflict exactly when they share one.
struct ClusterCandidate {
  int scenario = 0;
  int client_pos = 0;
  int pool = -1;                 // -1: stage-I facilities, else that scenario's
  struct Span {
    int sf = 0;                  // stage facility index in the saturated view
    double upto = 0;             // consumes copies in [0, upto)
  };
  std::vector<Span> spans;
  double radius = 0;             // max member distance to the center client
  bool clustered = false;
  int blocked_by = -1;           // earlier candidate that owns a shared facility
  double guarantee = 0;          // realized distance cap: radius, or via the blocker
};

// Stage facility copies no cluster owns; each opens with probability end - begin.
struct FreeCopy {
  int sf = 0;
  double begin = 0, end = 0;
};

// Everything fixed before the coin flips: scaled LP solution, stage-split
// saturated copies, candidate neighborhoods, greedy clusters.  Not movable;
// the saturated view points into its own split instance.
class LpRoundingPlan {
 public:
  LpRoundingPlan(const SuflInstance& inst, double facility_scale, double connection_scale,
                 double gamma);
  LpRoundingPlan(const LpRoundingPlan&) = delete;
  LpRoundingPlan& operator=(const LpRoundingPlan&) = delete;

  const SuflInstance& instance() const { return instance_; }
  const FractionalSolution& fractional() const { return solved_.frac; }
  const DualSolution& dual() const { return solved_.dual; }
  double gamma() const { return gamma_; }
  const SaturatedSolution& saturated() const { return sat_; }
  const std::vector<std::vector<bool>>& selected() const { return selected_; }
  const std::vector<ClusterCandidate>& candidates() const { return candidates_; }
  int candidate_index(int scenario, int client_pos) const {
    return candidate_index_[scenario][client_pos];
  }
  const std::vector<std::vector<int>>& candidate_table() const { return candidate_index_; }
  const std::vector<FreeCopy>& free_copies() const { return free_copies_; }
  const std::vector<int>& cluster_order() const { return cluster_order_; }

 private:
  SuflInstance instance_;
  SolvedSufl solved_;
  StageCopySplit split_;
  DecomposedSolution dec_;
  double gamma_;
  SaturatedSolution sat_;
  std::vector<std::vector<bool>> selected_;
  std::vector<ClusterCandidate> candidates_;        // one per pair, pair order
  std::vector<std::vector<int>> candidate_index_;   // [scenario][client_pos]
  std::vector<int> cluster_order_;                  // clustered candidates, greedy order
  std::vector<FreeCopy> free_copies_;
};

std::unique_ptr<LpRoundingPlan> make_lp_rounding_plan(const SuflInstance& inst,
                                                      double facility_scale = 1.0,
                                                      double connection_scale = 1.0,
                                                      double gamma = 2.0);

// 2.4061 / 1.2707 cost pre-scaling ahead of the gamma = 2 rounding.
inline constexpr double kScaledFacilityFactor = 2.4061;
inline constexpr double kScaledConnectionFactor = 1.2707;
std::unique_ptr<LpRoundingPlan> make_scaled_plan(const SuflInstance& inst);

// One random outcome of the plan.  Stage-I openings are drawn once and shared
// by all scenarios; every cluster opens exactly one facility copy, free
// copies flip their own coins; clients connect to the closest open facility.
// Costs come in two flavors: each opened stage facility paid once (real
// solution) and per opened copy (the quantity the expectation argument
// tracks).  Every connection is checked against the three-hop radius bound.
struct RoundingTrial {
  std::vector<int> stage1_open;                    // original facility ids
  std::vector<std::vector<int>> stage2_open;       // per scenario
  double stage1_cost = 0;
  double stage1_cost_per_copy = 0;
  std::vector<double> stage2_cost, stage2_cost_per_copy;
  std::vector<std::vector<int>> assign;            // [scenario][client_pos]
  std::vector<std::vector<double>> pair_distance;  // same shape
  std::vector<double> connection;                  // demand-weighted
  std::vector<double> scen_cost;                   // stage1 + stage2[a] + connection[a]
  std::vector<double> scen_cost_per_copy;
  double expected_cost = 0;
  double expected_cost_per_copy = 0;
};

RoundingTrial run_rounding_trial(const LpRoundingPlan& plan, Rng& rng);

// Best-of-two: the gamma = 2 rounding of the cost-scaled LP against the
// threshold algorithm at alpha = 0.37 on the plain LP.
inline constexpr double kBestOfTwoBound = 2.2975;
inline constexpr double kBestOfTwoCoin = 0.3396;

struct BestOfTwoTrial {
  double scaled_cost = 0;     // cost-scaled LP rounding outcome
  double threshold_cost = 0;  // alpha = 0.37 outcome (NaN in coin mode if unused)
  double cost = 0;            // min, or the coin pick
  bool used_scaled = false;
  std::vector<double> scen_cost;  // breakdown of the branch `cost` came from
};

// plan must be the cost-scaled plan; plain_frac the unscaled LP solution.
BestOfTwoTrial run_best_of_two_trial(const LpRoundingPlan& plan,
                                     const FractionalSolution& plain_frac, Rng& rng,
                                     bool coin_mode = false);

// Per-scenario cost-bound lines: mean COST(A) against
// 3e^{-2} V_A + (1 - e^{-2}) C_A + 2 F_A, slack 3 standard errors.
struct ScenarioBoundLine {
  int scenario = 0;
  double mean = 0, stderr_ = 0, bound = 0;
  bool ok = false;
};
std::vector<ScenarioBoundLine> per_scenario_bound_check(const FractionalSolution& frac,
                                                        const DualSolution& dual,
                                                        const std::vector<double>& mean_cost,
                                                        const std::vector<double>& stderr_cost);

}  // namespace stochround
