#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stochround/instance.hpp"

namespace stochround {

// Knobs for the algorithms evaluate() can run.  Unused fields are ignored.
struct EvaluateParams {
  double alpha = 0.2485;  // pd: threshold shape
  double gamma = 2.4957;  // per-scenario: inflation
  bool strict = false;    // per-scenario: force gamma = 5 and assert the
                          // per-trial factor-5 stretch on every connection
  double lambda = 0;      // independent: inflation; <= 0 calibrates from the tree
  bool with_oracle = false;  // attach the exact optimum and check the sandwich
};

struct ScenarioStats {
  double mean = 0;
  double se = 0;    // standard error of the mean
  double ci99 = 0;  // half-width, 2.576 * se
};

// One checked guarantee.  The direction is in the label; ok is authoritative.
struct BoundLine {
  std::string label;
  double bound = 0;     // numeric right-hand side
  double observed = 0;  // what the data produced
  double margin = 0;    // statistical slack granted (usually 3 standard errors)
  bool ok = false;
};

struct TrialReport {
  std::string schema = "stochround-report/1";
  std::string algorithm;
  std::uint64_t seed = 0;
  int trials = 0;

  // Algorithm constants worth reading back (alpha, gamma, lambda, factors...).
  std::vector<std::pair<std::string, double>> info;

  double lp_value = 0;
  double lp_facility = 0;    // facility-location runs only
  double lp_connection = 0;  // facility-location runs only

  std::vector<ScenarioStats> per_scenario;  // facility location: one per scenario
  ScenarioStats overall;
  double min_trial_cost = 0;
  double max_trial_cost = 0;

  std::optional<double> oracle_optimum;
  std::vector<BoundLine> bounds;

  // Independent covering rounds: draws that missed a row (redrawn) and the
  // total number of draws taken across all trials.
  std::int64_t coverage_failures = 0;
  std::int64_t coverage_draws = 0;

  bool all_ok() const;
};

// Monte Carlo evaluation: T >= 100 trials, per-trial rngs split off the master
// seed by trial index, aggregation in trial order so reports never depend on
// the thread schedule.  Facility-location algorithms: "pd", "lp", "alg1",
// "alg3", "per-scenario".  Covering trees: "independent", "dependent".
TrialReport evaluate(const SuflInstance& inst, const std::string& algo,
                     const EvaluateParams& params, int trials, std::uint64_t seed);
TrialReport evaluate(const ScenarioTreeCip& tree, const std::string& algo,
                     const EvaluateParams& params, int trials, std::uint64_t seed);
TrialReport evaluate(const LoadedInstance& loaded, const std::string& algo,
                     const EvaluateParams& params, int trials, std::uint64_t seed);

// Worker count for the trial loop: STOCHROUND_THREADS when set (>= 1), else
// the hardware count, never more than one thread per trial.
int thread_budget(int trials);

}  // namespace stochround
