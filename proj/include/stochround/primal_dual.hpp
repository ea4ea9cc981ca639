#pragma once

#include <vector>

#include "stochround/decompose.hpp"
#include "stochround/instance.hpp"
#include "stochround/rng.hpp"
#include "stochround/solution.hpp"

namespace stochround {

// Threshold Z with an atom of alpha/(1-alpha) at 1/2 and the rest uniform on
// [alpha, 1-alpha]; symmetric around 1/2.  alpha in (0, 1/2].
double draw_threshold(double alpha, Rng& rng);

// Exact CDF P(Z <= r) of the threshold mixture.
double selection_probability(double r, double alpha);

// Closed form E[1/Z] = (2*alpha + ln((1-alpha)/alpha)) / (1 - alpha); equals
// E[1/(1-Z)] by symmetry.
double expected_inverse_threshold(double alpha);

// Guarantee factors of the threshold algorithm as a function of alpha:
// expected cost <= facility * F_frac + connection * C_frac.
struct RatioBound {
  double facility = 0;     // 1.11 * E[1/Z]
  double connection = 0;   // 1.78 / (1 - alpha)
  double worst = 0;        // max of the two
};
RatioBound evaluate_ratio(double alpha);

// Which client-scenario pairs are served from stage I for a drawn threshold:
// selected iff Z <= r1 (the stage-I share of the pair's assignment).
struct SelectionSet {
  double z = 0;
  std::vector<std::vector<bool>> selected;   // [scenario][client_pos]
};
SelectionSet select_pairs(const DecomposedSolution& dec, double z);

// One full rounding trial: threshold draw, greedy stage-I solve over the
// selected pairs (demand d_j * p_A, first-stage costs), greedy per-scenario
// recourse solves over the rest, then per-scenario assignment and costs.
struct PrimalDualOutcome {
  SelectionSet selection;
  std::vector<int> stage1_open;
  double stage1_cost = 0;
  std::vector<std::vector<int>> stage2_open;     // [scenario]
  std::vector<double> stage2_cost;               // [scenario]

  // Assignment the analysis prescribes: the greedy-chosen facility.
  std::vector<std::vector<int>> assign;          // [scenario][client_pos]
  std::vector<double> connection;                // [scenario], demand-weighted
  // Post-pass: closest facility open in stage I or the scenario's stage II.
  std::vector<std::vector<int>> assign_closest;
  std::vector<double> connection_closest;

  // stage1_cost + stage2_cost[a] + connection[a]
  std::vector<double> scen_cost;
  std::vector<double> scen_cost_closest;
  double expected_cost = 0;            // sum_A p_A * scen_cost[A]
  double expected_cost_closest = 0;
};

PrimalDualOutcome run_primal_dual(const SuflInstance& inst, const FractionalSolution& frac,
                                  double alpha, Rng& rng);

}  // namespace stochround
