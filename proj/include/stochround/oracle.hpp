#pragma once

#include <cstdint>
#include <vector>

#include "stochround/instance.hpp"

namespace stochround {

// Exact optimum by subset enumeration: every stage-I set against, per
// scenario, every recourse set, clients assigned to the closest open site.
// Capped at 12 facilities and 8 scenarios to keep the sweep under seconds.
struct SuflOracleResult {
  double optimum = 0;
  std::vector<int> stage1_open;
  std::vector<std::vector<int>> stage2_open;  // per scenario
  std::vector<double> scen_cost;              // stage1 + stage2[a] + connection[a]
  double facility_cost = 0;                   // expected opening spend
  double connection_cost = 0;
  std::uint64_t enumerated = 0;               // (stage-I, scenario, stage-II) combinations
};

SuflOracleResult oracle_sufl(const SuflInstance& inst);

// Exact integer optimum of the covering tree by depth-first search over the
// flattened variables, seeded with the rounded-up LP point and pruned on
// partial cost and on rows that can no longer be covered.  At most 20
// variables; per-variable caps derived from the right-hand sides.
struct CipOracleResult {
  double optimum = 0;
  std::vector<std::vector<int>> y;  // [node][var]
  std::uint64_t enumerated = 0;     // search nodes visited
};

CipOracleResult oracle_cip(const ScenarioTreeCip& tree);

}  // namespace stochround
