#pragma once

#include <vector>

#include "stochround/decompose.hpp"
#include "stochround/lp_rounding.hpp"

// Internal engine shared by the half-threshold and the per-scenario
// roundings: both carve unit-mass candidate neighborhoods out of the
// saturated copy table, cluster them greedily by radius and open exactly one
// copy per cluster plus independent coins for the leftovers.  They differ
// only in how each pair picks its opening pool.

namespace stochround::detail {

struct CopyArtifacts {
  std::vector<ClusterCandidate> candidates;        // one per pair, pair order
  std::vector<std::vector<int>> candidate_index;   // [scenario][client_pos]
  std::vector<int> cluster_order;
  std::vector<FreeCopy> free_copies;
};

// use_stage1[a][t] decides the pool: stage-I facilities or scenario a's.
// Cuts the saturated copy table while carving the neighborhoods.
CopyArtifacts build_copy_artifacts(const SuflInstance& work, SaturatedSolution& sat,
                                   const std::vector<std::vector<bool>>& use_stage1);

// original is the unsplit instance (true costs and ids); work facilities map
// back as facility / 2.
RoundingTrial run_copy_trial(const SuflInstance& original, const SaturatedSolution& sat,
                             const std::vector<ClusterCandidate>& candidates,
                             const std::vector<std::vector<int>>& candidate_index,
                             const std::vector<int>& cluster_order,
                             const std::vector<FreeCopy>& free_copies, Rng& rng);

}  // namespace stochround::detail
