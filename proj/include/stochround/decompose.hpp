#pragma once

#include <vector>

#include "stochround/instance.hpp"
#include "stochround/solution.hpp"

namespace stochround {

// Stage split of the assignment variables: x = x1 + x2 with x1 proportional
// to the stage-I opening and x2 to the recourse opening.
struct DecomposedSolution {
  std::vector<std::vector<std::vector<double>>> x1, x2;  // [scenario][client_pos][facility]
  std::vector<std::vector<double>> r1, r2;               // row sums per pair
};

DecomposedSolution decompose(const SuflInstance& inst, const FractionalSolution& sol);

// Normal form where no facility carries both stage-I and stage-II opening
// mass: facility i becomes 2i (stage-I role) and 2i+1 (recourse role),
// co-located. Costs and objective are preserved.
struct StageCopySplit {
  SuflInstance instance;
  FractionalSolution solution;
};
StageCopySplit split_stage_copies(const SuflInstance& inst, const FractionalSolution& sol);

// A facility paired with the stage it is opened in; scenario -1 means stage I.
struct StageFacility {
  int facility = 0;
  int scenario = -1;
  double total = 0;      // scaled opening mass
  double open_cost = 0;  // true cost of opening at that stage
};

// The solution scaled by gamma with every stage facility split into copies of
// mass <= 1 such that each copy serves a given client either with its whole
// mass or not at all.  A client's service at a stage facility is the prefix
// [0, served) of that facility's mass interval; copy boundaries always
// include every distinct served value, so the whole-or-nothing property holds
// by construction.  cut() refines the copy table without disturbing any
// previously taken prefix.
class SaturatedSolution {
 public:
  SaturatedSolution(const SuflInstance& inst, const FractionalSolution& sol,
                    const DecomposedSolution& dec, double gamma);

  double gamma() const { return gamma_; }
  const SuflInstance& instance() const { return *inst_; }

  int num_stage_facilities() const { return static_cast<int>(facilities_.size()); }
  const StageFacility& stage_facility(int sf) const { return facilities_[sf]; }
  const std::vector<int>& stage1_facilities() const { return stage1_; }
  const std::vector<int>& scenario_facilities(int a) const { return per_scenario_[a]; }

  // Scaled mass of pair (scenario a, client position t) served by sf.
  double served(int a, int t, int sf) const;
  // Distance from sf's underlying facility to the pair's client.
  double distance(int a, int t, int sf) const;

  void cut(int sf, double at);

  // Copy boundaries of sf: ascending, final entry = total mass.
  const std::vector<double>& boundaries(int sf) const { return cuts_[sf]; }

  struct Copy {
    int sf = 0;
    double begin = 0, end = 0;
    double size() const { return end - begin; }
  };
  std::vector<Copy> copies(int sf) const;
  int num_copies(int sf) const { return static_cast<int>(cuts_[sf].size()); }

 private:
  const SuflInstance* inst_;
  double gamma_;
  std::vector<StageFacility> facilities_;
  std::vector<int> stage1_;
  std::vector<std::vector<int>> per_scenario_;
  std::vector<std::vector<double>> cuts_;               // per sf
  std::vector<std::vector<std::vector<double>>> served_;  // [scenario][client_pos][sf]
};

SaturatedSolution split_to_saturation(const SuflInstance& inst, const FractionalSolution& sol,
                                      const DecomposedSolution& dec, double gamma);

}  // namespace stochround
