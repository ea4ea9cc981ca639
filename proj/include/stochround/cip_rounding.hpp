#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stochround/instance.hpp"
#include "stochround/rng.hpp"
#include "stochround/solution.hpp"

namespace stochround {

enum class LambdaKind { SetCover, General };

// Inflation-factor calibration for randomized covering rounds.
struct LambdaConfig {
  LambdaKind kind = LambdaKind::SetCover;
  int num_rows = 1;        // n: constraint rows that must all be covered
  double width = 1.0;      // B: smallest right-hand side that reaches 1
  double eps_row = 0;      // per-row failure budget; 0 picks 1/(2n)
  double psi_shift = 16;   // set cover uses ln n + ln ln(n + psi_shift)
};

// Set cover: ln n + ln ln(n + shift).  General: the smallest lambda >= 1
// (binary search to 1e-9) with exp(-lambda*B*(1 - 1/lambda)^2 / 2) <= eps_row,
// the lower-tail failure estimate for one row.
double choose_lambda(const LambdaConfig& cfg);

// One stage's slice of a fractional covering solution.
struct StageBlock {
  int stage = 0;
  std::vector<double> values;                 // x*, >= 0
  std::vector<double> costs;
  std::vector<std::vector<double>> columns;   // per variable, entries in [0,1]
};

// Scale by lambda and round each variable to an adjacent integer preserving
// its mean: y = ceil(lambda x) with the fractional part as probability.
// Decisions are made block by block in the order given.
std::vector<int> independent_round(const std::vector<StageBlock>& blocks, double lambda,
                                   Rng& rng);

// Online rounding of a [0,1] stream: at most one output is 1, marginals never
// exceed the inputs, and the first time the running sum reaches 1 the output
// is forced to 1.  Single-owner; copy State to branch a stream.
class DependentRounder {
 public:
  struct State {
    double sum = 0, comp = 0;   // compensated prefix sum of consumed values
    bool fired = false;
  };

  explicit DependentRounder(std::uint64_t seed) : rng_(seed) {}
  explicit DependentRounder(Rng rng) : rng_(rng) {}

  int feed(double z) { return feed(st_, z, rng_); }
  bool fired() const { return st_.fired; }
  double prefix_sum() const { return st_.sum; }
  const State& state() const { return st_; }
  void restore(const State& st) { st_ = st; }

  // The shared decision rule; kept static so tree traversals can hold one
  // State per covering set while drawing from a single stream.
  static int feed(State& st, double z, Rng& rng);

 private:
  Rng rng_;
  State st_;
};

// Exact output distribution of the rounder on a finite stream, computed
// analytically.  Index bit i of the table is variable i; at most k + 1
// entries are positive (the all-zeros outcome and the singletons).
std::vector<double> exact_distribution(const std::vector<double>& z);  // k <= 20

// A covering tree rounded to integers, with the probability-weighted cost of
// the openings taken.
struct TreeRounding {
  std::vector<std::vector<int>> y;   // [node][var]
  double cost = 0;
};

// Independent rounding of a tree solution at inflation lambda.  Coverage is
// probabilistic; use uncovered_rows to audit a draw.
TreeRounding independent_round_tree(const ScenarioTreeCip& tree, const CipSolution& frac,
                                    double lambda, Rng& rng);

// (leaf position, row) pairs whose covering constraint the rounding missed.
std::vector<std::pair<int, int>> uncovered_rows(const ScenarioTreeCip& tree,
                                                const std::vector<std::vector<int>>& y);

struct BoundedCoverRounding {
  std::vector<std::vector<int>> y;   // [node][var], 0/1
  double cost = 0;
  int degree = 0;                    // b: max sets covering any row
};

// Dependent rounding for covering trees whose variables are 0/1-column
// "sets" aligned across stages and whose rows each meet at most b sets:
// every set feeds min(b * x, 1) to its own rounder down the tree, so each
// row is covered in every draw at cost at most b times fractional.
// Requires aligned var blocks, 0/1 columns, rhs at most 1, and a fractional
// input that covers every row; violations raise ValidationError.
BoundedCoverRounding round_bounded_cover(const ScenarioTreeCip& tree, const CipSolution& frac,
                                         Rng& rng);

}  // namespace stochround
