#pragma once

#include <vector>

#include "stochround/lp.hpp"

namespace stochround {

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0;
  std::vector<double> x;         // structural variables only
  // One multiplier per original row.  For a minimization problem, Ge rows
  // carry nonnegative duals and Le rows nonpositive ones; signs flip for
  // maximization so that Le rows of a max problem are nonnegative.
  std::vector<double> row_dual;
  // Final basis in standard-form column ids (structural j < n, slack of row
  // r is n + r); lets an exact rational re-solve reproduce the vertex.
  std::vector<int> basis;
  int iterations = 0;
  int phase1_iterations = 0;
};

struct SimplexOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  // Dantzig pricing with an automatic fallback to Bland's rule after this
  // many consecutive degenerate pivots; Bland alone is the anti-cycling
  // guarantee, Dantzig just gets there faster.
  int degenerate_switch = 30;
  int max_iterations = 500000;
  int refactor_every = 100;
};

SimplexResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace stochround
