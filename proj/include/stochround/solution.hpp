#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stochround/lp.hpp"
#include "stochround/simplex.hpp"

namespace stochround {

// Fractional two-stage solution with assignment rows normalized to sum to
// exactly 1 and cost breakdowns recomputed against the instance's true
// (unscaled) costs.
struct FractionalSolution {
  double lp_objective = 0;                         // objective of the LP actually solved
  std::vector<double> y;                           // [facility]
  std::vector<std::vector<double>> y_scen;         // [scenario][facility]
  std::vector<std::vector<std::vector<double>>> x; // [scenario][client_pos][facility]

  double facility_cost = 0;                        // F*: stage-I + expected stage-II opening
  double connection_cost = 0;                      // C*: expected connection cost
  double total_cost() const { return facility_cost + connection_cost; }

  std::vector<double> scen_facility;               // F_A = sum_i f_i^I y_i + f_i^A y_{A,i}
  std::vector<double> scen_connection;             // C_A = sum_{j in A} d_j sum_i c_ij x_{A,ij}
  std::vector<double> scen_value;                  // Val_A = F_A + C_A
  std::vector<std::vector<double>> pair_connection;  // C_{(j,A)} = sum_i c_ij x_{A,ij}
};

// Dual values in the cost units of the solve.  v is the pair's total budget;
// per-unit-of-demand values divide by d_j.
struct DualSolution {
  double objective = 0;                            // sum_A p_A sum_j v_{j,A}
  std::vector<std::vector<double>> v;              // [scenario][client_pos]
  std::vector<std::vector<std::vector<double>>> w; // [scenario][client_pos][facility]
  std::vector<double> budget;                      // V_A = sum_{j in A} v_{j,A}
};

struct SolvedSufl {
  FractionalSolution frac;
  DualSolution dual;
};

// Build, solve and extract in one step.  Cost scales multiply the LP
// coefficients; the extracted breakdowns always use true costs.  Throws
// ValidationError when the LP is infeasible (cannot happen for valid
// instances) and InternalError on solver trouble.
SolvedSufl solve_sufl(const SuflInstance& inst, double facility_scale = 1.0,
                      double connection_scale = 1.0);

FractionalSolution extract_fractional(const SuflInstance& inst, const SuflLpLayout& layout,
                                      const SimplexResult& res);
DualSolution extract_dual(const SuflInstance& inst, const SuflLpLayout& layout,
                          const SimplexResult& res);

// Recompute breakdowns and normalize assignment rows; validates feasibility
// of the solution against the instance within 1e-7.
void normalize_solution(const SuflInstance& inst, FractionalSolution& sol);

struct SlacknessViolation {
  int scenario = 0, client = 0, facility = 0;
  double x = 0, c = 0, v = 0;
};

// Every (i, j, A) with x_{A,ij} > 1e-7 whose connection cost exceeds the
// client's per-unit dual value by more than 1e-6.  Empty at an exact
// primal-dual optimum.
std::vector<SlacknessViolation> check_complementary_slackness(const SuflInstance& inst,
                                                              const FractionalSolution& frac,
                                                              const DualSolution& dual);

// Maximum dual-feasibility violation of (v, w) for the given instance, for
// sanity checks: max over constraints of lhs - rhs.
double dual_infeasibility(const SuflInstance& inst, const DualSolution& dual);

// Solution-file round trip: {"objective", "y", "yA", "x", "duals": {"v", "w"}}.
std::string serialize_solution(const SolvedSufl& sol);
SolvedSufl parse_solution(const SuflInstance& inst, const std::string& text);
void save_solution(const SolvedSufl& sol, const std::string& path);
SolvedSufl load_solution(const SuflInstance& inst, const std::string& path);

// Covering-tree LP solve: values per (node, block var) plus the optimum.
struct CipSolution {
  double objective = 0;
  std::vector<std::vector<double>> x;  // [node][var]
};

CipSolution solve_cip(const ScenarioTreeCip& tree);

}  // namespace stochround
