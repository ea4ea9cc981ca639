#pragma once

#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stochround/instance.hpp"

namespace stochround {

enum class RowSense { Le, Ge, Eq };

// Desk-scale LP in row form.  Variables are continuous with bounds
// [lower, upper], defaulting to [0, +inf).
struct LinearProgram {
  bool maximize = false;
  std::vector<double> objective;
  std::vector<double> lower, upper;  // upper uses +inf for "none"
  std::vector<std::string> var_names;
  std::unordered_map<std::string, int> var_index;

  std::vector<std::vector<std::pair<int, double>>> rows;  // sparse (col, coef)
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<std::string> row_names;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_var(const std::string& name, double cost, double lo = 0.0,
              double hi = std::numeric_limits<double>::infinity()) {
    int col = num_vars();
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    var_names.push_back(name);
    var_index.emplace(name, col);
    return col;
  }

  int add_row(const std::string& name, RowSense sense, double b,
              std::vector<std::pair<int, double>> entries) {
    rows.push_back(std::move(entries));
    senses.push_back(sense);
    rhs.push_back(b);
    row_names.push_back(name);
    return num_rows() - 1;
  }
};

// Variable/row layout of the two-stage facility-location LP, kept so
// solutions can be read back out of a flat solution vector.
struct SuflLpLayout {
  std::vector<int> y;                             // [facility]
  std::vector<std::vector<int>> y_scen;           // [scenario][facility]
  std::vector<std::vector<std::vector<int>>> x;   // [scenario][client_pos][facility]
  std::vector<std::vector<int>> assign_row;       // [scenario][client_pos]
  std::vector<std::vector<std::vector<int>>> cap_row;  // same shape as x
};

struct SuflLpBuild {
  LinearProgram lp;
  SuflLpLayout layout;
};

// min sum_i f_i^I y_i + sum_A p_A (sum_i f_i^A y_{A,i} + sum_{j in A} d_j sum_i c_ij x_{A,ij})
// s.t. per (A, j in A):  sum_i x_{A,ij} >= 1
//      per (A, j, i):    x_{A,ij} <= y_i + y_{A,i}
// Cost scales multiply the opening and connection coefficients.
SuflLpBuild build_sufl_primal(const SuflInstance& inst, double facility_scale = 1.0,
                              double connection_scale = 1.0);

struct SuflDualLayout {
  std::vector<std::vector<int>> v;                     // [scenario][client_pos]
  std::vector<std::vector<std::vector<int>>> w;        // [scenario][client_pos][facility]
};

struct SuflDualBuild {
  LinearProgram lp;
  SuflDualLayout layout;
};

// max sum_A p_A sum_{j in A} v_{j,A}
// s.t. v_{j,A} - w_{ij,A} <= d_j c_ij          per (i, A, j in A)
//      sum_A p_A sum_{j in A} w_{ij,A} <= f_i^I   per i
//      sum_{j in A} w_{ij,A} <= f_i^A             per (i, A)
SuflDualBuild build_sufl_dual(const SuflInstance& inst, double facility_scale = 1.0,
                              double connection_scale = 1.0);

struct CipLpLayout {
  std::vector<std::vector<int>> var;  // [node][block var] -> column
};

struct CipLpBuild {
  LinearProgram lp;
  CipLpLayout layout;
};

// LP relaxation of the tree program: one nonnegative variable per
// (node, block var); every leaf's rows constrain the sum along its path.
CipLpBuild build_cip_lp(const ScenarioTreeCip& tree);

// Single-stage facility location (used for the greedy subproblems).
struct UflSubinstance {
  std::vector<double> open_cost;               // per facility
  std::vector<double> demand;                  // per client, > 0
  std::vector<std::vector<double>> dist;       // [client][facility]
  int num_facilities() const { return static_cast<int>(open_cost.size()); }
  int num_clients() const { return static_cast<int>(demand.size()); }
};

struct UflLpBuild {
  LinearProgram lp;
  std::vector<int> y;                          // [facility]
  std::vector<std::vector<int>> x;             // [client][facility]
};

UflLpBuild build_ufl_lp(const UflSubinstance& inst);

}  // namespace stochround
