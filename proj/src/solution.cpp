#include "stochround/solution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stochround/common.hpp"
#include "stochround/json_util.hpp"

namespace stochround {

namespace {

constexpr double kFeasTol = 1e-6;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

std::vector<double> parse_number_array(const json& arr, const std::string& field, std::size_t want) {
  if (!arr.is_array() || arr.size() != want)
    throw ParseError("field '" + field + "': expected an array of " + std::to_string(want) +
                     " numbers");
  std::vector<double> out(want);
  for (std::size_t i = 0; i < want; ++i) out[i] = json_number(arr[i], field);
  return out;
}

}  // namespace

FractionalSolution extract_fractional(const SuflInstance& inst, const SuflLpLayout& layout,
                                      const SimplexResult& res) {
  const int F = inst.num_facilities();
  const int S = inst.num_scenarios();
  FractionalSolution sol;
  sol.lp_objective = res.objective;
  sol.y.resize(F);
  for (int i = 0; i < F; ++i) sol.y[i] = res.x[layout.y[i]];
  sol.y_scen.resize(S);
  sol.x.resize(S);
  for (int a = 0; a < S; ++a) {
    sol.y_scen[a].resize(F);
    for (int i = 0; i < F; ++i) sol.y_scen[a][i] = res.x[layout.y_scen[a][i]];
    const int T = static_cast<int>(inst.scenarios[a].clients.size());
    sol.x[a].resize(T);
    for (int t = 0; t < T; ++t) {
      sol.x[a][t].resize(F);
      for (int i = 0; i < F; ++i) sol.x[a][t][i] = res.x[layout.x[a][t][i]];
    }
  }
  normalize_solution(inst, sol);
  return sol;
}

void normalize_solution(const SuflInstance& inst, FractionalSolution& sol) {
  const int F = inst.num_facilities();
  const int S = inst.num_scenarios();
  for (double& v : sol.y) v = std::max(v, 0.0);
  for (auto& row : sol.y_scen)
    for (double& v : row) v = std::max(v, 0.0);

  for (int a = 0; a < S; ++a) {
    for (std::size_t t = 0; t < sol.x[a].size(); ++t) {
      auto& row = sol.x[a][t];
      double sum = 0;
      for (double& v : row) {
        v = std::max(v, 0.0);
        sum += v;
      }
      if (sum < 1.0 - kFeasTol)
        throw ValidationError("assignment row for scenario " + std::to_string(a) + ", client " +
                              std::to_string(inst.scenarios[a].clients[t]) +
                              " sums to " + std::to_string(sum) + " < 1");
      if (sum != 1.0) {
        for (double& v : row) v /= sum;
        double s2 = 0;
        for (double v : row) s2 += v;
        auto mx = std::max_element(row.begin(), row.end());
        *mx += 1.0 - s2;  // land the row sum on 1 exactly
      }
      for (int i = 0; i < F; ++i) {
        if (row[i] > sol.y[i] + sol.y_scen[a][i] + kFeasTol)
          throw ValidationError("x exceeds opened mass for facility " + std::to_string(i) +
                                " in scenario " + std::to_string(a));
      }
    }
  }

  // Breakdowns always in true-cost units, whatever LP produced the solution.
  sol.scen_facility.assign(S, 0.0);
  sol.scen_connection.assign(S, 0.0);
  sol.scen_value.assign(S, 0.0);
  sol.pair_connection.assign(S, {});
  double stage1 = 0;
  for (int i = 0; i < F; ++i) stage1 += inst.facilities[i].open_stage1 * sol.y[i];
  sol.facility_cost = stage1;
  sol.connection_cost = 0;
  for (int a = 0; a < S; ++a) {
    double recourse = 0;
    for (int i = 0; i < F; ++i)
      recourse += inst.facilities[i].open_stage2[a] * sol.y_scen[a][i];
    double conn = 0;
    sol.pair_connection[a].resize(sol.x[a].size());
    for (std::size_t t = 0; t < sol.x[a].size(); ++t) {
      const int j = inst.scenarios[a].clients[t];
      double pc = 0;
      for (int i = 0; i < F; ++i) pc += inst.c(i, j) * sol.x[a][t][i];
      sol.pair_connection[a][t] = pc;
      conn += inst.clients[j].demand * pc;
    }
    sol.scen_facility[a] = stage1 + recourse;
    sol.scen_connection[a] = conn;
    sol.scen_value[a] = sol.scen_facility[a] + conn;
    sol.facility_cost += inst.scenarios[a].prob * recourse;
    sol.connection_cost += inst.scenarios[a].prob * conn;
  }
}

DualSolution extract_dual(const SuflInstance& inst, const SuflLpLayout& layout,
                          const SimplexResult& res) {
  const int F = inst.num_facilities();
  const int S = inst.num_scenarios();
  DualSolution dual;
  dual.v.resize(S);
  dual.w.resize(S);
  dual.budget.assign(S, 0.0);
  for (int a = 0; a < S; ++a) {
    const double p = inst.scenarios[a].prob;
    const int T = static_cast<int>(inst.scenarios[a].clients.size());
    dual.v[a].resize(T);
    dual.w[a].resize(T);
    for (int t = 0; t < T; ++t) {
      dual.v[a][t] = std::max(res.row_dual[layout.assign_row[a][t]] / p, 0.0);
      dual.budget[a] += dual.v[a][t];
      dual.w[a][t].resize(F);
      for (int i = 0; i < F; ++i)
        dual.w[a][t][i] = std::max(-res.row_dual[layout.cap_row[a][t][i]] / p, 0.0);
    }
    dual.objective += p * dual.budget[a];
  }
  return dual;
}

SolvedSufl solve_sufl(const SuflInstance& inst, double facility_scale, double connection_scale) {
  SuflLpBuild build = build_sufl_primal(inst, facility_scale, connection_scale);
  const SuflLpLayout& layout = build.layout;
  SimplexResult res = solve_lp(build.lp);
  if (res.status == SolveStatus::Infeasible)
    throw ValidationError("facility-location relaxation reported infeasible");
  if (res.status != SolveStatus::Optimal)
    throw InternalError("relaxation solve did not reach optimality");
  SolvedSufl out;
  out.frac = extract_fractional(inst, layout, res);
  out.dual = extract_dual(inst, layout, res);
  return out;
}

std::vector<SlacknessViolation> check_complementary_slackness(const SuflInstance& inst,
                                                              const FractionalSolution& frac,
                                                              const DualSolution& dual) {
  std::vector<SlacknessViolation> out;
  for (int a = 0; a < inst.num_scenarios(); ++a) {
    for (std::size_t t = 0; t < frac.x[a].size(); ++t) {
      const int j = inst.scenarios[a].clients[t];
      const double d = inst.clients[j].demand;
      if (d <= 1e-12) continue;
      const double v_unit = dual.v[a][t] / d;
      for (int i = 0; i < inst.num_facilities(); ++i) {
        if (frac.x[a][t][i] > 1e-7 && inst.c(i, j) > v_unit + 1e-6) {
          out.push_back({a, static_cast<int>(t), i, frac.x[a][t][i], inst.c(i, j), v_unit});
        }
      }
    }
  }
  return out;
}

double dual_infeasibility(const SuflInstance& inst, const DualSolution& dual) {
  const int F = inst.num_facilities();
  double worst = 0;
  std::vector<double> stage1_load(F, 0.0);
  for (int a = 0; a < inst.num_scenarios(); ++a) {
    std::vector<double> scen_load(F, 0.0);
    for (std::size_t t = 0; t < dual.v[a].size(); ++t) {
      const int j = inst.scenarios[a].clients[t];
      for (int i = 0; i < F; ++i) {
        const double slack = dual.v[a][t] - dual.w[a][t][i] -
                             inst.clients[j].demand * inst.c(i, j);
        worst = std::max(worst, slack);
        scen_load[i] += dual.w[a][t][i];
      }
    }
    for (int i = 0; i < F; ++i) {
      worst = std::max(worst, scen_load[i] - inst.facilities[i].open_stage2[a]);
      stage1_load[i] += inst.scenarios[a].prob * scen_load[i];
    }
  }
  for (int i = 0; i < F; ++i)
    worst = std::max(worst, stage1_load[i] - inst.facilities[i].open_stage1);
  return worst;
}

std::string serialize_solution(const SolvedSufl& sol) {
  json j;
  j["objective"] = sol.frac.lp_objective;
  j["y"] = sol.frac.y;
  j["yA"] = sol.frac.y_scen;
  j["x"] = sol.frac.x;
  if (!sol.dual.v.empty()) {
    json d;
    d["v"] = sol.dual.v;
    d["w"] = sol.dual.w;
    j["duals"] = d;
  }
  return j.dump(2) + "\n";
}

SolvedSufl parse_solution(const SuflInstance& inst, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("solution is not valid JSON: ") + e.what());
  }
  const int F = inst.num_facilities();
  const int S = inst.num_scenarios();
  SolvedSufl out;
  out.frac.lp_objective = json_number_at(j, "objective");
  out.frac.y = parse_number_array(json_require(j, "y"), "y", F);
  const json& ya = json_require(j, "yA");
  if (!ya.is_array() || static_cast<int>(ya.size()) != S)
    throw ParseError("field 'yA': expected one row per scenario");
  for (int a = 0; a < S; ++a)
    out.frac.y_scen.push_back(parse_number_array(ya[a], "yA", F));
  const json& x = json_require(j, "x");
  if (!x.is_array() || static_cast<int>(x.size()) != S)
    throw ParseError("field 'x': expected one block per scenario");
  out.frac.x.resize(S);
  for (int a = 0; a < S; ++a) {
    const std::size_t T = inst.scenarios[a].clients.size();
    if (!x[a].is_array() || x[a].size() != T)
      throw ParseError("field 'x': scenario " + std::to_string(a) + " needs " +
                       std::to_string(T) + " assignment rows");
    for (std::size_t t = 0; t < T; ++t)
      out.frac.x[a].push_back(parse_number_array(x[a][t], "x", F));
  }
  normalize_solution(inst, out.frac);

  if (j.contains("duals")) {
    const json& d = j.at("duals");
    const json& v = json_require(d, "v");
    const json& w = json_require(d, "w");
    if (!v.is_array() || static_cast<int>(v.size()) != S || !w.is_array() ||
        static_cast<int>(w.size()) != S)
      throw ParseError("field 'duals': expected v and w with one block per scenario");
    out.dual.v.resize(S);
    out.dual.w.resize(S);
    out.dual.budget.assign(S, 0.0);
    for (int a = 0; a < S; ++a) {
      const std::size_t T = inst.scenarios[a].clients.size();
      out.dual.v[a] = parse_number_array(v[a], "duals.v", T);
      if (!w[a].is_array() || w[a].size() != T)
        throw ParseError("field 'duals.w': scenario " + std::to_string(a) + " needs " +
                         std::to_string(T) + " rows");
      for (std::size_t t = 0; t < T; ++t) {
        out.dual.w[a].push_back(parse_number_array(w[a][t], "duals.w", F));
        out.dual.budget[a] += out.dual.v[a][t];
      }
      out.dual.objective += inst.scenarios[a].prob * out.dual.budget[a];
    }
  }
  return out;
}

void save_solution(const SolvedSufl& sol, const std::string& path) {
  write_file(path, serialize_solution(sol));
}

SolvedSufl load_solution(const SuflInstance& inst, const std::string& path) {
  return parse_solution(inst, read_file(path));
}

CipSolution solve_cip(const ScenarioTreeCip& tree) {
  CipLpBuild build = build_cip_lp(tree);
  const CipLpLayout& layout = build.layout;
  SimplexResult res = solve_lp(build.lp);
  if (res.status == SolveStatus::Infeasible)
    throw ValidationError("covering relaxation reported infeasible");
  if (res.status != SolveStatus::Optimal)
    throw InternalError("covering relaxation solve did not reach optimality");
  CipSolution sol;
  sol.objective = res.objective;
  sol.x.resize(tree.nodes.size());
  for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
    sol.x[n].resize(tree.nodes[n].vars.size());
    for (std::size_t k = 0; k < tree.nodes[n].vars.size(); ++k)
      sol.x[n][k] = std::max(res.x[layout.var[n][k]], 0.0);
  }
  return sol;
}

}  // namespace stochround
