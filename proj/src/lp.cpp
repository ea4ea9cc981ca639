#include "stochround/lp.hpp"

#include <string>

namespace stochround {

namespace {
std::string tag(const std::string& base, int a, int b = -1, int c = -1) {
  std::string s = base + "[" + std::to_string(a) + "]";
  if (b >= 0) s += "[" + std::to_string(b) + "]";
  if (c >= 0) s += "[" + std::to_string(c) + "]";
  return s;
}
}  // namespace

SuflLpBuild build_sufl_primal(const SuflInstance& inst, double facility_scale,
                              double connection_scale) {
  inst.validate();
  const int F = inst.num_facilities();
  const int M = inst.num_scenarios();

  SuflLpBuild out;
  LinearProgram& lp = out.lp;
  SuflLpLayout& L = out.layout;

  L.y.resize(F);
  for (int i = 0; i < F; ++i)
    L.y[i] = lp.add_var(tag("y", i), facility_scale * inst.facilities[i].open_stage1);

  L.y_scen.assign(M, {});
  for (int a = 0; a < M; ++a) {
    const double p = inst.scenarios[a].prob;
    L.y_scen[a].resize(F);
    for (int i = 0; i < F; ++i)
      L.y_scen[a][i] =
          lp.add_var(tag("yA", a, i), facility_scale * p * inst.facilities[i].open_stage2[a]);
  }

  L.x.assign(M, {});
  for (int a = 0; a < M; ++a) {
    const double p = inst.scenarios[a].prob;
    const auto& members = inst.scenarios[a].clients;
    L.x[a].resize(members.size());
    for (std::size_t t = 0; t < members.size(); ++t) {
      const int j = members[t];
      L.x[a][t].resize(F);
      for (int i = 0; i < F; ++i)
        L.x[a][t][i] = lp.add_var(tag("x", a, j, i),
                                  connection_scale * p * inst.clients[j].demand * inst.c(i, j));
    }
  }

  L.assign_row.assign(M, {});
  L.cap_row.assign(M, {});
  for (int a = 0; a < M; ++a) {
    const auto& members = inst.scenarios[a].clients;
    L.assign_row[a].resize(members.size());
    L.cap_row[a].resize(members.size());
    for (std::size_t t = 0; t < members.size(); ++t) {
      const int j = members[t];
      std::vector<std::pair<int, double>> cover;
      for (int i = 0; i < F; ++i) cover.emplace_back(L.x[a][t][i], 1.0);
      L.assign_row[a][t] = lp.add_row(tag("assign", a, j), RowSense::Ge, 1.0, std::move(cover));
      L.cap_row[a][t].resize(F);
      for (int i = 0; i < F; ++i)
        L.cap_row[a][t][i] = lp.add_row(
            tag("cap", a, j, i), RowSense::Le, 0.0,
            {{L.x[a][t][i], 1.0}, {L.y[i], -1.0}, {L.y_scen[a][i], -1.0}});
    }
  }
  return out;
}

SuflDualBuild build_sufl_dual(const SuflInstance& inst, double facility_scale,
                              double connection_scale) {
  inst.validate();
  const int F = inst.num_facilities();
  const int M = inst.num_scenarios();

  SuflDualBuild out;
  LinearProgram& lp = out.lp;
  lp.maximize = true;

  out.layout.v.assign(M, {});
  out.layout.w.assign(M, {});
  for (int a = 0; a < M; ++a) {
    const double p = inst.scenarios[a].prob;
    const auto& members = inst.scenarios[a].clients;
    out.layout.v[a].resize(members.size());
    out.layout.w[a].resize(members.size());
    for (std::size_t t = 0; t < members.size(); ++t) {
      const int j = members[t];
      out.layout.v[a][t] = lp.add_var(tag("v", a, j), p);
      out.layout.w[a][t].resize(F);
      for (int i = 0; i < F; ++i) out.layout.w[a][t][i] = lp.add_var(tag("w", a, j, i), 0.0);
    }
  }

  // v_{j,A} - w_{ij,A} <= d_j * c_ij
  for (int a = 0; a < M; ++a) {
    const auto& members = inst.scenarios[a].clients;
    for (std::size_t t = 0; t < members.size(); ++t) {
      const int j = members[t];
      for (int i = 0; i < F; ++i)
        lp.add_row(tag("slack", a, j, i), RowSense::Le,
                   connection_scale * inst.clients[j].demand * inst.c(i, j),
                   {{out.layout.v[a][t], 1.0}, {out.layout.w[a][t][i], -1.0}});
    }
  }
  // sum_A p_A sum_j w_{ij,A} <= f_i^I
  for (int i = 0; i < F; ++i) {
    std::vector<std::pair<int, double>> entries;
    for (int a = 0; a < M; ++a)
      for (std::size_t t = 0; t < inst.scenarios[a].clients.size(); ++t)
        entries.emplace_back(out.layout.w[a][t][i], inst.scenarios[a].prob);
    lp.add_row(tag("budget1", i), RowSense::Le,
               facility_scale * inst.facilities[i].open_stage1, std::move(entries));
  }
  // sum_j w_{ij,A} <= f_i^A
  for (int i = 0; i < F; ++i)
    for (int a = 0; a < M; ++a) {
      std::vector<std::pair<int, double>> entries;
      for (std::size_t t = 0; t < inst.scenarios[a].clients.size(); ++t)
        entries.emplace_back(out.layout.w[a][t][i], 1.0);
      lp.add_row(tag("budget2", i, a), RowSense::Le,
                 facility_scale * inst.facilities[i].open_stage2[a], std::move(entries));
    }
  return out;
}

CipLpBuild build_cip_lp(const ScenarioTreeCip& tree) {
  tree.validate();
  CipLpBuild out;
  LinearProgram& lp = out.lp;

  out.layout.var.resize(tree.nodes.size());
  for (int nd = 0; nd < static_cast<int>(tree.nodes.size()); ++nd) {
    const double p = tree.absolute_prob(nd);
    out.layout.var[nd].resize(tree.nodes[nd].vars.size());
    for (std::size_t v = 0; v < tree.nodes[nd].vars.size(); ++v)
      out.layout.var[nd][v] = lp.add_var(tag("x", nd, static_cast<int>(v)),
                                         p * tree.nodes[nd].vars[v].cost);
  }

  const auto leaf_list = tree.leaves();
  for (std::size_t l = 0; l < leaf_list.size(); ++l) {
    const auto path = tree.path_to_root(leaf_list[l]);
    for (int r = 0; r < tree.rows; ++r) {
      if (tree.b_by_leaf[l][r] <= 0) continue;
      std::vector<std::pair<int, double>> entries;
      for (int nd : path)
        for (std::size_t v = 0; v < tree.nodes[nd].vars.size(); ++v) {
          double coef = tree.nodes[nd].vars[v].column[r];
          if (coef > 0) entries.emplace_back(out.layout.var[nd][v], coef);
        }
      lp.add_row(tag("cover", static_cast<int>(l), r), RowSense::Ge, tree.b_by_leaf[l][r],
                 std::move(entries));
    }
  }
  return out;
}

UflLpBuild build_ufl_lp(const UflSubinstance& inst) {
  UflLpBuild out;
  LinearProgram& lp = out.lp;
  const int F = inst.num_facilities();
  const int D = inst.num_clients();

  out.y.resize(F);
  for (int i = 0; i < F; ++i) out.y[i] = lp.add_var(tag("y", i), inst.open_cost[i]);
  out.x.assign(D, {});
  for (int j = 0; j < D; ++j) {
    out.x[j].resize(F);
    for (int i = 0; i < F; ++i)
      out.x[j][i] = lp.add_var(tag("x", j, i), inst.demand[j] * inst.dist[j][i]);
  }
  for (int j = 0; j < D; ++j) {
    std::vector<std::pair<int, double>> cover;
    for (int i = 0; i < F; ++i) cover.emplace_back(out.x[j][i], 1.0);
    lp.add_row(tag("assign", j), RowSense::Ge, 1.0, std::move(cover));
    for (int i = 0; i < F; ++i)
      lp.add_row(tag("cap", j, i), RowSense::Le, 0.0, {{out.x[j][i], 1.0}, {out.y[i], -1.0}});
  }
  return out;
}

}  // namespace stochround
