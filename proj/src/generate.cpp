#include <algorithm>
#include <cmath>

#include "stochround/instance.hpp"
#include "stochround/rng.hpp"

namespace stochround {

namespace {

// Shortest-path closure; turns an arbitrary nonnegative symmetric matrix
// into a metric without changing zero diagonals.
void metric_closure(std::vector<std::vector<double>>& d) {
  const int n = static_cast<int>(d.size());
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
}

std::vector<std::vector<double>> geometric_distances(int n, Rng& rng) {
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) {
    p.first = rng.uniform01();
    p.second = rng.uniform01();
  }
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
      d[i][j] = d[j][i] = v;
    }
  return d;
}

std::vector<std::vector<double>> random_metric(int n, Rng& rng) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rng.uniform(0.2, 2.0);
  metric_closure(d);
  return d;
}

// Tree skeleton: root plus `arity` children per interior node, `stages`
// levels; transition probabilities random, normalized per sibling group.
ScenarioTreeCip tree_skeleton(const GeneratorConfig& cfg, Rng& rng) {
  ScenarioTreeCip tree;
  tree.stages = cfg.stages;
  tree.nodes.emplace_back();
  tree.nodes[0].parent = -1;
  tree.nodes[0].prob = 1;
  int level_begin = 0, level_end = 1;
  for (int s = 1; s < cfg.stages; ++s) {
    int next_begin = static_cast<int>(tree.nodes.size());
    for (int p = level_begin; p < level_end; ++p) {
      std::vector<double> w(cfg.arity);
      double total = 0;
      for (double& x : w) total += (x = rng.uniform(0.5, 1.5));
      for (int c = 0; c < cfg.arity; ++c) {
        ScenarioTreeCip::Node nd;
        nd.parent = p;
        nd.prob = w[c] / total;
        tree.nodes.push_back(nd);
      }
    }
    level_begin = next_begin;
    level_end = static_cast<int>(tree.nodes.size());
  }
  return tree;
}

// Per-node stage inflation: stage 1 keeps base costs, later stages multiply
// by a fresh draw from the inflation range.
double stage_multiplier(const GeneratorConfig& cfg, int depth, Rng& rng) {
  if (depth == 0) return 1.0;
  return rng.uniform(cfg.inflation_min, cfg.inflation_max);
}

}  // namespace

SuflInstance generate_sufl(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SuflInstance inst;
  const int f = cfg.num_facilities, d = cfg.num_clients, m = cfg.num_scenarios;

  inst.dist = cfg.geometric ? geometric_distances(f + d, rng) : random_metric(f + d, rng);

  inst.facilities.resize(f);
  for (int i = 0; i < f; ++i) {
    inst.facilities[i].id = "f" + std::to_string(i);
    inst.facilities[i].open_stage1 = rng.uniform(cfg.cost_min, cfg.cost_max);
    inst.facilities[i].open_stage2.resize(m);
    for (int a = 0; a < m; ++a)
      inst.facilities[i].open_stage2[a] =
          inst.facilities[i].open_stage1 * rng.uniform(cfg.inflation_min, cfg.inflation_max);
  }
  inst.clients.resize(d);
  for (int j = 0; j < d; ++j) inst.clients[j].id = "c" + std::to_string(j);

  inst.scenarios.resize(m);
  std::vector<double> w(m);
  double total = 0;
  for (int a = 0; a < m; ++a) total += (w[a] = rng.uniform(0.2, 1.0));
  for (int a = 0; a < m; ++a) {
    inst.scenarios[a].prob = w[a] / total;
    // Uniform over nonempty subsets via rejection.
    do {
      inst.scenarios[a].clients.clear();
      for (int j = 0; j < d; ++j)
        if (rng.bernoulli(0.5)) inst.scenarios[a].clients.push_back(j);
    } while (inst.scenarios[a].clients.empty());
  }
  // Normalization leaves a representable sum; nudge the last weight so the
  // stored probabilities sum to 1 bit-exactly.
  double psum = 0;
  for (int a = 0; a + 1 < m; ++a) psum += inst.scenarios[a].prob;
  inst.scenarios[m - 1].prob = 1.0 - psum;

  inst.validate();
  return inst;
}

ScenarioTreeCip generate_cip_tree(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  ScenarioTreeCip tree = tree_skeleton(cfg, rng);

  if (cfg.kind == InstanceKind::VertexCover) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < cfg.vertices; ++u)
      for (int v = u + 1; v < cfg.vertices; ++v)
        if (rng.bernoulli(cfg.edge_prob)) edges.emplace_back(u, v);
    if (edges.empty()) edges.emplace_back(0, 1);
    tree.rows = static_cast<int>(edges.size());

    for (int n = 0; n < static_cast<int>(tree.nodes.size()); ++n) {
      auto& nd = tree.nodes[n];
      double mult = stage_multiplier(cfg, tree.depth(n), rng);
      nd.vars.resize(cfg.vertices);
      for (int v = 0; v < cfg.vertices; ++v) {
        nd.vars[v].cost = rng.uniform(cfg.cost_min, cfg.cost_max) * mult;
        nd.vars[v].column.assign(tree.rows, 0.0);
        for (int e = 0; e < tree.rows; ++e)
          if (edges[e].first == v || edges[e].second == v) nd.vars[v].column[e] = 1.0;
      }
    }
    for (int leaf : tree.leaves()) {
      (void)leaf;
      std::vector<double> b(tree.rows, 0.0);
      for (int e = 0; e < tree.rows; ++e)
        if (rng.bernoulli(cfg.leaf_keep_prob)) b[e] = 1.0;
      tree.b_by_leaf.push_back(std::move(b));
    }
  } else if (cfg.kind == InstanceKind::SetCover) {
    tree.rows = cfg.elements;
    // Element-to-set incidence, element degree in [1, max_element_degree].
    std::vector<std::vector<int>> member_sets(cfg.elements);
    for (int e = 0; e < cfg.elements; ++e) {
      int deg = 1 + static_cast<int>(rng.below(cfg.max_element_degree));
      std::vector<int> sets;
      while (static_cast<int>(sets.size()) < std::min(deg, cfg.vars_per_node)) {
        int s = static_cast<int>(rng.below(cfg.vars_per_node));
        if (std::find(sets.begin(), sets.end(), s) == sets.end()) sets.push_back(s);
      }
      member_sets[e] = sets;
    }
    for (int n = 0; n < static_cast<int>(tree.nodes.size()); ++n) {
      double mult = stage_multiplier(cfg, tree.depth(n), rng);
      auto& nd = tree.nodes[n];
      nd.vars.resize(cfg.vars_per_node);
      for (int s = 0; s < cfg.vars_per_node; ++s) {
        nd.vars[s].cost = rng.uniform(cfg.cost_min, cfg.cost_max) * mult;
        nd.vars[s].column.assign(tree.rows, 0.0);
      }
      for (int e = 0; e < cfg.elements; ++e)
        for (int s : member_sets[e]) nd.vars[s].column[e] = 1.0;
    }
    for (int leaf : tree.leaves()) {
      (void)leaf;
      tree.b_by_leaf.emplace_back(tree.rows, 1.0);
    }
  } else if (cfg.kind == InstanceKind::GeneralCip) {
    tree.rows = cfg.rows;
    for (int n = 0; n < static_cast<int>(tree.nodes.size()); ++n) {
      double mult = stage_multiplier(cfg, tree.depth(n), rng);
      auto& nd = tree.nodes[n];
      nd.vars.resize(cfg.vars_per_node);
      double max_entry = 0;
      for (int v = 0; v < cfg.vars_per_node; ++v) {
        nd.vars[v].cost = rng.uniform(cfg.cost_min, cfg.cost_max) * mult;
        nd.vars[v].column.resize(tree.rows);
        for (double& e : nd.vars[v].column) max_entry = std::max(max_entry, e = rng.uniform01());
      }
      for (auto& v : nd.vars)
        for (double& e : v.column) e /= max_entry;
      // Guarantee every row can be covered from any single node's block.
      for (int r = 0; r < tree.rows; ++r) {
        int v = static_cast<int>(rng.below(cfg.vars_per_node));
        nd.vars[v].column[r] = std::max(nd.vars[v].column[r], 0.5);
      }
    }
    for (int leaf : tree.leaves()) {
      (void)leaf;
      std::vector<double> b(tree.rows);
      for (double& v : b) v = rng.uniform(cfg.b_target, 2 * cfg.b_target);
      b[0] = cfg.b_target;
      tree.b_by_leaf.push_back(std::move(b));
    }
  } else {
    throw ValidationError("generator: kind must be a covering kind for tree generation");
  }

  tree.validate();
  return tree;
}

}  // namespace stochround
