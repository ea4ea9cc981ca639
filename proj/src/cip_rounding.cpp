#include "stochround/cip_rounding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stochround {

namespace {
constexpr double kTriggerSlack = 1e-12;  // forced-1 fires at sum + z >= 1 - slack

void kahan_add(double& sum, double& comp, double v) {
  double t = v - comp;
  double next = sum + t;
  comp = (next - sum) - t;
  sum = next;
}
}  // namespace

double choose_lambda(const LambdaConfig& cfg) {
  if (cfg.num_rows < 1) throw ValidationError("lambda config: num_rows must be >= 1");
  if (cfg.kind == LambdaKind::SetCover) {
    double inner = std::log(cfg.num_rows + cfg.psi_shift);
    if (!(inner > 1.0))
      throw ValidationError("lambda config: psi_shift too small for ln ln(n + shift)");
    return std::log(static_cast<double>(cfg.num_rows)) + std::log(inner);
  }

  if (!(cfg.width >= 1.0))
    throw ValidationError("lambda config: width must be >= 1 for the general kind");
  const double eps = cfg.eps_row > 0 ? cfg.eps_row : 0.5 / cfg.num_rows;
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("lambda config: eps_row must lie in (0, 1)");

  // Want the smallest lambda >= 1 with lambda*B*(1 - 1/lambda)^2 / 2 >= ln(1/eps),
  // i.e. B*(lambda - 2 + 1/lambda)/2 >= target; the left side is increasing.
  const double target = std::log(1.0 / eps);
  auto enough = [&](double lam) {
    return cfg.width * (lam - 2.0 + 1.0 / lam) / 2.0 >= target;
  };
  double lo = 1.0, hi = 2.0;
  while (!enough(hi)) hi *= 2.0;
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    (enough(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<int> independent_round(const std::vector<StageBlock>& blocks, double lambda,
                                   Rng& rng) {
  if (!(lambda >= 1.0)) throw ValidationError("independent rounding needs lambda >= 1");
  std::vector<int> y;
  for (const StageBlock& blk : blocks) {
    for (double x : blk.values) {
      if (!(x >= 0)) throw ValidationError("independent rounding: negative fractional value");
      double scaled = lambda * x;
      double base = std::floor(scaled);
      y.push_back(static_cast<int>(base) + (rng.bernoulli(scaled - base) ? 1 : 0));
    }
  }
  return y;
}

int DependentRounder::feed(State& st, double z, Rng& rng) {
  if (!(z >= 0.0 && z <= 1.0))
    throw ValidationError("rounder input outside [0, 1]: " + std::to_string(z));
  if (st.fired) return 0;
  if (st.sum + z >= 1.0 - kTriggerSlack) {
    st.fired = true;
    return 1;
  }
  if (rng.uniform01() < z / (1.0 - st.sum)) {
    st.fired = true;
    return 1;
  }
  kahan_add(st.sum, st.comp, z);
  return 0;
}

std::vector<double> exact_distribution(const std::vector<double>& z) {
  const int k = static_cast<int>(z.size());
  if (k > 20) throw ValidationError("exact distribution limited to 20 variables");
  for (double v : z)
    if (!(v >= 0.0 && v <= 1.0))
      throw ValidationError("rounder input outside [0, 1]: " + std::to_string(v));

  // Mirror feed()'s arithmetic exactly so the table is the true law of the
  // sampler: alive tracks the no-output-yet probability.
  std::vector<double> table(std::size_t{1} << k, 0.0);
  double alive = 1.0, sum = 0.0, comp = 0.0;
  for (int i = 0; i < k; ++i) {
    double p = sum + z[i] >= 1.0 - kTriggerSlack ? 1.0 : z[i] / (1.0 - sum);
    table[std::size_t{1} << i] = alive * p;
    alive *= 1.0 - p;
    kahan_add(sum, comp, z[i]);
  }
  table[0] = alive;
  return table;
}

TreeRounding independent_round_tree(const ScenarioTreeCip& tree, const CipSolution& frac,
                                    double lambda, Rng& rng) {
  if (!(lambda >= 1.0)) throw ValidationError("independent rounding needs lambda >= 1");
  TreeRounding out;
  out.y.resize(tree.nodes.size());
  for (std::size_t nd = 0; nd < tree.nodes.size(); ++nd) {
    const double p = tree.absolute_prob(static_cast<int>(nd));
    out.y[nd].resize(tree.nodes[nd].vars.size());
    for (std::size_t j = 0; j < tree.nodes[nd].vars.size(); ++j) {
      double scaled = lambda * std::max(0.0, frac.x[nd][j]);
      double base = std::floor(scaled);
      int v = static_cast<int>(base) + (rng.bernoulli(scaled - base) ? 1 : 0);
      out.y[nd][j] = v;
      out.cost += p * tree.nodes[nd].vars[j].cost * v;
    }
  }
  return out;
}

std::vector<std::pair<int, int>> uncovered_rows(const ScenarioTreeCip& tree,
                                                const std::vector<std::vector<int>>& y) {
  std::vector<std::pair<int, int>> misses;
  const auto leaf_list = tree.leaves();
  for (std::size_t l = 0; l < leaf_list.size(); ++l) {
    const auto path = tree.path_to_root(leaf_list[l]);
    for (int r = 0; r < tree.rows; ++r) {
      if (tree.b_by_leaf[l][r] <= 0) continue;
      double lhs = 0;
      for (int nd : path)
        for (std::size_t j = 0; j < tree.nodes[nd].vars.size(); ++j)
          lhs += tree.nodes[nd].vars[j].column[r] * y[nd][j];
      if (lhs < tree.b_by_leaf[l][r] - 1e-9)
        misses.emplace_back(static_cast<int>(l), r);
    }
  }
  return misses;
}

BoundedCoverRounding round_bounded_cover(const ScenarioTreeCip& tree, const CipSolution& frac,
                                         Rng& rng) {
  tree.validate();
  const int V = static_cast<int>(tree.nodes[0].vars.size());
  for (const auto& nd : tree.nodes)
    if (static_cast<int>(nd.vars.size()) != V)
      throw ValidationError("bounded cover: variable blocks must align across stages");

  // Sets must keep one 0/1 footprint at every stage.
  std::vector<std::vector<bool>> covers(V, std::vector<bool>(tree.rows, false));
  for (int j = 0; j < V; ++j) {
    for (int r = 0; r < tree.rows; ++r) {
      double c0 = tree.nodes[0].vars[j].column[r];
      if (c0 > 1e-9 && c0 < 1.0 - 1e-9)
        throw ValidationError("bounded cover: matrix entries must be 0 or 1");
      covers[j][r] = c0 > 0.5;
      for (const auto& nd : tree.nodes)
        if ((nd.vars[j].column[r] > 0.5) != covers[j][r])
          throw ValidationError("bounded cover: set footprints differ across stages");
    }
  }

  const auto leaf_list = tree.leaves();
  for (std::size_t l = 0; l < leaf_list.size(); ++l)
    for (int r = 0; r < tree.rows; ++r)
      if (tree.b_by_leaf[l][r] > 1.0 + 1e-9)
        throw ValidationError("bounded cover: right-hand sides above 1 are unsupported");

  int degree = 1;
  for (int r = 0; r < tree.rows; ++r) {
    bool active = false;
    for (const auto& b : tree.b_by_leaf) active = active || b[r] > 0;
    if (!active) continue;
    int d = 0;
    for (int j = 0; j < V; ++j) d += covers[j][r] ? 1 : 0;
    degree = std::max(degree, d);
  }

  // Eq-style feasibility: every demanded row must carry a full unit of
  // fractional mass along its leaf path.
  for (std::size_t l = 0; l < leaf_list.size(); ++l) {
    const auto path = tree.path_to_root(leaf_list[l]);
    for (int r = 0; r < tree.rows; ++r) {
      if (tree.b_by_leaf[l][r] <= 0) continue;
      double mass = 0;
      for (int nd : path)
        for (int j = 0; j < V; ++j)
          if (covers[j][r]) mass += frac.x[nd][j];
      if (mass < 1.0 - 1e-7)
        throw ValidationError("bounded cover: fractional input covers leaf " +
                              std::to_string(l) + " row " + std::to_string(r) + " with only " +
                              std::to_string(mass));
    }
  }

  BoundedCoverRounding out;
  out.degree = degree;
  out.y.assign(tree.nodes.size(), std::vector<int>(V, 0));

  // One rounder stream per set, branching with the tree: children continue
  // from a copy of the parent's prefix state.
  std::vector<DependentRounder::State> root_states(V);
  struct Frame {
    int node;
    std::vector<DependentRounder::State> states;
  };
  std::vector<Frame> stack;
  stack.push_back({0, std::move(root_states)});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    for (int j = 0; j < V; ++j) {
      double z = std::clamp(degree * std::max(0.0, frac.x[fr.node][j]), 0.0, 1.0);
      out.y[fr.node][j] = DependentRounder::feed(fr.states[j], z, rng);
    }
    auto kids = tree.children(fr.node);
    // Reverse order so the stack pops children in index order.
    for (auto it = kids.rbegin(); it != kids.rend(); ++it)
      stack.push_back({*it, fr.states});
  }

  for (std::size_t nd = 0; nd < tree.nodes.size(); ++nd) {
    const double p = tree.absolute_prob(static_cast<int>(nd));
    for (int j = 0; j < V; ++j)
      out.cost += p * tree.nodes[nd].vars[j].cost * out.y[nd][j];
  }

  if (!uncovered_rows(tree, out.y).empty())
    throw InternalError("bounded cover rounding left a row uncovered");
  return out;
}

}  // namespace stochround
