#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "stochround/jms.hpp"
#include "stochround/rng.hpp"
#include "stochround/simplex.hpp"

using namespace stochround;

namespace {

double brute_force_ufl(const UflSubinstance& sub) {
  const int F = sub.num_facilities();
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < (1 << F); ++mask) {
    double cost = 0;
    for (int i = 0; i < F; ++i)
      if (mask & (1 << i)) cost += sub.open_cost[i];
    for (int j = 0; j < sub.num_clients(); ++j) {
      double d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < F; ++i)
        if (mask & (1 << i)) d = std::min(d, sub.dist[j][i]);
      cost += sub.demand[j] * d;
    }
    best = std::min(best, cost);
  }
  return best;
}

UflSubinstance random_subinstance(Rng& rng, int max_f = 8, int max_d = 12) {
  UflSubinstance sub;
  const int F = 1 + static_cast<int>(rng.below(max_f));
  const int D = 1 + static_cast<int>(rng.below(max_d));
  std::vector<std::pair<double, double>> fpos(F), cpos(D);
  for (auto& p : fpos) p = {rng.uniform01(), rng.uniform01()};
  for (auto& p : cpos) p = {rng.uniform01(), rng.uniform01()};
  for (int i = 0; i < F; ++i) sub.open_cost.push_back(rng.uniform(0.05, 1.5));
  for (int j = 0; j < D; ++j) {
    sub.demand.push_back(rng.uniform(0.2, 3.0));
    std::vector<double> row(F);
    for (int i = 0; i < F; ++i)
      row[i] = std::hypot(cpos[j].first - fpos[i].first, cpos[j].second - fpos[i].second);
    sub.dist.push_back(std::move(row));
  }
  return sub;
}

}  // namespace

TEST_CASE("greedy picks the farther cheap facility over the co-located pricey one") {
  UflSubinstance sub;
  sub.open_cost = {5.0, 1.0};
  sub.demand = {1.0};
  sub.dist = {{0.0, 2.0}};

  JmsSolver solver(sub);
  CHECK(solver.next_event() == doctest::Approx(3.0));  // 1 = t - 2 wins against 5 = t
  JmsResult res = jms_solve(sub);
  CHECK(res.open == std::vector<int>{1});
  CHECK(res.assign == std::vector<int>{1});
  CHECK(res.cost() == doctest::Approx(3.0));
  CHECK(res.cost() == doctest::Approx(brute_force_ufl(sub)));
}

TEST_CASE("single client pays opening plus distance") {
  UflSubinstance sub;
  sub.open_cost = {2.0};
  sub.demand = {1.0};
  sub.dist = {{1.0}};
  JmsSolver solver(sub);
  CHECK(solver.next_event() == doctest::Approx(3.0));
  CHECK(jms_solve(sub).cost() == doctest::Approx(3.0));
}

TEST_CASE("two equidistant clients share the opening burden") {
  UflSubinstance sub;
  sub.open_cost = {2.0};
  sub.demand = {1.0, 1.0};
  sub.dist = {{1.0}, {1.0}};
  JmsSolver solver(sub);
  CHECK(solver.next_event() == doctest::Approx(2.0));  // 2(t - 1) = 2
  JmsResult res = jms_solve(sub);
  CHECK(res.cost() == doctest::Approx(4.0));
}

TEST_CASE("simultaneous openings resolve to the lower facility index") {
  UflSubinstance sub;
  sub.open_cost = {1.0, 1.0};
  sub.demand = {1.0};
  sub.dist = {{1.0, 1.0}};
  JmsResult res = jms_solve(sub);
  CHECK(res.open == std::vector<int>{0});
  CHECK(res.assign == std::vector<int>{0});
  CHECK(res.cost() == doctest::Approx(2.0));
}

TEST_CASE("stepping keeps time and connection costs monotone") {
  Rng rng(424242);
  for (int rep = 0; rep < 25; ++rep) {
    UflSubinstance sub = random_subinstance(rng);
    JmsSolver solver(sub);
    std::vector<double> last(sub.num_clients(), std::numeric_limits<double>::infinity());
    double last_t = 0;
    int steps = 0;
    while (!solver.done()) {
      double ev = solver.next_event();
      CHECK(ev >= last_t - 1e-12);
      solver.step();
      last_t = solver.time();
      for (int j = 0; j < sub.num_clients(); ++j) {
        if (solver.assignment()[j] >= 0) {
          CHECK(solver.connection_cost(j) <= last[j] + 1e-12);
          last[j] = solver.connection_cost(j);
        }
      }
      REQUIRE(++steps < 10000);
    }
    JmsResult res = solver.result();
    for (int j = 0; j < sub.num_clients(); ++j) {
      int i = res.assign[j];
      REQUIRE(i >= 0);
      CHECK(std::find(res.open.begin(), res.open.end(), i) != res.open.end());
    }
  }
}

TEST_CASE("greedy lands between the optimum and the known quality bands") {
  Rng rng(20240815);
  for (int rep = 0; rep < 200; ++rep) {
    UflSubinstance sub = random_subinstance(rng);
    JmsResult res = jms_solve(sub);
    double opt = brute_force_ufl(sub);
    CAPTURE(rep);
    CHECK(res.cost() >= opt - 1e-9);
    CHECK(res.cost() <= 1.61 * opt + 1e-6);

    UflLpBuild build = build_ufl_lp(sub);
    SimplexResult lp = solve_lp(build.lp);
    REQUIRE(lp.status == SolveStatus::Optimal);
    double f_star = 0, c_star = 0;
    for (int i = 0; i < sub.num_facilities(); ++i)
      f_star += sub.open_cost[i] * lp.x[build.y[i]];
    for (int j = 0; j < sub.num_clients(); ++j)
      for (int i = 0; i < sub.num_facilities(); ++i)
        c_star += sub.demand[j] * sub.dist[j][i] * lp.x[build.x[j][i]];
    CHECK(res.cost() <= 1.11 * f_star + 1.78 * c_star + 1e-6);
  }
}

TEST_CASE("a weighted client behaves like co-located unit clients") {
  UflSubinstance weighted;
  weighted.open_cost = {3.0, 1.0};
  weighted.demand = {3.0};
  weighted.dist = {{0.5, 1.5}};

  UflSubinstance split;
  split.open_cost = weighted.open_cost;
  split.demand = {1.0, 1.0, 1.0};
  split.dist = {{0.5, 1.5}, {0.5, 1.5}, {0.5, 1.5}};

  JmsResult a = jms_solve(weighted);
  JmsResult b = jms_solve(split);
  CHECK(a.cost() == doctest::Approx(b.cost()));
  CHECK(a.open == b.open);
}

TEST_CASE("co-located clients coalesce into one weighted client") {
  UflSubinstance sub;
  sub.open_cost = {1.0, 2.0};
  sub.demand = {1.0, 2.0, 0.5};
  sub.dist = {{0.5, 1.0}, {0.7, 0.2}, {0.5, 1.0}};

  std::vector<int> rep;
  UflSubinstance merged = coalesce_clients(sub, &rep);
  CHECK(merged.num_clients() == 2);
  CHECK(rep == std::vector<int>{0, 1, 0});
  CHECK(merged.demand[0] == doctest::Approx(1.5));
  CHECK(merged.demand[1] == doctest::Approx(2.0));
  CHECK(jms_solve(merged).cost() == doctest::Approx(jms_solve(sub).cost()));
}

TEST_CASE("no clients means nothing opens") {
  UflSubinstance sub;
  sub.open_cost = {1.0};
  JmsResult res = jms_solve(sub);
  CHECK(res.open.empty());
  CHECK(res.cost() == 0.0);
}
