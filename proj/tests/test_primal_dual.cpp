#include <cmath>
#include <vector>

#include "doctest.h"
#include "stochround/primal_dual.hpp"
#include "stochround/rng.hpp"

using namespace stochround;

TEST_CASE("guarantee factors at the published parameter choices") {
  RatioBound r = evaluate_ratio(0.2485);
  CHECK(r.facility == doctest::Approx(2.3686327127858204).epsilon(1e-12));
  CHECK(r.connection == doctest::Approx(2.368596141051231).epsilon(1e-12));
  CHECK(r.worst < 2.369);

  r = evaluate_ratio(0.37);
  CHECK(r.facility == doctest::Approx(2.24152).epsilon(1e-4));
  CHECK(r.connection == doctest::Approx(2.8254).epsilon(1e-4));

  r = evaluate_ratio(0.25);
  CHECK(r.facility == doctest::Approx(2.3660).epsilon(1e-4));
  CHECK(r.connection == doctest::Approx(2.3733).epsilon(1e-4));
  CHECK(r.worst == doctest::Approx(r.connection));

  CHECK_THROWS_AS(evaluate_ratio(0.0), ValidationError);
  CHECK_THROWS_AS(evaluate_ratio(0.6), ValidationError);
  CHECK_THROWS_AS(evaluate_ratio(-1.0), ValidationError);
}

TEST_CASE("closed-form mean inverse threshold matches numeric integration") {
  CHECK(expected_inverse_threshold(0.2485) == doctest::Approx(2.13390334485209).epsilon(1e-12));
  for (double alpha = 0.05; alpha < 0.5; alpha += 0.05) {
    // Atom at 1/2 plus Simpson's rule over the uniform part.
    double atom = (alpha / (1.0 - alpha)) * 2.0;
    const int n = 20000;  // even
    double lo = alpha, hi = 1.0 - alpha, h = (hi - lo) / n;
    double acc = 1.0 / lo + 1.0 / hi;
    for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) / (lo + k * h);
    double integral = acc * h / 3.0 / (1.0 - alpha);
    CHECK(expected_inverse_threshold(alpha) == doctest::Approx(atom + integral).epsilon(1e-9));
  }
}

TEST_CASE("threshold CDF case split and its selection bound") {
  const double a = 0.2485;
  CHECK(selection_probability(0.0, a) == 0.0);
  CHECK(selection_probability(a - 1e-9, a) == 0.0);
  CHECK(selection_probability(0.3, a) == doctest::Approx((0.3 - a) / (1 - a)).epsilon(1e-12));
  CHECK(selection_probability(0.5, a) == doctest::Approx(0.5 / (1 - a)).epsilon(1e-12));
  CHECK(selection_probability(0.6, a) == doctest::Approx(0.6 / (1 - a)).epsilon(1e-12));
  CHECK(selection_probability(1 - a, a) == 1.0);
  CHECK(selection_probability(0.9, a) == 1.0);

  for (int k = 0; k <= 100; ++k) {
    double r = k / 100.0;
    // Selection never happens more often than r/(1-alpha).
    CHECK(selection_probability(r, a) <= r / (1 - a) + 1e-12);
    // Symmetry of the mixture around 1/2 (off the atom).
    if (r != 0.5)
      CHECK(selection_probability(r, a) ==
            doctest::Approx(1.0 - selection_probability(1.0 - r, a)).epsilon(1e-12));
  }
}

TEST_CASE("threshold draws respect the atom, the range, and the mean") {
  Rng rng(31337);
  const double a = 0.2485;
  const int n = 200000;
  int at_half = 0;
  double inv_sum = 0;
  for (int t = 0; t < n; ++t) {
    double z = draw_threshold(a, rng);
    REQUIRE(z >= a);
    REQUIRE(z <= 1 - a);
    if (z == 0.5) ++at_half;
    inv_sum += 1.0 / z;
  }
  double p_atom = 0.3306719893546241;
  double sigma = std::sqrt(p_atom * (1 - p_atom) / n);
  CHECK(std::abs(at_half / double(n) - p_atom) <= 4 * sigma);
  CHECK(std::abs(inv_sum / n - 2.13390334485209) <= 0.01);

  // Degenerate corner: alpha = 1/2 collapses to the atom.
  for (int t = 0; t < 10; ++t) CHECK(draw_threshold(0.5, rng) == 0.5);
  CHECK_THROWS_AS(draw_threshold(0.0, rng), ValidationError);

  // Empirical CDF against the closed form at a few probes.
  for (double r : {0.3, 0.45, 0.55, 0.7}) {
    Rng rng2(555);
    int hits = 0;
    for (int t = 0; t < n; ++t) hits += draw_threshold(a, rng2) <= r ? 1 : 0;
    double p = selection_probability(r, a);
    double s = std::sqrt(std::max(p * (1 - p), 1e-9) / n);
    CHECK(std::abs(hits / double(n) - p) <= 4 * s);
  }
}

TEST_CASE("pair selection keys off the stage-I share, ties included") {
  DecomposedSolution dec;
  dec.r1 = {{1.0, 0.0, 0.5}};
  SelectionSet sel = select_pairs(dec, 0.5);
  CHECK(sel.selected[0][0]);
  CHECK(!sel.selected[0][1]);
  CHECK(sel.selected[0][2]);  // equality selects
  sel = select_pairs(dec, 0.500001);
  CHECK(!sel.selected[0][2]);
}

TEST_CASE("pure stage-I solutions round deterministically") {
  SuflInstance inst = make_counterexample(0.01);
  SolvedSufl sol = solve_sufl(inst);
  Rng rng(9);
  PrimalDualOutcome out = run_primal_dual(inst, sol.frac, 0.2485, rng);

  // The fractional optimum opens only in stage I, so every pair is selected
  // whatever the threshold, and the recourse stays idle.
  CHECK(out.selection.selected[0][0]);
  CHECK(out.selection.selected[1][0]);
  CHECK(out.stage2_open[0].empty());
  CHECK(out.stage2_open[1].empty());
  CHECK(out.stage2_cost[0] == 0.0);

  // The greedy opens the cheap facility; the first scenario's client rides
  // the long arc to it.
  CHECK(out.stage1_open == std::vector<int>{1});
  CHECK(out.stage1_cost == doctest::Approx(0.01));
  CHECK(out.connection[0] == doctest::Approx(3.0));
  CHECK(out.connection[1] == doctest::Approx(1.0));
  CHECK(out.scen_cost[0] == doctest::Approx(3.01));
  CHECK(out.scen_cost[1] == doctest::Approx(1.01));
  CHECK(out.expected_cost == doctest::Approx(2.01));
  CHECK(out.expected_cost_closest == doctest::Approx(2.01));
  CHECK(out.assign[0][0] == 1);
  CHECK(out.assign_closest[0][0] == 1);
}

TEST_CASE("threshold rounding meets its cost guarantees on random instances") {
  GeneratorConfig cfg;
  cfg.seed = 11;
  SuflInstance inst = generate_sufl(cfg);
  SolvedSufl sol = solve_sufl(inst);
  const double lp = sol.frac.lp_objective;
  const double f_frac = sol.frac.facility_cost;
  const double c_frac = sol.frac.connection_cost;

  auto run_mean = [&](double alpha, int trials, double& mean, double& stderr_out,
                      double& mean_closest) {
    double sum = 0, sq = 0, sum_closest = 0;
    for (int t = 0; t < trials; ++t) {
      Rng rng = trial_rng(77, t);
      PrimalDualOutcome out = run_primal_dual(inst, sol.frac, alpha, rng);
      sum += out.expected_cost;
      sq += out.expected_cost * out.expected_cost;
      sum_closest += out.expected_cost_closest;
      CHECK(out.expected_cost_closest <= out.expected_cost + 1e-9);
      // Assigned facilities really are open in the right stage.
      for (int a = 0; a < inst.num_scenarios(); ++a)
        for (std::size_t p = 0; p < out.assign[a].size(); ++p) {
          int i = out.assign[a][p];
          bool in1 = std::find(out.stage1_open.begin(), out.stage1_open.end(), i) !=
                     out.stage1_open.end();
          bool in2 = std::find(out.stage2_open[a].begin(), out.stage2_open[a].end(), i) !=
                     out.stage2_open[a].end();
          CHECK((in1 || in2));
        }
    }
    mean = sum / trials;
    mean_closest = sum_closest / trials;
    stderr_out = std::sqrt(std::max(sq / trials - mean * mean, 0.0) / trials);
  };

  double mean, se, mean_closest;
  run_mean(0.2485, 10000, mean, se, mean_closest);
  CHECK(mean <= 2.369 * lp + 3 * se);
  CHECK(mean_closest <= mean);

  run_mean(0.37, 10000, mean, se, mean_closest);
  CHECK(mean <= 2.241524862316686 * f_frac + 2.8253968253968256 * c_frac + 3 * se);
}
