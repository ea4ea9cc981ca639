#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "stochround/harness.hpp"
#include "stochround/report.hpp"

using namespace stochround;

namespace {

SuflInstance small_sufl(std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.kind = InstanceKind::Sufl;
  cfg.seed = seed;
  cfg.num_facilities = 5;
  cfg.num_clients = 8;
  cfg.num_scenarios = 3;
  return generate_sufl(cfg);
}

ScenarioTreeCip small_tree(std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.kind = InstanceKind::VertexCover;
  cfg.seed = seed;
  return generate_cip_tree(cfg);
}

// Odd cycle: three facilities, three clients, each client at distance 1 from
// two facilities and 3 from the third.  The relaxation opens every facility
// at a half (value 6) while any integral plan pays 7, so rounding outcomes
// genuinely vary from trial to trial.
SuflInstance odd_cycle() {
  SuflInstance inst;
  inst.facilities = {{"f0", 2.0, {20.0}}, {"f1", 2.0, {20.0}}, {"f2", 2.0, {20.0}}};
  inst.clients = {{"c01", 1.0}, {"c12", 1.0}, {"c20", 1.0}};
  auto near = [](int f, int c) { return f == c || (f == (c + 1) % 3); };
  inst.dist.assign(6, std::vector<double>(6, 0.0));
  for (int f = 0; f < 3; ++f)
    for (int c = 0; c < 3; ++c)
      inst.dist[f][3 + c] = inst.dist[3 + c][f] = near(f, c) ? 1.0 : 3.0;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      if (p == q) continue;
      inst.dist[p][q] = 2.0;
      inst.dist[3 + p][3 + q] = 2.0;
    }
  inst.scenarios = {{1.0, {0, 1, 2}}};
  inst.validate();
  return inst;
}

}  // namespace

TEST_CASE("evaluate rejects short runs and unknown algorithms") {
  SuflInstance inst = small_sufl(1);
  CHECK_THROWS_AS(evaluate(inst, "pd", {}, 99, 1), ValidationError);
  CHECK_THROWS_AS(evaluate(inst, "simulated-annealing", {}, 100, 1), ValidationError);
  ScenarioTreeCip tree = small_tree(3);
  CHECK_THROWS_AS(evaluate(tree, "dependent", {}, 50, 1), ValidationError);
  CHECK_THROWS_AS(evaluate(tree, "pd", {}, 100, 1), ValidationError);
}

TEST_CASE("threshold algorithm report carries its guarantee line") {
  SuflInstance inst = small_sufl(2);
  TrialReport rep = evaluate(inst, "pd", {}, 200, 11);
  CHECK(rep.algorithm == "pd");
  CHECK(rep.trials == 200);
  CHECK(rep.per_scenario.size() == 3);
  CHECK(rep.lp_value > 0);
  CHECK(rep.lp_facility + rep.lp_connection == doctest::Approx(rep.lp_value));
  REQUIRE(rep.bounds.size() == 1);
  CHECK(rep.bounds[0].ok);
  CHECK(rep.overall.ci99 == doctest::Approx(2.576 * rep.overall.se));
  CHECK(rep.min_trial_cost <= rep.overall.mean + 1e-9);
  CHECK(rep.overall.mean <= rep.max_trial_cost + 1e-9);
  REQUIRE(!rep.info.empty());
  CHECK(rep.info[0].first == "alpha");
  CHECK(rep.info[0].second == doctest::Approx(0.2485));
  CHECK(rep.all_ok());
}

TEST_CASE("per-scenario and plain rounding reports keep their scenario lines") {
  SuflInstance inst = small_sufl(4);
  TrialReport lp = evaluate(inst, "lp", {}, 300, 5);
  CHECK(lp.bounds.size() == 3);  // one per scenario
  for (const auto& b : lp.bounds) CHECK(b.ok);

  TrialReport ps = evaluate(inst, "per-scenario", {}, 300, 5);
  CHECK(ps.bounds.size() == 3);
  for (const auto& b : ps.bounds) CHECK(b.ok);
  bool saw_root = false;
  for (const auto& [key, value] : ps.info)
    if (key == "equalization_root") {
      saw_root = true;
      CHECK(value == doctest::Approx(2.4252).epsilon(1e-3));
    }
  CHECK(saw_root);
}

TEST_CASE("strict mode pins gamma to five and audits connections") {
  SuflInstance inst = small_sufl(6);
  EvaluateParams params;
  params.strict = true;
  params.gamma = 2.4957;  // overridden by strict
  TrialReport rep = evaluate(inst, "per-scenario", params, 150, 9);
  CHECK(rep.info[0].first == "gamma");
  CHECK(rep.info[0].second == 5.0);
  CHECK(rep.bounds.size() == 6);  // cost + connection per scenario
  for (const auto& b : rep.bounds) CHECK(b.ok);
}

TEST_CASE("reports are byte-identical across runs and thread budgets") {
  SuflInstance inst = odd_cycle();
  TrialReport a = evaluate(inst, "alg3", {}, 150, 21);
  REQUIRE(a.min_trial_cost < a.max_trial_cost);  // outcomes genuinely vary
  TrialReport b = evaluate(inst, "alg3", {}, 150, 21);
  CHECK(report_json(a) == report_json(b));

  setenv("STOCHROUND_THREADS", "4", 1);
  CHECK(thread_budget(150) == 4);
  CHECK(thread_budget(2) == 2);
  TrialReport c = evaluate(inst, "alg3", {}, 150, 21);
  unsetenv("STOCHROUND_THREADS");
  CHECK(report_json(c) == report_json(a));

  TrialReport d = evaluate(inst, "alg3", {}, 150, 22);
  CHECK(d.overall.mean != doctest::Approx(a.overall.mean).epsilon(1e-12));
}

TEST_CASE("scaled and best-of-two guarantee lines hold on a small instance") {
  SuflInstance inst = small_sufl(7);
  TrialReport alg1 = evaluate(inst, "alg1", {}, 400, 31);
  REQUIRE(alg1.bounds.size() == 1);
  CHECK(alg1.bounds[0].ok);
  CHECK(alg1.bounds[0].bound ==
        doctest::Approx(2.4061 * alg1.lp_facility + 1.2707 * alg1.lp_connection));

  TrialReport alg3 = evaluate(inst, "alg3", {}, 400, 31);
  REQUIRE(alg3.bounds.size() == 1);
  CHECK(alg3.bounds[0].ok);
  CHECK(alg3.bounds[0].bound == doctest::Approx(2.2975 * alg3.lp_value));
  CHECK(alg3.per_scenario.size() == 3);  // branch breakdown reaches the report
}

TEST_CASE("oracle runs attach the exact optimum and the sandwich line") {
  SuflInstance inst = small_sufl(8);
  EvaluateParams params;
  params.with_oracle = true;
  TrialReport rep = evaluate(inst, "lp", params, 120, 13);
  REQUIRE(rep.oracle_optimum.has_value());
  CHECK(*rep.oracle_optimum >= rep.lp_value - 1e-6);
  CHECK(rep.min_trial_cost >= *rep.oracle_optimum - 1e-6);
  CHECK(rep.bounds.back().label == "lp <= exact optimum <= every trial cost");
  CHECK(rep.bounds.back().ok);
}

TEST_CASE("independent tree rounding reports coverage and budget lines") {
  ScenarioTreeCip tree = small_tree(3);
  TrialReport rep = evaluate(tree, "independent", {}, 300, 17);
  CHECK(rep.coverage_draws >= rep.trials);
  CHECK(rep.coverage_failures == rep.coverage_draws - 300);
  REQUIRE(rep.bounds.size() == 2);
  CHECK(rep.bounds[0].ok);  // failure rate within the calibrated budget
  CHECK(rep.bounds[1].ok);  // conditional cost within 1.1 * lambda * lp
  CHECK(rep.info[0].first == "lambda");
  CHECK(rep.info[0].second >= 1.0);
  CHECK(rep.per_scenario.empty());

  EvaluateParams fixed;
  fixed.lambda = rep.info[0].second;
  TrialReport again = evaluate(tree, "independent", fixed, 300, 17);
  CHECK(report_json(again) == report_json(rep));
}

TEST_CASE("dependent tree rounding binds the mean to degree times lp") {
  ScenarioTreeCip tree = small_tree(11);
  EvaluateParams params;
  params.with_oracle = true;
  TrialReport rep = evaluate(tree, "dependent", params, 300, 19);
  CHECK(rep.coverage_draws == 0);
  REQUIRE(rep.info.size() == 1);
  CHECK(rep.info[0].first == "degree");
  CHECK(rep.info[0].second == 2.0);  // vertex cover: every edge row meets two sets
  CHECK(rep.bounds[0].bound == doctest::Approx(2.0 * rep.lp_value));
  CHECK(rep.bounds[0].ok);
  CHECK(rep.bounds.back().ok);  // sandwich
  CHECK(*rep.oracle_optimum >= rep.lp_value - 1e-6);
}

TEST_CASE("json rendering round-trips and rejects junk") {
  SuflInstance inst = small_sufl(2);
  EvaluateParams params;
  params.with_oracle = true;
  TrialReport rep = evaluate(inst, "per-scenario", params, 120, 23);
  std::string text = report_json(rep);
  TrialReport back = report_from_json(text);
  CHECK(report_json(back) == text);
  CHECK(back.seed == rep.seed);
  CHECK(back.oracle_optimum == rep.oracle_optimum);
  CHECK(back.info == rep.info);

  CHECK_THROWS_AS(report_from_json("{not json"), ParseError);
  CHECK_THROWS_AS(report_from_json("{\"schema\": \"stochround-report/9\"}"), ParseError);
  CHECK_THROWS_AS(report_from_json("{\"algorithm\": \"pd\"}"), ParseError);
}

TEST_CASE("text rendering states the verdict and flags failures") {
  SuflInstance inst = small_sufl(5);
  TrialReport rep = evaluate(inst, "alg1", {}, 120, 3);
  std::string text = report_text(rep);
  CHECK(text.find("verdict        PASS") != std::string::npos);
  CHECK(text.find("[pass]") != std::string::npos);

  rep.bounds[0].ok = false;
  std::string failed = report_text(rep);
  CHECK(failed.find("verdict        FAIL") != std::string::npos);
  CHECK(failed.find("[FAIL]") != std::string::npos);
  CHECK_FALSE(rep.all_ok());
}

TEST_CASE("comparison table sorts by mean cost") {
  SuflInstance inst = odd_cycle();
  std::vector<TrialReport> reports = {
      evaluate(inst, "alg3", {}, 300, 41),
      evaluate(inst, "pd", {}, 300, 41),
      evaluate(inst, "alg1", {}, 300, 41),
  };
  std::string table = comparison_table(reports);

  // Rows must appear in the same order as sorting by (mean, algorithm).
  std::sort(reports.begin(), reports.end(),
            [](const TrialReport& x, const TrialReport& y) {
              if (x.overall.mean != y.overall.mean) return x.overall.mean < y.overall.mean;
              return x.algorithm < y.algorithm;
            });
  std::size_t at = 0;
  for (const auto& r : reports) {
    std::size_t here = table.find(r.algorithm + " ");
    REQUIRE(here != std::string::npos);
    CHECK(here >= at);
    at = here;
  }
}
