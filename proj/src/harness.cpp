#include "stochround/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "stochround/cip_rounding.hpp"
#include "stochround/lp_rounding.hpp"
#include "stochround/oracle.hpp"
#include "stochround/per_scenario.hpp"
#include "stochround/primal_dual.hpp"
#include "stochround/rng.hpp"
#include "stochround/solution.hpp"

namespace stochround {

namespace {

constexpr double kSlack = 1e-6;
constexpr int kMaxCoverRetries = 64;

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

ScenarioStats stats_of(const std::vector<double>& xs) {
  ScenarioStats s;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  double var = 0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  if (xs.size() > 1) var /= n - 1.0;
  s.se = std::sqrt(var / n);
  s.ci99 = 2.576 * s.se;
  return s;
}

BoundLine check(std::string label, double bound, double observed, double margin) {
  return {std::move(label), bound, observed, margin, observed <= bound + margin};
}

// body(t) for t in [0, trials), spread over thread_budget workers.  Each body
// writes only its own slot, so the dynamic schedule cannot change any result.
void run_trials(int trials, const std::function<void(int)>& body) {
  const int workers = thread_budget(trials);
  if (workers <= 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) body(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void finish_stats(TrialReport& rep, const std::vector<double>& total,
                  const std::vector<std::vector<double>>& scen) {
  rep.overall = stats_of(total);
  rep.per_scenario.clear();
  for (const auto& xs : scen) rep.per_scenario.push_back(stats_of(xs));
  auto [lo, hi] = std::minmax_element(total.begin(), total.end());
  rep.min_trial_cost = *lo;
  rep.max_trial_cost = *hi;
}

}  // namespace

bool TrialReport::all_ok() const {
  for (const auto& b : bounds)
    if (!b.ok) return false;
  return true;
}

int thread_budget(int trials) {
  int budget = static_cast<int>(std::thread::hardware_concurrency());
  if (budget < 1) budget = 1;
  if (const char* env = std::getenv("STOCHROUND_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) budget = static_cast<int>(v);
  }
  return std::max(1, std::min(budget, trials));
}

TrialReport evaluate(const SuflInstance& inst, const std::string& algo,
                     const EvaluateParams& params, int trials, std::uint64_t seed) {
  if (trials < 100)
    throw ValidationError("trials: need at least 100 for the normal-approximation intervals");

  TrialReport rep;
  rep.algorithm = algo;
  rep.seed = seed;
  rep.trials = trials;

  SolvedSufl solved = solve_sufl(inst);
  const FractionalSolution& frac = solved.frac;
  rep.lp_value = frac.lp_objective;
  rep.lp_facility = frac.facility_cost;
  rep.lp_connection = frac.connection_cost;

  const int m = inst.num_scenarios();
  std::vector<double> total(trials, 0.0);
  std::vector<std::vector<double>> scen(m, std::vector<double>(trials, 0.0));

  if (algo == "pd") {
    RatioBound rb = evaluate_ratio(params.alpha);
    rep.info = {{"alpha", params.alpha},
                {"facility_factor", rb.facility},
                {"connection_factor", rb.connection}};
    run_trials(trials, [&](int t) {
      Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
      PrimalDualOutcome o = run_primal_dual(inst, frac, params.alpha, rng);
      total[t] = o.expected_cost;
      for (int a = 0; a < m; ++a) scen[a][t] = o.scen_cost[a];
    });
    finish_stats(rep, total, scen);
    rep.bounds.push_back(check(
        "mean cost <= " + num(rb.facility) + "*F_lp + " + num(rb.connection) + "*C_lp",
        rb.facility * rep.lp_facility + rb.connection * rep.lp_connection, rep.overall.mean,
        3.0 * rep.overall.se));
  } else if (algo == "lp" || algo == "alg1") {
    auto plan = algo == "lp" ? make_lp_rounding_plan(inst) : make_scaled_plan(inst);
    run_trials(trials, [&](int t) {
      Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
      RoundingTrial o = run_rounding_trial(*plan, rng);
      total[t] = o.expected_cost;
      for (int a = 0; a < m; ++a) scen[a][t] = o.scen_cost[a];
    });
    finish_stats(rep, total, scen);
    if (algo == "lp") {
      // Guarantee is per scenario, against the dual budget and the breakdown.
      std::vector<double> means(m), ses(m);
      for (int a = 0; a < m; ++a) {
        means[a] = rep.per_scenario[a].mean;
        ses[a] = rep.per_scenario[a].se;
      }
      for (const ScenarioBoundLine& ln : per_scenario_bound_check(frac, solved.dual, means, ses))
        rep.bounds.push_back(check("scenario " + std::to_string(ln.scenario) +
                                       " cost <= 3e^-2*V + (1-e^-2)*C + 2*F",
                                   ln.bound, ln.mean, 3.0 * ln.stderr_));
    } else {
      rep.info = {{"facility_factor", kScaledFacilityFactor},
                  {"connection_factor", kScaledConnectionFactor}};
      rep.bounds.push_back(check(
          "mean cost <= " + num(kScaledFacilityFactor) + "*F_lp + " +
              num(kScaledConnectionFactor) + "*C_lp",
          kScaledFacilityFactor * rep.lp_facility + kScaledConnectionFactor * rep.lp_connection,
          rep.overall.mean, 3.0 * rep.overall.se));
    }
  } else if (algo == "alg3") {
    auto plan = make_scaled_plan(inst);
    rep.info = {{"coin", kBestOfTwoCoin}, {"factor", kBestOfTwoBound}};
    run_trials(trials, [&](int t) {
      Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
      BestOfTwoTrial o = run_best_of_two_trial(*plan, frac, rng, /*coin_mode=*/true);
      total[t] = o.cost;
      for (int a = 0; a < m; ++a) scen[a][t] = o.scen_cost[a];
    });
    finish_stats(rep, total, scen);
    rep.bounds.push_back(check("mean cost <= " + num(kBestOfTwoBound) + "*lp",
                               kBestOfTwoBound * rep.lp_value, rep.overall.mean,
                               3.0 * rep.overall.se));
  } else if (algo == "per-scenario") {
    const double gamma = params.strict ? 5.0 : params.gamma;
    auto plan = make_per_scenario_plan(inst, gamma);
    const FractionalSolution& pf = plan->fractional();
    rep.info = {{"gamma", gamma},
                {"connection_factor", connection_factor(gamma)},
                {"stretch_bound", stretch_bound(gamma)},
                {"equalization_root", equalization_root()},
                {"published_default", kPerScenarioGamma}};
    std::vector<std::vector<double>> conn(m, std::vector<double>(trials, 0.0));
    run_trials(trials, [&](int t) {
      Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
      RoundingTrial o = run_per_scenario_trial(*plan, rng);
      if (params.strict) {
        for (int a = 0; a < m; ++a)
          for (std::size_t p = 0; p < o.pair_distance[a].size(); ++p)
            if (o.pair_distance[a][p] > 5.0 * pf.pair_connection[a][p] + 1e-9)
              throw InternalError("strict mode: a connection exceeded 5x its fractional cost");
      }
      total[t] = o.expected_cost;
      for (int a = 0; a < m; ++a) {
        scen[a][t] = o.scen_cost[a];
        conn[a][t] = o.connection[a];
      }
    });
    finish_stats(rep, total, scen);
    for (int a = 0; a < m; ++a)
      rep.bounds.push_back(check(
          "scenario " + std::to_string(a) + " cost <= " + num(gamma) + "*Val",
          gamma * pf.scen_value[a], rep.per_scenario[a].mean, 3.0 * rep.per_scenario[a].se));
    if (params.strict) {
      const double cf = connection_factor(5.0);
      for (int a = 0; a < m; ++a) {
        ScenarioStats cs = stats_of(conn[a]);
        rep.bounds.push_back(check(
            "scenario " + std::to_string(a) + " connection <= " + num(cf) + "*C",
            cf * pf.scen_connection[a], cs.mean, 3.0 * cs.se));
      }
    }
  } else {
    throw ValidationError("algo: unknown algorithm '" + algo + "'");
  }

  if (params.with_oracle) {
    SuflOracleResult res = oracle_sufl(inst);
    rep.oracle_optimum = res.optimum;
    bool ok = res.optimum >= rep.lp_value - kSlack && rep.min_trial_cost >= res.optimum - kSlack;
    rep.bounds.push_back({"lp <= exact optimum <= every trial cost", res.optimum,
                          rep.min_trial_cost, kSlack, ok});
  }
  return rep;
}

TrialReport evaluate(const ScenarioTreeCip& tree, const std::string& algo,
                     const EvaluateParams& params, int trials, std::uint64_t seed) {
  if (trials < 100)
    throw ValidationError("trials: need at least 100 for the normal-approximation intervals");

  TrialReport rep;
  rep.algorithm = algo;
  rep.seed = seed;
  rep.trials = trials;

  CipSolution frac = solve_cip(tree);
  rep.lp_value = frac.objective;
  std::vector<double> total(trials, 0.0);

  if (algo == "independent") {
    int rows_to_cover = 0;
    double width = std::numeric_limits<double>::infinity();
    for (const auto& b : tree.b_by_leaf)
      for (double v : b) {
        if (v > 0) ++rows_to_cover;
        if (v >= 1) width = std::min(width, v);
      }
    if (!std::isfinite(width)) width = 1.0;

    double lambda = params.lambda;
    if (lambda <= 0) {
      LambdaConfig lc;
      lc.kind = LambdaKind::General;
      lc.num_rows = std::max(1, rows_to_cover);
      lc.width = width;
      lambda = choose_lambda(lc);
    }
    rep.info = {{"lambda", lambda},
                {"rows_to_cover", static_cast<double>(rows_to_cover)},
                {"width", width}};

    std::vector<std::int64_t> draws(trials, 0), fails(trials, 0);
    run_trials(trials, [&](int t) {
      Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
      for (int k = 0; k < kMaxCoverRetries; ++k) {
        TreeRounding r = independent_round_tree(tree, frac, lambda, rng);
        ++draws[t];
        if (uncovered_rows(tree, r.y).empty()) {
          total[t] = r.cost;
          return;
        }
        ++fails[t];
      }
      throw InternalError("coverage never succeeded in " +
                          std::to_string(kMaxCoverRetries) + " draws; lambda far too small");
    });
    for (int t = 0; t < trials; ++t) {
      rep.coverage_draws += draws[t];
      rep.coverage_failures += fails[t];
    }
    finish_stats(rep, total, {});

    const double rate =
        static_cast<double>(rep.coverage_failures) / static_cast<double>(rep.coverage_draws);
    const double rate_se =
        std::sqrt(std::max(rate * (1.0 - rate), 0.0) / static_cast<double>(rep.coverage_draws));
    // Per-row miss estimate: e^-lambda at unit width, the Chernoff lower tail
    // beyond that; the union over rows is the per-draw budget.
    const double per_row =
        width <= 1.0 + 1e-9
            ? std::exp(-lambda)
            : std::exp(-lambda * width * (1.0 - 1.0 / lambda) * (1.0 - 1.0 / lambda) / 2.0);
    const double budget = std::min(1.0, static_cast<double>(rows_to_cover) * per_row);
    rep.bounds.push_back(
        check("coverage failure rate <= calibrated budget", budget, rate, 3.0 * rate_se));
    rep.bounds.push_back(check("conditional mean cost <= 1.1*lambda*lp",
                               1.1 * lambda * rep.lp_value, rep.overall.mean,
                               3.0 * rep.overall.se));
  } else if (algo == "dependent") {
    std::atomic<int> degree{0};
    run_trials(trials, [&](int t) {
      Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
      BoundedCoverRounding r = round_bounded_cover(tree, frac, rng);
      total[t] = r.cost;
      if (t == 0) degree.store(r.degree);
    });
    finish_stats(rep, total, {});
    rep.info = {{"degree", static_cast<double>(degree.load())}};
    rep.bounds.push_back(check("mean cost <= " + std::to_string(degree.load()) + "*lp",
                               degree.load() * rep.lp_value, rep.overall.mean,
                               3.0 * rep.overall.se));
  } else {
    throw ValidationError("algo: unknown algorithm '" + algo + "'");
  }

  if (params.with_oracle) {
    CipOracleResult res = oracle_cip(tree);
    rep.oracle_optimum = res.optimum;
    bool ok = res.optimum >= rep.lp_value - kSlack && rep.min_trial_cost >= res.optimum - kSlack;
    rep.bounds.push_back({"lp <= exact optimum <= every trial cost", res.optimum,
                          rep.min_trial_cost, kSlack, ok});
  }
  return rep;
}

TrialReport evaluate(const LoadedInstance& loaded, const std::string& algo,
                     const EvaluateParams& params, int trials, std::uint64_t seed) {
  if (loaded.is_sufl()) return evaluate(*loaded.sufl, algo, params, trials, seed);
  if (loaded.cip) return evaluate(*loaded.cip, algo, params, trials, seed);
  throw ValidationError("instance: document holds neither kind of instance");
}

}  // namespace stochround
