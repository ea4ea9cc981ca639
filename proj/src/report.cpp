#include "stochround/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "stochround/json_util.hpp"

namespace stochround {

namespace {

constexpr const char* kSchema = "stochround-report/1";

json stats_json(const ScenarioStats& s) {
  json j;
  j["mean"] = s.mean;
  j["se"] = s.se;
  j["ci99"] = s.ci99;
  return j;
}

ScenarioStats stats_from(const json& j) {
  ScenarioStats s;
  s.mean = json_number_at(j, "mean");
  s.se = json_number_at(j, "se");
  s.ci99 = json_number_at(j, "ci99");
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

std::string report_json(const TrialReport& rep) {
  json j;
  j["schema"] = rep.schema;
  j["algorithm"] = rep.algorithm;
  j["seed"] = rep.seed;
  j["trials"] = rep.trials;

  json info = json::object();
  for (const auto& [key, value] : rep.info) info[key] = value;
  j["info"] = info;

  json lp;
  lp["value"] = rep.lp_value;
  lp["facility"] = rep.lp_facility;
  lp["connection"] = rep.lp_connection;
  j["lp"] = lp;

  j["overall"] = stats_json(rep.overall);
  json scen = json::array();
  for (const auto& s : rep.per_scenario) scen.push_back(stats_json(s));
  j["per_scenario"] = scen;
  j["min_trial_cost"] = rep.min_trial_cost;
  j["max_trial_cost"] = rep.max_trial_cost;
  j["oracle_optimum"] = rep.oracle_optimum ? json(*rep.oracle_optimum) : json(nullptr);

  json bounds = json::array();
  for (const auto& b : rep.bounds) {
    json line;
    line["label"] = b.label;
    line["bound"] = b.bound;
    line["observed"] = b.observed;
    line["margin"] = b.margin;
    line["ok"] = b.ok;
    bounds.push_back(line);
  }
  j["bounds"] = bounds;

  json cover;
  cover["failures"] = rep.coverage_failures;
  cover["draws"] = rep.coverage_draws;
  j["coverage"] = cover;
  j["all_ok"] = rep.all_ok();
  return j.dump(2) + "\n";
}

TrialReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }

  TrialReport rep;
  rep.schema = json_require(j, "schema").get<std::string>();
  if (rep.schema != kSchema)
    throw ParseError("report: unsupported schema '" + rep.schema + "'");
  rep.algorithm = json_require(j, "algorithm").get<std::string>();
  rep.seed = json_require(j, "seed").get<std::uint64_t>();
  rep.trials = json_require(j, "trials").get<int>();

  for (const auto& [key, value] : json_require(j, "info").items())
    rep.info.emplace_back(key, json_number(value, key));

  const json& lp = json_require(j, "lp");
  rep.lp_value = json_number_at(lp, "value");
  rep.lp_facility = json_number_at(lp, "facility");
  rep.lp_connection = json_number_at(lp, "connection");

  rep.overall = stats_from(json_require(j, "overall"));
  for (const auto& s : json_require(j, "per_scenario")) rep.per_scenario.push_back(stats_from(s));
  rep.min_trial_cost = json_number_at(j, "min_trial_cost");
  rep.max_trial_cost = json_number_at(j, "max_trial_cost");
  const json& oracle = json_require(j, "oracle_optimum");
  if (!oracle.is_null()) rep.oracle_optimum = oracle.get<double>();

  for (const auto& line : json_require(j, "bounds")) {
    BoundLine b;
    b.label = json_require(line, "label").get<std::string>();
    b.bound = json_number_at(line, "bound");
    b.observed = json_number_at(line, "observed");
    b.margin = json_number_at(line, "margin");
    b.ok = json_require(line, "ok").get<bool>();
    rep.bounds.push_back(std::move(b));
  }

  const json& cover = json_require(j, "coverage");
  rep.coverage_failures = json_require(cover, "failures").get<std::int64_t>();
  rep.coverage_draws = json_require(cover, "draws").get<std::int64_t>();
  return rep;
}

std::string report_text(const TrialReport& rep) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "algorithm      " << rep.algorithm << "\n";
  os << "seed           " << rep.seed << "\n";
  os << "trials         " << rep.trials << "\n";
  if (!rep.info.empty()) {
    os << "info          ";
    for (const auto& [key, value] : rep.info) os << " " << key << "=" << fmt(value);
    os << "\n";
  }
  os << "lp value       " << fmt(rep.lp_value);
  if (rep.lp_facility != 0 || rep.lp_connection != 0)
    os << " (facility " << fmt(rep.lp_facility) << ", connection " << fmt(rep.lp_connection)
       << ")";
  os << "\n";
  os << "mean cost      " << fmt(rep.overall.mean) << "  se " << fmt(rep.overall.se)
     << "  ci99 +-" << fmt(rep.overall.ci99) << "\n";
  for (std::size_t a = 0; a < rep.per_scenario.size(); ++a)
    os << "scenario " << std::left << std::setw(5) << a << std::right << " mean "
       << fmt(rep.per_scenario[a].mean) << "  se " << fmt(rep.per_scenario[a].se) << "\n";
  os << "trial cost     min " << fmt(rep.min_trial_cost) << ", max " << fmt(rep.max_trial_cost)
     << "\n";
  if (rep.oracle_optimum) os << "exact optimum  " << fmt(*rep.oracle_optimum) << "\n";
  if (rep.coverage_draws > 0)
    os << "coverage       " << rep.coverage_draws << " draws, " << rep.coverage_failures
       << " misses\n";
  for (const auto& b : rep.bounds)
    os << (b.ok ? "  [pass] " : "  [FAIL] ") << b.label << "  bound=" << fmt(b.bound)
       << " observed=" << fmt(b.observed) << " margin=" << fmt(b.margin) << "\n";
  os << "verdict        " << (rep.all_ok() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string comparison_table(std::vector<TrialReport> reports) {
  std::sort(reports.begin(), reports.end(),
            [](const TrialReport& x, const TrialReport& y) {
              if (x.overall.mean != y.overall.mean) return x.overall.mean < y.overall.mean;
              return x.algorithm < y.algorithm;
            });
  std::ostringstream os;
  os << std::left << std::setw(14) << "algorithm" << std::right << std::setw(8) << "trials"
     << std::setw(14) << "mean" << std::setw(12) << "se" << std::setw(14) << "lp"
     << std::setw(6) << "ok" << "\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(14) << r.algorithm << std::right << std::setw(8) << r.trials
       << std::setw(14) << fmt(r.overall.mean) << std::setw(12) << fmt(r.overall.se)
       << std::setw(14) << fmt(r.lp_value) << std::setw(6) << (r.all_ok() ? "yes" : "NO")
       << "\n";
  }
  return os.str();
}

}  // namespace stochround
