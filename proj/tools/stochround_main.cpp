// Command-line front end: generate, validate, solve, round, evaluate.
// Exit codes: 0 ok, 1 a checked guarantee failed, 2 bad input or usage,
// 3 internal inconsistency.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stochround/harness.hpp"
#include "stochround/json_util.hpp"
#include "stochround/report.hpp"
#include "stochround/solution.hpp"

namespace {

using namespace stochround;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << text;
}

InstanceKind kind_of(const std::string& name) {
  if (name == "sufl") return InstanceKind::Sufl;
  if (name == "vc") return InstanceKind::VertexCover;
  if (name == "sc") return InstanceKind::SetCover;
  return InstanceKind::GeneralCip;
}

int run_gen(const GeneratorConfig& cfg, const std::string& kind, const std::string& out) {
  GeneratorConfig c = cfg;
  c.kind = kind_of(kind);
  std::string text =
      c.kind == InstanceKind::Sufl ? serialize(generate_sufl(c)) : serialize(generate_cip_tree(c));
  write_text(out, text);
  return 0;
}

int run_validate(const std::string& file) {
  std::vector<std::string> warnings;
  LoadedInstance li = load_instance(file, &warnings);
  if (li.is_sufl())
    std::cout << "facility location: " << li.sufl->num_facilities() << " facilities, "
              << li.sufl->num_clients() << " clients, " << li.sufl->num_scenarios()
              << " scenarios\n";
  else
    std::cout << "covering tree: " << li.cip->stages << " stages, " << li.cip->nodes.size()
              << " nodes, " << li.cip->rows << " rows\n";
  for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
  std::cout << "ok\n";
  return 0;
}

int run_solve_lp(const std::string& file, bool dual, const std::string& out) {
  LoadedInstance li = load_instance(file);
  json j;
  if (li.is_sufl()) {
    SolvedSufl solved = solve_sufl(*li.sufl);
    j["objective"] = solved.frac.lp_objective;
    j["y"] = solved.frac.y;
    j["yA"] = solved.frac.y_scen;
    j["x"] = solved.frac.x;
    if (dual) {
      json d;
      d["v"] = solved.dual.v;
      d["w"] = solved.dual.w;
      j["duals"] = d;
    }
  } else {
    CipSolution sol = solve_cip(*li.cip);
    j["objective"] = sol.objective;
    j["x"] = sol.x;
  }
  write_text(out, j.dump(2) + "\n");
  return 0;
}

// Shared by `round` and `evaluate`: run the harness, print the summary,
// write the JSON report, gate the exit code on the bound flags.
int run_eval(const std::string& file, const std::string& algo, const EvaluateParams& params,
             int trials, std::uint64_t seed, const std::string& report_path, bool want_sufl,
             bool kind_checked) {
  LoadedInstance li = load_instance(file);
  if (kind_checked && li.is_sufl() != want_sufl)
    throw ValidationError(want_sufl ? "file holds a covering tree, not a facility instance"
                                    : "file holds a facility instance, not a covering tree");
  TrialReport rep = evaluate(li, algo, params, trials, seed);
  std::cout << report_text(rep);
  if (!report_path.empty()) write_text(report_path, report_json(rep));
  return rep.all_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-stage facility location and covering-tree rounding toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seeded random instance");
  GeneratorConfig cfg;
  std::string gen_kind = "sufl", gen_out;
  gen->add_option("--kind", gen_kind, "sufl|vc|sc|cip")
      ->check(CLI::IsMember({"sufl", "vc", "sc", "cip"}));
  gen->add_option("--seed", cfg.seed, "generator seed");
  gen->add_option("--out", gen_out, "output path (default stdout)");
  gen->add_option("--facilities", cfg.num_facilities);
  gen->add_option("--clients", cfg.num_clients);
  gen->add_option("--scenarios", cfg.num_scenarios);
  gen->add_option("--stages", cfg.stages);
  gen->add_option("--arity", cfg.arity);
  gen->add_option("--vars", cfg.vars_per_node, "columns per tree node (cip kind)");
  gen->add_option("--rows", cfg.rows, "constraint rows (cip kind)");
  gen->add_option("--vertices", cfg.vertices, "graph size (vc kind)");
  gen->add_option("--elements", cfg.elements, "universe size (sc kind)");
  gen->add_option("--edge-prob", cfg.edge_prob);
  gen->callback([&] { rc = run_gen(cfg, gen_kind, gen_out); });

  // validate
  auto* val = app.add_subcommand("validate", "load a document and enforce the model invariants");
  std::string val_file;
  val->add_option("file", val_file, "instance document")->required();
  val->callback([&] { rc = run_validate(val_file); });

  // solve-lp
  auto* slp = app.add_subcommand("solve-lp", "solve the relaxation and print the solution");
  std::string slp_file, slp_out;
  bool slp_dual = false;
  slp->add_option("file", slp_file)->required();
  slp->add_flag("--dual", slp_dual, "include dual values");
  slp->add_option("--out", slp_out, "output path (default stdout)");
  slp->callback([&] { rc = run_solve_lp(slp_file, slp_dual, slp_out); });

  // round sufl / round cip
  auto* round = app.add_subcommand("round", "run rounding trials and report the bounds");
  round->require_subcommand(1);
  std::string r_file, r_algo, r_report, r_lambda = "auto";
  int r_trials = 1000;
  std::uint64_t r_seed = 1;
  EvaluateParams r_params;

  auto* rsufl = round->add_subcommand("sufl", "facility-location algorithms");
  rsufl->add_option("file", r_file)->required();
  rsufl->add_option("--algo", r_algo, "pd|lp|alg1|alg3|per-scenario")
      ->required()
      ->check(CLI::IsMember({"pd", "lp", "alg1", "alg3", "per-scenario"}));
  rsufl->add_option("--alpha", r_params.alpha, "pd threshold shape");
  rsufl->add_option("--gamma", r_params.gamma, "per-scenario inflation");
  rsufl->add_flag("--strict", r_params.strict, "per-scenario: gamma=5 with per-trial stretch");
  rsufl->add_option("--trials", r_trials)->check(CLI::PositiveNumber);
  rsufl->add_option("--seed", r_seed);
  rsufl->add_option("--report", r_report, "write the JSON report here");
  rsufl->callback(
      [&] { rc = run_eval(r_file, r_algo, r_params, r_trials, r_seed, r_report, true, true); });

  auto* rcip = round->add_subcommand("cip", "covering-tree algorithms");
  rcip->add_option("file", r_file)->required();
  rcip->add_option("--algo", r_algo, "independent|dependent")
      ->required()
      ->check(CLI::IsMember({"independent", "dependent"}));
  rcip->add_option("--lambda", r_lambda, "inflation: 'auto' or a value > 1");
  rcip->add_option("--trials", r_trials)->check(CLI::PositiveNumber);
  rcip->add_option("--seed", r_seed);
  rcip->add_option("--report", r_report, "write the JSON report here");
  rcip->callback([&] {
    if (r_lambda != "auto") {
      try {
        std::size_t pos = 0;
        r_params.lambda = std::stod(r_lambda, &pos);
        if (pos != r_lambda.size()) throw std::invalid_argument(r_lambda);
      } catch (const std::exception&) {
        throw ValidationError("--lambda: expected 'auto' or a number, got '" + r_lambda + "'");
      }
    }
    rc = run_eval(r_file, r_algo, r_params, r_trials, r_seed, r_report, false, true);
  });

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Monte Carlo evaluation with guarantee lines");
  std::string e_file, e_algo, e_out;
  int e_trials = 1000;
  std::uint64_t e_seed = 1;
  EvaluateParams e_params;
  ev->add_option("file", e_file)->required();
  ev->add_option("--algo", e_algo, "pd|lp|alg1|alg3|per-scenario|independent|dependent")
      ->required();
  ev->add_option("--trials", e_trials)->check(CLI::PositiveNumber);
  ev->add_option("--seed", e_seed);
  ev->add_flag("--oracle", e_params.with_oracle, "attach the exact optimum and sandwich check");
  ev->add_option("--alpha", e_params.alpha);
  ev->add_option("--gamma", e_params.gamma);
  ev->add_flag("--strict", e_params.strict);
  ev->add_option("--lambda", e_params.lambda, "inflation; 0 calibrates from the tree");
  ev->add_option("--out", e_out, "write the JSON report here");
  ev->callback(
      [&] { rc = run_eval(e_file, e_algo, e_params, e_trials, e_seed, e_out, false, false); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const stochround::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const stochround::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const stochround::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
