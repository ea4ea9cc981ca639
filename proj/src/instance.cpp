#include "stochround/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stochround/json_util.hpp"

namespace stochround {

namespace {
constexpr double kProbTol = 1e-9;
constexpr double kMetricTol = 1e-9;

std::string idx(const std::string& name, int i) {
  return name + "[" + std::to_string(i) + "]";
}
}  // namespace

std::vector<MetricViolation> validate_metric(const std::vector<std::vector<double>>& dist) {
  const int n = static_cast<int>(dist.size());
  std::vector<MetricViolation> out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int v = 0; v < n; ++v) {
        if (v == a || v == b || a == b) continue;
        double excess = dist[a][b] - dist[a][v] - dist[v][b];
        if (excess > kMetricTol) out.push_back({a, b, v, excess});
      }
  return out;
}

void SuflInstance::validate() const {
  if (facilities.empty()) throw ValidationError("facilities: at least one facility required");
  if (clients.empty()) throw ValidationError("clients: at least one client required");
  if (scenarios.empty()) throw ValidationError("scenarios: at least one scenario required");

  const int f = num_facilities(), d = num_clients(), n = num_points();

  for (int i = 0; i < f; ++i) {
    if (!(facilities[i].open_stage1 >= 0))
      throw ValidationError(idx("facilities", i) + ".f1: negative opening cost");
    if (static_cast<int>(facilities[i].open_stage2.size()) != num_scenarios())
      throw ValidationError(idx("facilities", i) +
                            ".f2_by_scenario: expected one cost per scenario");
    for (double v : facilities[i].open_stage2)
      if (!(v >= 0)) throw ValidationError(idx("facilities", i) + ".f2_by_scenario: negative cost");
  }
  for (int j = 0; j < d; ++j)
    if (!(clients[j].demand >= 0))
      throw ValidationError(idx("clients", j) + ".demand: negative demand");

  if (static_cast<int>(dist.size()) != n)
    throw ValidationError("distances: expected a " + std::to_string(n) + "x" +
                          std::to_string(n) + " matrix over facilities then clients");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(dist[a].size()) != n)
      throw ValidationError(idx("distances", a) + ": ragged row");
    for (int b = 0; b < n; ++b) {
      if (!(dist[a][b] >= 0)) throw ValidationError(idx("distances", a) + ": negative entry");
      if (std::abs(dist[a][b] - dist[b][a]) > kMetricTol)
        throw ValidationError(idx("distances", a) + ": matrix not symmetric");
    }
    if (std::abs(dist[a][a]) > kMetricTol)
      throw ValidationError(idx("distances", a) + ": nonzero diagonal");
  }

  double psum = 0;
  for (int a = 0; a < num_scenarios(); ++a) {
    const Scenario& s = scenarios[a];
    if (!(s.prob > 0)) throw ValidationError(idx("scenarios", a) + ".prob: must be positive");
    psum += s.prob;
    if (s.clients.empty())
      throw ValidationError(idx("scenarios", a) + ".clients: scenario set must be nonempty");
    for (std::size_t t = 0; t < s.clients.size(); ++t) {
      if (s.clients[t] < 0 || s.clients[t] >= d)
        throw ValidationError(idx("scenarios", a) + ".clients: index out of range");
      if (t > 0 && s.clients[t] <= s.clients[t - 1])
        throw ValidationError(idx("scenarios", a) + ".clients: must be strictly ascending");
    }
  }
  if (std::abs(psum - 1.0) > kProbTol)
    throw ValidationError("scenarios: probabilities sum to " + std::to_string(psum) +
                          ", expected 1");

  auto violations = validate_metric(dist);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::ostringstream os;
    os << "distances: triangle inequality violated ("
       << violations.size() << " triples); first: d(" << v.a << "," << v.b
       << ") exceeds path via " << v.via << " by " << v.excess;
    throw ValidationError(os.str());
  }
}

std::vector<int> ScenarioTreeCip::children(int node) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (nodes[i].parent == node) out.push_back(i);
  return out;
}

std::vector<int> ScenarioTreeCip::leaves() const {
  std::vector<bool> has_child(nodes.size(), false);
  for (const auto& nd : nodes)
    if (nd.parent >= 0) has_child[nd.parent] = true;
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (!has_child[i]) out.push_back(i);
  return out;
}

std::vector<int> ScenarioTreeCip::path_to_root(int node) const {
  std::vector<int> out;
  for (int v = node; v >= 0; v = nodes[v].parent) out.push_back(v);
  std::reverse(out.begin(), out.end());
  return out;
}

int ScenarioTreeCip::depth(int node) const {
  int d = 0;
  for (int v = node; nodes[v].parent >= 0; v = nodes[v].parent) ++d;
  return d;
}

double ScenarioTreeCip::absolute_prob(int node) const {
  double p = 1;
  for (int v = node; v >= 0; v = nodes[v].parent) p *= nodes[v].prob;
  return p;
}

double ScenarioTreeCip::covering_width() const {
  double width = 0;
  bool seen = false;
  for (const auto& b : b_by_leaf)
    for (double v : b)
      if (v >= 1 && (!seen || v < width)) {
        width = v;
        seen = true;
      }
  return seen ? width : 1.0;
}

void ScenarioTreeCip::validate() const {
  if (stages < 1) throw ValidationError("stages: must be >= 1");
  if (rows < 1) throw ValidationError("rows: must be >= 1");
  if (nodes.empty()) throw ValidationError("nodes: empty tree");
  if (nodes[0].parent != -1) throw ValidationError("nodes[0].parent: root must have parent -1");
  if (std::abs(nodes[0].prob - 1.0) > kProbTol)
    throw ValidationError("nodes[0].prob: root probability must be 1");

  for (int i = 1; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[i].parent < 0 || nodes[i].parent >= i)
      throw ValidationError(idx("nodes", i) + ".parent: must point to an earlier node");
    if (!(nodes[i].prob > 0))
      throw ValidationError(idx("nodes", i) + ".prob: must be positive");
  }
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[i].vars.empty())
      throw ValidationError(idx("nodes", i) + ".vars: node carries no variables");
    for (std::size_t j = 0; j < nodes[i].vars.size(); ++j) {
      const Var& v = nodes[i].vars[j];
      if (!(v.cost >= 0))
        throw ValidationError(idx("nodes", i) + ".vars: negative cost");
      if (static_cast<int>(v.column.size()) != rows)
        throw ValidationError(idx("nodes", i) + ".vars: column length != rows");
      for (double e : v.column)
        if (e < 0 || e > 1 + 1e-12)
          throw ValidationError(idx("nodes", i) + ".vars: matrix entries must lie in [0, 1]");
    }
  }

  // Interior nodes: child probabilities sum to 1.  Leaves: depth == stages - 1
  // edges below the root, i.e. the path has `stages` nodes.
  auto leaf_list = leaves();
  std::vector<double> child_sum(nodes.size(), 0);
  for (int i = 1; i < static_cast<int>(nodes.size()); ++i)
    child_sum[nodes[i].parent] += nodes[i].prob;
  std::vector<bool> is_leaf(nodes.size(), false);
  for (int v : leaf_list) is_leaf[v] = true;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (is_leaf[i]) {
      if (depth(i) != stages - 1)
        throw ValidationError(idx("nodes", i) + ": leaf at depth " +
                              std::to_string(depth(i) + 1) + ", expected " +
                              std::to_string(stages) + " stages");
    } else if (std::abs(child_sum[i] - 1.0) > kProbTol) {
      throw ValidationError(idx("nodes", i) + ": child probabilities sum to " +
                            std::to_string(child_sum[i]) + ", expected 1");
    }
  }

  if (b_by_leaf.size() != leaf_list.size())
    throw ValidationError("b_by_leaf: expected one vector per leaf (" +
                          std::to_string(leaf_list.size()) + ")");
  for (std::size_t l = 0; l < b_by_leaf.size(); ++l) {
    if (static_cast<int>(b_by_leaf[l].size()) != rows)
      throw ValidationError(idx("b_by_leaf", static_cast<int>(l)) + ": length != rows");
    for (double v : b_by_leaf[l])
      if (v < 0) throw ValidationError(idx("b_by_leaf", static_cast<int>(l)) + ": negative entry");
  }
}

void GeneratorConfig::validate() const {
  if (num_facilities < 1 || num_clients < 1 || num_scenarios < 1)
    throw ValidationError("generator: facility/client/scenario counts must be >= 1");
  if (stages < 1 || arity < 1 || vars_per_node < 1 || rows < 1 || vertices < 2 || elements < 1)
    throw ValidationError("generator: size parameters must be positive");
  if (cost_min > cost_max || cost_min < 0)
    throw ValidationError("generator: cost range empty or negative");
  if (inflation_min > inflation_max || inflation_min < 0)
    throw ValidationError("generator: inflation range empty or negative");
  if (edge_prob < 0 || edge_prob > 1 || leaf_keep_prob < 0 || leaf_keep_prob > 1)
    throw ValidationError("generator: probabilities must lie in [0, 1]");
  if (max_element_degree < 1) throw ValidationError("generator: max_element_degree must be >= 1");
  if (b_target < 1) throw ValidationError("generator: b_target must be >= 1");
}

SuflInstance make_counterexample(double eps) {
  SuflInstance inst;
  inst.facilities.resize(2);
  inst.facilities[0] = {"f1", 2.0, {4.0, 4.0}};
  inst.facilities[1] = {"f2", eps, {4.0, 4.0}};
  inst.clients.resize(2);
  inst.clients[0] = {"c1", 1.0};
  inst.clients[1] = {"c2", 1.0};
  // Points: f1, f2, c1, c2.  All facility-client distances 1 except
  // d(c1, f2) = 3; the remaining pairs take their shortest-path values.
  inst.dist = {
      {0, 2, 1, 1},
      {2, 0, 3, 1},
      {1, 3, 0, 2},
      {1, 1, 2, 0},
  };
  inst.scenarios.resize(2);
  inst.scenarios[0] = {0.5, {0}};
  inst.scenarios[1] = {0.5, {1}};
  inst.validate();
  return inst;
}

namespace {

json dist_to_json(const std::vector<std::vector<double>>& dist) {
  json rows = json::array();
  for (const auto& row : dist) rows.push_back(row);
  return rows;
}

json sufl_to_json(const SuflInstance& inst) {
  json j;
  j["kind"] = "sufl";
  j["facilities"] = json::array();
  for (const auto& f : inst.facilities) {
    json jf;
    jf["id"] = f.id;
    jf["f1"] = f.open_stage1;
    jf["f2_by_scenario"] = f.open_stage2;
    j["facilities"].push_back(jf);
  }
  j["clients"] = json::array();
  for (const auto& c : inst.clients) {
    json jc;
    jc["id"] = c.id;
    if (c.demand != 1.0) jc["demand"] = c.demand;
    j["clients"].push_back(jc);
  }
  j["distances"] = dist_to_json(inst.dist);
  j["scenarios"] = json::array();
  for (const auto& s : inst.scenarios) {
    json js;
    js["prob"] = s.prob;
    js["clients"] = s.clients;
    j["scenarios"].push_back(js);
  }
  return j;
}

json cip_to_json(const ScenarioTreeCip& tree) {
  json j;
  j["kind"] = "cip-tree";
  j["stages"] = tree.stages;
  j["rows"] = tree.rows;
  j["b_by_leaf"] = json::array();
  for (const auto& b : tree.b_by_leaf) j["b_by_leaf"].push_back(b);
  j["nodes"] = json::array();
  for (const auto& nd : tree.nodes) {
    json jn;
    jn["parent"] = nd.parent;
    jn["prob"] = nd.prob;
    jn["vars"] = json::array();
    for (const auto& v : nd.vars) {
      json jv;
      jv["cost"] = v.cost;
      jv["column"] = v.column;
      jn["vars"].push_back(jv);
    }
    j["nodes"].push_back(jn);
  }
  return j;
}

SuflInstance sufl_from_json(const json& j, std::vector<std::string>* warnings) {
  SuflInstance inst;
  const json& jf = json_require(j, "facilities");
  if (!jf.is_array()) throw ParseError("facilities: expected an array");
  for (std::size_t i = 0; i < jf.size(); ++i) {
    SuflInstance::Facility f;
    f.id = jf[i].contains("id") && jf[i]["id"].is_string() ? jf[i]["id"].get<std::string>()
                                                           : "f" + std::to_string(i);
    f.open_stage1 = json_number_at(jf[i], "f1");
    const json& j2 = json_require(jf[i], "f2_by_scenario");
    if (!j2.is_array()) throw ParseError("facilities.f2_by_scenario: expected an array");
    for (const auto& v : j2) f.open_stage2.push_back(json_number(v, "f2_by_scenario"));
    inst.facilities.push_back(std::move(f));
  }

  const json& jc = json_require(j, "clients");
  if (!jc.is_array()) throw ParseError("clients: expected an array");
  for (std::size_t i = 0; i < jc.size(); ++i) {
    SuflInstance::Client c;
    c.id = jc[i].contains("id") && jc[i]["id"].is_string() ? jc[i]["id"].get<std::string>()
                                                           : "c" + std::to_string(i);
    if (jc[i].contains("demand")) c.demand = json_number(jc[i]["demand"], "clients.demand");
    inst.clients.push_back(std::move(c));
  }

  const json& jd = json_require(j, "distances");
  if (!jd.is_array()) throw ParseError("distances: expected an array of rows");
  for (const auto& row : jd) {
    if (!row.is_array()) throw ParseError("distances: expected an array of rows");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(json_number(v, "distances"));
    inst.dist.push_back(std::move(r));
  }

  const json& js = json_require(j, "scenarios");
  if (!js.is_array()) throw ParseError("scenarios: expected an array");
  std::vector<int> dropped;
  for (std::size_t a = 0; a < js.size(); ++a) {
    SuflInstance::Scenario s;
    s.prob = json_number_at(js[a], "prob");
    const json& cl = json_require(js[a], "clients");
    if (!cl.is_array()) throw ParseError("scenarios.clients: expected an array");
    for (const auto& v : cl) s.clients.push_back(static_cast<int>(json_number(v, "scenarios.clients")));
    if (s.prob == 0) {
      dropped.push_back(static_cast<int>(a));
      continue;
    }
    inst.scenarios.push_back(std::move(s));
  }
  if (!dropped.empty()) {
    std::ostringstream os;
    os << "dropped " << dropped.size() << " scenario(s) with zero probability:";
    for (int a : dropped) os << " scenarios[" << a << "]";
    if (warnings) warnings->push_back(os.str());
    // Stage-II cost vectors keep their per-scenario positions only for the
    // surviving scenarios, in order.
    for (auto& f : inst.facilities) {
      std::vector<double> kept;
      for (std::size_t a = 0; a < f.open_stage2.size(); ++a)
        if (std::find(dropped.begin(), dropped.end(), static_cast<int>(a)) == dropped.end())
          kept.push_back(f.open_stage2[a]);
      f.open_stage2 = std::move(kept);
    }
  }

  inst.validate();
  return inst;
}

ScenarioTreeCip cip_from_json(const json& j) {
  ScenarioTreeCip tree;
  tree.stages = static_cast<int>(json_number_at(j, "stages"));
  tree.rows = static_cast<int>(json_number_at(j, "rows"));
  const json& jn = json_require(j, "nodes");
  if (!jn.is_array()) throw ParseError("nodes: expected an array");
  for (const auto& n : jn) {
    ScenarioTreeCip::Node nd;
    nd.parent = static_cast<int>(json_number_at(n, "parent"));
    nd.prob = json_number_at(n, "prob");
    const json& jv = json_require(n, "vars");
    if (!jv.is_array()) throw ParseError("nodes.vars: expected an array");
    for (const auto& v : jv) {
      ScenarioTreeCip::Var var;
      var.cost = json_number_at(v, "cost");
      const json& col = json_require(v, "column");
      if (!col.is_array()) throw ParseError("nodes.vars.column: expected an array");
      for (const auto& e : col) var.column.push_back(json_number(e, "column"));
      nd.vars.push_back(std::move(var));
    }
    tree.nodes.push_back(std::move(nd));
  }
  const json& jb = json_require(j, "b_by_leaf");
  if (!jb.is_array()) throw ParseError("b_by_leaf: expected an array");
  for (const auto& row : jb) {
    std::vector<double> b;
    for (const auto& v : row) b.push_back(json_number(v, "b_by_leaf"));
    tree.b_by_leaf.push_back(std::move(b));
  }
  tree.validate();
  return tree;
}

}  // namespace

LoadedInstance parse_instance(const std::string& text, std::vector<std::string>* warnings) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  const std::string kind = json_require(j, "kind").get<std::string>();
  LoadedInstance out;
  if (kind == "sufl") {
    out.sufl = sufl_from_json(j, warnings);
  } else if (kind == "cip-tree") {
    out.cip = cip_from_json(j);
  } else {
    throw ParseError("kind: expected 'sufl' or 'cip-tree', got '" + kind + "'");
  }
  return out;
}

LoadedInstance load_instance(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str(), warnings);
}

std::string serialize(const SuflInstance& inst) { return sufl_to_json(inst).dump(2) + "\n"; }
std::string serialize(const ScenarioTreeCip& tree) { return cip_to_json(tree).dump(2) + "\n"; }

namespace {
void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}
}  // namespace

void save_instance(const SuflInstance& inst, const std::string& path) {
  write_file(path, serialize(inst));
}
void save_instance(const ScenarioTreeCip& tree, const std::string& path) {
  write_file(path, serialize(tree));
}

}  // namespace stochround
