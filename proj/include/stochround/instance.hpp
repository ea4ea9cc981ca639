#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochround/common.hpp"

namespace stochround {

// Two-stage facility location under scenario uncertainty.  Distances are a
// single symmetric matrix over facilities followed by clients (facility i is
// point i, client j is point num_facilities + j), which is what the metric
// check and the rounding analyses need.
struct SuflInstance {
  struct Facility {
    std::string id;
    double open_stage1 = 0;                  // f_i^I
    std::vector<double> open_stage2;         // f_i^A per scenario
  };
  struct Client {
    std::string id;
    double demand = 1.0;
  };
  struct Scenario {
    double prob = 0;
    std::vector<int> clients;                // sorted ascending client indices
  };

  std::vector<Facility> facilities;
  std::vector<Client> clients;
  std::vector<std::vector<double>> dist;     // (F+D) x (F+D), symmetric
  std::vector<Scenario> scenarios;

  int num_facilities() const { return static_cast<int>(facilities.size()); }
  int num_clients() const { return static_cast<int>(clients.size()); }
  int num_scenarios() const { return static_cast<int>(scenarios.size()); }
  int num_points() const { return num_facilities() + num_clients(); }

  // Facility-to-client distance c_{ij}.
  double c(int facility, int client) const {
    return dist[facility][num_facilities() + client];
  }

  void validate() const;  // throws ValidationError; includes the metric check
};

struct MetricViolation {
  int a = 0, b = 0, via = 0;   // point indices: d(a,b) > d(a,via) + d(via,b)
  double excess = 0;
};

// Exhaustive O(N^3) triangle-inequality check with 1e-9 slack.
std::vector<MetricViolation> validate_metric(const std::vector<std::vector<double>>& dist);

// k-stage covering program on a scenario tree.  Node 0 is the root (stage 1);
// each node carries a block of variables, each with a cost and a column of
// row coefficients in [0, 1].  Leaves sit at depth == stages and carry the
// right-hand side revealed in that scenario.
struct ScenarioTreeCip {
  struct Var {
    double cost = 0;
    std::vector<double> column;              // one coefficient per row
  };
  struct Node {
    int parent = -1;                         // -1 for the root
    double prob = 1;                         // transition probability from parent
    std::vector<Var> vars;
  };

  int stages = 1;
  int rows = 0;
  std::vector<Node> nodes;
  std::vector<std::vector<double>> b_by_leaf;  // parallel to leaves() order

  std::vector<int> children(int node) const;
  std::vector<int> leaves() const;             // node-index order
  std::vector<int> path_to_root(int node) const;  // root first
  int depth(int node) const;
  double absolute_prob(int node) const;        // product of probs to the root

  // min_{i: b_i >= 1} b_i over all leaves; the covering width the Chernoff
  // calibration uses.  Returns 1 when no entry reaches 1.
  double covering_width() const;

  void validate() const;
};

enum class InstanceKind { Sufl, SetCover, VertexCover, GeneralCip };

struct GeneratorConfig {
  InstanceKind kind = InstanceKind::Sufl;
  std::uint64_t seed = 1;

  // facility location
  int num_facilities = 5;
  int num_clients = 8;
  int num_scenarios = 3;
  bool geometric = true;                     // points in the unit square
  double cost_min = 1.0, cost_max = 10.0;    // stage-I opening costs
  double inflation_min = 1.0, inflation_max = 4.0;  // stage-II multiplier

  // covering trees
  int stages = 2;
  int arity = 2;
  int vars_per_node = 4;                     // sets / general columns
  int rows = 6;                              // general kind
  int vertices = 6;                          // vertex cover
  double edge_prob = 0.5;
  double leaf_keep_prob = 0.7;               // chance an edge survives into a leaf
  int elements = 8;                          // set cover
  int max_element_degree = 3;
  double b_target = 1.0;                     // general kind: min_{b_i>=1} b_i

  void validate() const;
};

SuflInstance generate_sufl(const GeneratorConfig& cfg);
ScenarioTreeCip generate_cip_tree(const GeneratorConfig& cfg);

// The two-client/two-facility instance where one scenario's dual budget
// exceeds that scenario's share of the primal optimum.
SuflInstance make_counterexample(double eps = 0.01);

// File round trip.  Collects non-fatal notes (e.g. dropped zero-probability
// scenarios) into *warnings when provided.
struct LoadedInstance {
  std::optional<SuflInstance> sufl;
  std::optional<ScenarioTreeCip> cip;
  bool is_sufl() const { return sufl.has_value(); }
};

LoadedInstance load_instance(const std::string& path, std::vector<std::string>* warnings = nullptr);
LoadedInstance parse_instance(const std::string& text, std::vector<std::string>* warnings = nullptr);

std::string serialize(const SuflInstance& inst);
std::string serialize(const ScenarioTreeCip& tree);
void save_instance(const SuflInstance& inst, const std::string& path);
void save_instance(const ScenarioTreeCip& tree, const std::string& path);

}  // namespace stochround
