#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "stochround/instance.hpp"

using namespace stochround;

TEST_CASE("two-facility budget-gap instance has the intended geometry") {
  SuflInstance inst = make_counterexample(0.01);
  REQUIRE(inst.num_facilities() == 2);
  REQUIRE(inst.num_clients() == 2);
  REQUIRE(inst.num_scenarios() == 2);

  CHECK(inst.facilities[0].open_stage1 == doctest::Approx(2.0));
  CHECK(inst.facilities[1].open_stage1 == doctest::Approx(0.01));
  for (const auto& f : inst.facilities) {
    REQUIRE(f.open_stage2.size() == 2);
    CHECK(f.open_stage2[0] == doctest::Approx(4.0));
    CHECK(f.open_stage2[1] == doctest::Approx(4.0));
  }

  CHECK(inst.c(0, 0) == doctest::Approx(1.0));
  CHECK(inst.c(0, 1) == doctest::Approx(1.0));
  CHECK(inst.c(1, 0) == doctest::Approx(3.0));
  CHECK(inst.c(1, 1) == doctest::Approx(1.0));

  CHECK(inst.scenarios[0].prob == doctest::Approx(0.5));
  CHECK(inst.scenarios[0].clients == std::vector<int>{0});
  CHECK(inst.scenarios[1].clients == std::vector<int>{1});

  CHECK(validate_metric(inst.dist).empty());
}

TEST_CASE("metric check pinpoints a triangle violation") {
  std::vector<std::vector<double>> dist = {
      {0, 1, 5},
      {1, 0, 1},
      {5, 1, 0},
  };
  auto bad = validate_metric(dist);
  REQUIRE(!bad.empty());
  // d(0,2) = 5 > d(0,1) + d(1,2) = 2, excess 3.
  bool found = false;
  for (const auto& v : bad) {
    if ((v.a == 0 && v.b == 2 && v.via == 1) || (v.a == 2 && v.b == 0 && v.via == 1)) {
      found = true;
      CHECK(v.excess == doctest::Approx(3.0));
    }
  }
  CHECK(found);
}

TEST_CASE("instance validation rejects broken inputs with named fields") {
  SuflInstance inst = make_counterexample();

  SUBCASE("scenario probabilities must sum to one") {
    inst.scenarios[0].prob = 0.4;
    CHECK_THROWS_WITH_AS(inst.validate(),
                         doctest::Contains("probabilities sum"), ValidationError);
  }
  SUBCASE("scenario client lists must be sorted and in range") {
    inst.scenarios[0].clients = {1, 0};
    inst.scenarios[1].clients = {};
    CHECK_THROWS_AS(inst.validate(), ValidationError);
  }
  SUBCASE("negative opening cost") {
    inst.facilities[1].open_stage1 = -1;
    CHECK_THROWS_AS(inst.validate(), ValidationError);
  }
  SUBCASE("stage-II cost vector length must match scenario count") {
    inst.facilities[0].open_stage2.pop_back();
    CHECK_THROWS_AS(inst.validate(), ValidationError);
  }
  SUBCASE("distance matrix must be metric") {
    inst.dist[0][1] = 100;
    inst.dist[1][0] = 100;
    CHECK_THROWS_WITH_AS(inst.validate(), doctest::Contains("triangle"), ValidationError);
  }
}

TEST_CASE("generated facility-location instances validate and are reproducible") {
  GeneratorConfig cfg;
  cfg.kind = InstanceKind::Sufl;
  for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
    cfg.seed = seed;
    SuflInstance a = generate_sufl(cfg);
    SuflInstance b = generate_sufl(cfg);
    CHECK(serialize(a) == serialize(b));
    CHECK_NOTHROW(a.validate());
    CHECK(a.num_facilities() == cfg.num_facilities);
    CHECK(a.num_clients() == cfg.num_clients);
    CHECK(a.num_scenarios() == cfg.num_scenarios);
  }
  cfg.seed = 1;
  SuflInstance a = generate_sufl(cfg);
  cfg.seed = 2;
  SuflInstance b = generate_sufl(cfg);
  CHECK(serialize(a) != serialize(b));
}

TEST_CASE("generated covering trees validate across kinds") {
  GeneratorConfig cfg;
  for (InstanceKind kind :
       {InstanceKind::SetCover, InstanceKind::VertexCover, InstanceKind::GeneralCip}) {
    cfg.kind = kind;
    for (std::uint64_t seed : {3ull, 11ull}) {
      cfg.seed = seed;
      ScenarioTreeCip tree = generate_cip_tree(cfg);
      CHECK_NOTHROW(tree.validate());
      CHECK(serialize(tree) == serialize(generate_cip_tree(cfg)));
      // Leaf probabilities form a distribution.
      double total = 0;
      for (int leaf : tree.leaves()) total += tree.absolute_prob(leaf);
      CHECK(total == doctest::Approx(1.0));
      CHECK(tree.covering_width() >= 1.0);
    }
  }
}

TEST_CASE("tree navigation helpers agree on a hand-built two-stage tree") {
  ScenarioTreeCip tree;
  tree.stages = 2;
  tree.rows = 2;
  tree.nodes.resize(3);
  tree.nodes[0] = {-1, 1.0, {{1.0, {1.0, 0.0}}, {1.0, {0.0, 1.0}}}};
  tree.nodes[1] = {0, 0.25, {{2.0, {1.0, 1.0}}}};
  tree.nodes[2] = {0, 0.75, {{3.0, {0.5, 0.5}}}};
  tree.b_by_leaf = {{1.0, 0.0}, {2.0, 1.0}};
  tree.validate();

  CHECK(tree.children(0) == std::vector<int>{1, 2});
  CHECK(tree.leaves() == std::vector<int>{1, 2});
  CHECK(tree.path_to_root(2) == std::vector<int>{0, 2});
  CHECK(tree.depth(0) == 0);
  CHECK(tree.depth(1) == 1);
  CHECK(tree.absolute_prob(2) == doctest::Approx(0.75));
  CHECK(tree.covering_width() == doctest::Approx(1.0));

  SUBCASE("leaf count must match") {
    tree.b_by_leaf.pop_back();
    CHECK_THROWS_AS(tree.validate(), ValidationError);
  }
  SUBCASE("coefficients capped at one") {
    tree.nodes[0].vars[0].column[0] = 1.5;
    CHECK_THROWS_AS(tree.validate(), ValidationError);
  }
  SUBCASE("child probabilities sum to one") {
    tree.nodes[2].prob = 0.5;
    CHECK_THROWS_AS(tree.validate(), ValidationError);
  }
}

TEST_CASE("serialized instances parse back identically") {
  GeneratorConfig cfg;
  cfg.seed = 5;
  SuflInstance inst = generate_sufl(cfg);
  LoadedInstance loaded = parse_instance(serialize(inst));
  REQUIRE(loaded.is_sufl());
  CHECK(serialize(*loaded.sufl) == serialize(inst));

  cfg.kind = InstanceKind::SetCover;
  ScenarioTreeCip tree = generate_cip_tree(cfg);
  LoadedInstance tl = parse_instance(serialize(tree));
  REQUIRE(!tl.is_sufl());
  CHECK(serialize(*tl.cip) == serialize(tree));
}

TEST_CASE("numbers given as decimal strings survive exactly") {
  std::string text = R"({
    "kind": "sufl",
    "facilities": [
      {"id": "f", "f1": "0.01", "f2_by_scenario": ["4", "4"]}
    ],
    "clients": [{"id": "a"}, {"id": "b"}],
    "distances": [[0, 1, 1], [1, 0, 2], [1, 2, 0]],
    "scenarios": [
      {"prob": "0.5", "clients": [0]},
      {"prob": "0.5", "clients": [1]}
    ]
  })";
  LoadedInstance loaded = parse_instance(text);
  REQUIRE(loaded.is_sufl());
  CHECK(loaded.sufl->facilities[0].open_stage1 == 0.01);
  CHECK(loaded.sufl->scenarios[0].prob == 0.5);
}

TEST_CASE("zero-probability scenarios are dropped with a warning") {
  SuflInstance inst = make_counterexample();
  inst.scenarios.push_back({0.0, {0, 1}});
  for (auto& f : inst.facilities) f.open_stage2.push_back(99.0);
  // Deliberately invalid as-is (probs sum to 1 but the extra scenario is
  // harmless); serialize without validating.
  std::string text = serialize(inst);
  std::vector<std::string> warnings;
  LoadedInstance loaded = parse_instance(text, &warnings);
  REQUIRE(loaded.is_sufl());
  CHECK(loaded.sufl->num_scenarios() == 2);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("zero probability") != std::string::npos);
  // The dropped scenario's stage-II cost column goes with it.
  CHECK(loaded.sufl->facilities[0].open_stage2 == std::vector<double>{4.0, 4.0});
}

TEST_CASE("malformed documents raise parse errors") {
  CHECK_THROWS_AS(parse_instance("not json"), ParseError);
  CHECK_THROWS_AS(parse_instance("{}"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"kind": "sufl"})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"kind": "mystery"})"), ParseError);
}
