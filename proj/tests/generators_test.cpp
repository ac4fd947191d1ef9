#include <catch2/catch_amalgamated.hpp>

#include "robustnet/brute_force.hpp"
#include "robustnet/generators.hpp"
#include "robustnet/json_io.hpp"

using namespace robustnet;

TEST_CASE("gap-sp sizes follow the recursion formulas") {
  struct Expect {
    int r, n, m, k;
  };
  for (const Expect& e : {Expect{0, 7, 8, 4}, Expect{1, 27, 36, 64}}) {
    Instance inst = gen_gap_sp(e.r);
    CHECK(inst.n == e.n);
    CHECK(inst.num_edges() == e.m);
    CHECK(inst.num_scenarios() == e.k);
  }
  // level 2: k = 8, K = 4^7, m = (7*64-4)/3 = 148, n = 2 + 5*63/3 = 107
  Instance big = gen_gap_sp(2);
  CHECK(big.n == 107);
  CHECK(big.num_edges() == 148);
  CHECK(big.num_scenarios() == 16384);
  CHECK_THROWS_AS(gen_gap_sp(3), validation_error);
  CHECK_THROWS_AS(gen_gap_sp(-1), validation_error);
}

TEST_CASE("gap-sp scenarios charge exactly two solid stages per row") {
  Instance inst = gen_gap_sp(0);
  for (int xi = 0; xi < inst.num_scenarios(); ++xi) {
    Rational total(0);
    for (int e = 0; e < inst.num_edges(); ++e) total += inst.cost(xi, e);
    CHECK(total == Rational(2));
  }
  Instance lifted = gen_gap_sp(1);
  for (int xi = 0; xi < lifted.num_scenarios(); ++xi) {
    Rational total(0);
    for (int e = 0; e < lifted.num_edges(); ++e) total += lifted.cost(xi, e);
    CHECK(total == Rational(4));  // each charged copy contributes a 2-unit row
  }
}

TEST_CASE("gap-mst sizes and structure") {
  struct Expect {
    int k, n, m, scen;
  };
  for (const Expect& e : {Expect{2, 7, 8, 4}, Expect{3, 13, 18, 27}, Expect{4, 21, 32, 256}}) {
    Instance inst = gen_gap_mst(e.k);
    CHECK(inst.n == e.n);
    CHECK(inst.num_edges() == e.m);
    CHECK(inst.num_scenarios() == e.scen);
    // every scenario has exactly k unit entries
    for (int xi = 0; xi < inst.num_scenarios(); ++xi) {
      Rational total(0);
      for (int ed = 0; ed < inst.num_edges(); ++ed) total += inst.cost(xi, ed);
      CHECK(total == Rational(e.k));
    }
  }
  CHECK_THROWS_AS(gen_gap_mst(1), validation_error);
  CHECK_THROWS_AS(gen_gap_mst(5), validation_error);
}

TEST_CASE("cst adapter turns cuts into 0-1 scenarios") {
  SECTION("single cut isolating a leaf of a tree forces crossing 1") {
    // path 0-1-2-3
    std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}};
    Instance inst = gen_cst(4, edges, "path-cst", {{3}});
    DiscreteSolution opt = brute_force_opt(inst);
    CHECK(opt.max_cost == Rational(1));
  }
  SECTION("all singleton cuts on K4 give the minimum max degree") {
    std::vector<Edge> edges;
    for (int u = 0; u < 4; ++u)
      for (int v = u + 1; v < 4; ++v) edges.push_back({u, v});
    std::vector<std::vector<int>> cuts = {{0}, {1}, {2}, {3}};
    Instance inst = gen_cst(4, edges, "k4-cst", cuts);
    CHECK(inst.num_scenarios() == 4);
    // every spanning tree of K4 has max degree >= 2 and a path achieves 2
    DiscreteSolution opt = brute_force_opt(inst);
    CHECK(opt.max_cost == Rational(2));
  }
  SECTION("rejects bad cut lists") {
    std::vector<Edge> edges = {{0, 1}, {1, 2}};
    CHECK_THROWS_AS(gen_cst(3, edges, "x", {}), validation_error);
    CHECK_THROWS_AS(gen_cst(3, edges, "x", {{0, 1, 2}}), validation_error);
    CHECK_THROWS_AS(gen_cst(3, edges, "x", {{7}}), validation_error);
  }
}

TEST_CASE("gen_random is reproducible and honors density 0") {
  RandomSpec spec;
  spec.kind = Kind::shortest_path;
  spec.n = 10;
  spec.density = 0.35;
  spec.scenarios = 4;
  spec.seed = 42;
  CHECK(serialize_instance(gen_random(spec)) == serialize_instance(gen_random(spec)));
  spec.seed = 43;
  CHECK(serialize_instance(gen_random(spec)) != serialize_instance(gen_random({spec.kind, 10, 0.35, 4, 42})));

  SECTION("density 0 leaves only the backbone") {
    RandomSpec lean;
    lean.kind = Kind::spanning_tree;
    lean.n = 8;
    lean.density = 0.0;
    lean.scenarios = 2;
    lean.seed = 5;
    CHECK(gen_random(lean).num_edges() == 7);

    lean.kind = Kind::shortest_path;
    Instance sp = gen_random(lean);
    // backbone is a path across the layers; every node layer gets one arc
    DiscreteSolution path = brute_force_opt(sp);
    CHECK(path.edges.size() == static_cast<std::size_t>(sp.num_edges()));
  }
}

TEST_CASE("gen_random validation sweep across 100 seeds") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomSpec spec;
    spec.kind = seed % 2 == 0 ? Kind::shortest_path : Kind::spanning_tree;
    spec.n = 10;
    spec.density = 0.5;
    spec.scenarios = 8;
    spec.seed = seed;
    CHECK_NOTHROW(gen_random(spec));  // gen_random validates before returning
  }
  CHECK_THROWS_AS(gen_random({Kind::shortest_path, 1, 0.5, 4, 0}), validation_error);
  CHECK_THROWS_AS(gen_random({Kind::shortest_path, 5, 1.5, 4, 0}), validation_error);
  RandomSpec bad;
  bad.scenarios = 0;
  CHECK_THROWS_AS(gen_random(bad), validation_error);
}
