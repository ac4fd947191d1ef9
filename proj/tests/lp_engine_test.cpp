#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "robustnet/brute_force.hpp"
#include "robustnet/generators.hpp"
#include "robustnet/lp_engine.hpp"

using namespace robustnet;

namespace {

Instance forced_edge() {
  Instance inst;
  inst.kind = Kind::shortest_path;
  inst.name = "forced";
  inst.n = 2;
  inst.edges = {{0, 1}};
  inst.scenarios = {{Rational(3)}, {Rational(7)}};
  inst.source = 0;
  inst.target = 1;
  inst.validate();
  return inst;
}

Instance zero_cost_triangle() {
  Instance inst;
  inst.kind = Kind::spanning_tree;
  inst.name = "triangle";
  inst.n = 3;
  inst.edges = {{0, 1}, {1, 2}, {0, 2}};
  inst.scenarios = {{Rational(0), Rational(0), Rational(0)}};
  inst.validate();
  return inst;
}

}  // namespace

TEST_CASE("edge_filter selects exactly the affordable edges") {
  Instance inst = forced_edge();
  CHECK(edge_filter(inst, Rational(0)).empty());
  CHECK(edge_filter(inst, Rational(7)) == std::vector<int>{0});
  CHECK(edge_filter(inst, Rational(6)).empty());

  Instance gap = gen_gap_mst(2);
  CHECK(edge_filter(gap, Rational(1)).size() == 8);  // solid costs in {0,1}, dashed 0
  CHECK(edge_filter(gap, Rational(0)).size() == 4);  // only the dashed edges survive L=0
}

TEST_CASE("SP model shape and feasibility thresholds") {
  SECTION("two-node model has K scenario rows plus the terminal pair") {
    Instance inst = forced_edge();
    LpProblem<double> prob = build_sp_model(inst, Rational(7));
    CHECK(prob.model.num_vars == 1);
    CHECK(prob.model.rows.size() == 2 + 2);  // 2 scenarios, out(s)=1, in(t)=1
    CHECK(solve_feasibility(prob).has_value());
  }
  SECTION("gap level 0 is feasible at L=1, infeasible just below (exact)") {
    Instance gap = gen_gap_sp(0);
    LpProblem<Rational> at_one = build_sp_model<Rational>(gap, Rational(1));
    auto x = solve_feasibility(at_one);
    REQUIRE(x.has_value());
    // certificate check: every scenario cost <= 1 exactly
    for (int xi = 0; xi < gap.num_scenarios(); ++xi) {
      Rational total(0);
      for (int e = 0; e < gap.num_edges(); ++e) total += gap.cost(xi, e) * (*x)[e];
      CHECK(total <= Rational(1));
    }
    LpProblem<Rational> below = build_sp_model<Rational>(gap, Rational(9, 10));
    CHECK(!solve_feasibility(below).has_value());
    LpProblem<double> half = build_sp_model(gap, Rational(1, 2));
    CHECK(!solve_feasibility(half).has_value());
  }
}

TEST_CASE("MST model with lazy spanning cuts") {
  SECTION("zero-cost triangle is feasible at L=0") {
    Instance tri = zero_cost_triangle();
    LpProblem<double> prob = build_mst_model(tri, Rational(0));
    auto x = solve_feasibility(prob);
    REQUIRE(x.has_value());
    double total = 0.0;
    for (double v : *x) total += v;
    CHECK_THAT(total, Catch::Matchers::WithinAbs(2.0, 1e-7));
    CHECK(separate_spanning_cuts(tri, *x).status == SeparationResult::Status::all_satisfied);
  }
  SECTION("gap instances are feasible at L=1") {
    for (int k : {2, 3}) {
      Instance gap = gen_gap_mst(k);
      LpProblem<double> prob = build_mst_model(gap, Rational(1));
      auto x = solve_feasibility(prob);
      REQUIRE(x.has_value());
      CHECK(separate_spanning_cuts(gap, *x).status == SeparationResult::Status::all_satisfied);
    }
  }
  SECTION("the hand certificate x* = (1/k solid, 1 dashed) satisfies all cuts") {
    Instance gap = gen_gap_mst(2);
    std::vector<double> x(gap.num_edges(), 1.0);
    for (int e : {0, 1, 4, 5}) x[e] = 0.5;
    CHECK(separate_spanning_cuts(gap, x).status == SeparationResult::Status::all_satisfied);
  }
}

TEST_CASE("exact solve_feasibility rejects L = 1/2 on the level-0 gap") {
  Instance gap = gen_gap_sp(0);
  LpProblem<Rational> prob = build_sp_model<Rational>(gap, Rational(1, 2));
  CHECK(!solve_feasibility(prob).has_value());
}

TEST_CASE("the cut-generation cap raises a distinct error") {
  // dumbbell: two K4 cliques joined by one bridge; the first LP basis
  // concentrates mass inside the cliques, so several cuts are required
  Instance inst;
  inst.kind = Kind::spanning_tree;
  inst.name = "dumbbell";
  inst.n = 8;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) inst.edges.push_back({u, v});
  for (int u = 4; u < 8; ++u)
    for (int v = u + 1; v < 8; ++v) inst.edges.push_back({u, v});
  inst.edges.push_back({3, 4});
  inst.scenarios.assign(1, std::vector<Rational>(13, Rational(0)));
  inst.validate();

  LpProblem<double> capped = build_mst_model(inst, Rational(0));
  CHECK_THROWS_AS(solve_feasibility(capped, 1), cut_limit_error);
  LpProblem<double> free_run = build_mst_model(inst, Rational(0));
  CHECK(solve_feasibility(free_run).has_value());
}

TEST_CASE("exact mode refuses models beyond 64 edges") {
  Instance big = gen_random({Kind::spanning_tree, 14, 0.9, 2, 8});
  REQUIRE(big.num_edges() > 64);
  CHECK_THROWS_AS(minimize_l_exact(big), invariant_error);
}

TEST_CASE("solve_feasibility with an empty constraint set returns the lower bounds") {
  LpProblem<double> prob;
  prob.edge_vars = {prob.model.add_var(0.25, 1.0), prob.model.add_var(0.5, 2.0)};
  auto x = solve_feasibility(prob);
  REQUIRE(x.has_value());
  CHECK_THAT((*x)[0], Catch::Matchers::WithinAbs(0.25, 1e-12));
  CHECK_THAT((*x)[1], Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("minimize_l on the named fixtures") {
  SECTION("forced edge") {
    auto [l, fs] = minimize_l(forced_edge());
    CHECK_THAT(l, Catch::Matchers::WithinAbs(7.0, 1e-9));
    CHECK_THAT(fs.x[0], Catch::Matchers::WithinAbs(1.0, 1e-9));
    CHECK(fs.tight_scenarios == std::vector<int>{1});
  }
  SECTION("SP gap level 0, double and exact") {
    Instance gap = gen_gap_sp(0);
    auto [l, fs] = minimize_l(gap);
    CHECK_THAT(l, Catch::Matchers::WithinAbs(1.0, 1e-7));
    auto [lx, xr] = minimize_l_exact(gap);
    CHECK(lx == Rational(1));
    // exact certificate: max scenario cost is exactly 1
    Rational worst(0);
    for (int xi = 0; xi < gap.num_scenarios(); ++xi) {
      Rational total(0);
      for (int e = 0; e < gap.num_edges(); ++e) total += gap.cost(xi, e) * xr[e];
      if (worst < total) worst = total;
    }
    CHECK(worst == Rational(1));
  }
  SECTION("MST gaps k=2,3 have exact L* = 1") {
    for (int k : {2, 3}) {
      auto [lx, xr] = minimize_l_exact(gen_gap_mst(k));
      CHECK(lx == Rational(1));
    }
  }
  SECTION("no s-t path raises NoFeasibleL") {
    Instance inst;
    inst.kind = Kind::shortest_path;
    inst.name = "cut off";
    inst.n = 3;
    inst.edges = {{1, 0}};  // nothing reaches t
    inst.scenarios = {{Rational(1)}};
    inst.source = 0;
    inst.target = 2;
    inst.validate();
    CHECK_THROWS_AS(minimize_l(inst), infeasible_error);
  }
}

TEST_CASE("minimize_l is minimal: LP just below L* is infeasible") {
  std::mt19937_64 rng(1414);
  int checked = 0;
  for (int trial = 0; trial < 8; ++trial) {
    RandomSpec spec;
    spec.kind = trial % 2 == 0 ? Kind::shortest_path : Kind::spanning_tree;
    spec.n = 7;
    spec.density = 0.5;
    spec.scenarios = 4;
    spec.seed = rng();
    Instance inst = gen_random(spec);
    auto [l_star, fs] = minimize_l(inst);
    if (l_star <= 1e-6) continue;  // nothing below zero to probe
    const Rational below = Rational::from_double_exact(l_star * (1.0 - 1e-4));
    LpProblem<double> prob = inst.kind == Kind::shortest_path ? build_sp_model(inst, below)
                                                              : build_mst_model(inst, below);
    INFO(inst.name << " L*=" << l_star);
    CHECK(!solve_feasibility(prob).has_value());
    ++checked;
  }
  CHECK(checked >= 4);
}

TEST_CASE("LP(L) feasibility is monotone in L") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 6; ++trial) {
    RandomSpec spec;
    spec.kind = trial % 2 == 0 ? Kind::shortest_path : Kind::spanning_tree;
    spec.n = 7;
    spec.density = 0.5;
    spec.scenarios = 4;
    spec.seed = rng();
    Instance inst = gen_random(spec);
    auto [l_star, fs] = minimize_l(inst);
    for (double bump : {1.001, 1.1, 2.0}) {
      const Rational probe = Rational::from_double_exact(l_star * bump + 1e-6);
      LpProblem<double> prob = inst.kind == Kind::shortest_path ? build_sp_model(inst, probe)
                                                                : build_mst_model(inst, probe);
      CHECK(solve_feasibility(prob).has_value());
    }
  }
}

TEST_CASE("double minimize_l tracks the exact-rational value") {
  // exact mode is meant for small-integer (gap-style) data; denominator-heavy
  // costs overflow its 64-bit rationals by design, so the cross-check sticks
  // to int costs
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 10; ++trial) {
    RandomSpec spec;
    spec.kind = trial % 2 == 0 ? Kind::shortest_path : Kind::spanning_tree;
    spec.n = 6 + static_cast<int>(rng() % 3);
    spec.density = 0.4;
    spec.scenarios = 3 + static_cast<int>(rng() % 4);
    spec.seed = rng();
    spec.dist = CostDist::small_int;
    Instance inst = gen_random(spec);
    if (inst.num_edges() > 64) continue;
    auto [ld, fs] = minimize_l(inst);
    auto [lx, xr] = minimize_l_exact(inst);
    INFO(inst.name);
    CHECK_THAT(ld, Catch::Matchers::WithinAbs(lx.to_double(), 1e-6));
  }
}

TEST_CASE("all-zero costs give L* = 0 in both modes") {
  Instance tri = zero_cost_triangle();
  auto [ld, fs] = minimize_l(tri);
  CHECK(ld == 0.0);
  auto [lx, xr] = minimize_l_exact(tri);
  CHECK(lx == Rational(0));
}

TEST_CASE("L* lower-bounds the exact discrete optimum on small fixtures") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 6; ++trial) {
    RandomSpec spec;
    spec.kind = trial % 2 == 0 ? Kind::shortest_path : Kind::spanning_tree;
    spec.n = 7;
    spec.density = 0.6;
    spec.scenarios = 5;
    spec.seed = rng();
    Instance inst = gen_random(spec);
    auto [l_star, fs] = minimize_l(inst);
    DiscreteSolution opt = brute_force_opt(inst);
    CHECK(l_star <= opt.max_cost.to_double() + 1e-7);
  }
}
