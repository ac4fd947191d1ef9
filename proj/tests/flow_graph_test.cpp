#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "robustnet/flow_graph.hpp"
#include "robustnet/generators.hpp"
#include "robustnet/lp_engine.hpp"

using namespace robustnet;

namespace {

Instance path_with_two_cycle() {
  // s -> a -> t plus a zero-cost 2-cycle a -> b -> a, all at flow 0.3
  Instance inst;
  inst.kind = Kind::shortest_path;
  inst.name = "cycle demo";
  inst.n = 4;  // s=0 a=1 b=2 t=3
  inst.edges = {{0, 1}, {1, 3}, {1, 2}, {2, 1}};
  inst.scenarios = {{Rational(1), Rational(1), Rational(0), Rational(0)}};
  inst.source = 0;
  inst.target = 3;
  inst.validate();
  return inst;
}

bool support_is_acyclic(const Instance& inst, const std::vector<double>& x) {
  // Kahn's algorithm over the support
  std::vector<int> indeg(inst.n, 0);
  std::vector<std::vector<int>> out(inst.n);
  for (int e = 0; e < inst.num_edges(); ++e)
    if (x[e] > 1e-9) {
      out[inst.edges[e].tail].push_back(inst.edges[e].head);
      ++indeg[inst.edges[e].head];
    }
  std::vector<int> order;
  for (int v = 0; v < inst.n; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int w : out[order[i]])
      if (--indeg[w] == 0) order.push_back(w);
  return order.size() == static_cast<std::size_t>(inst.n);
}

double max_cost_of(const Instance& inst, const std::vector<double>& x) {
  double worst = 0.0;
  for (int xi = 0; xi < inst.num_scenarios(); ++xi) {
    double t = 0.0;
    for (int e = 0; e < inst.num_edges(); ++e) t += inst.cost(xi, e).to_double() * x[e];
    worst = std::max(worst, t);
  }
  return worst;
}

}  // namespace

TEST_CASE("remove_cycles cancels the two-cycle and keeps the path flow") {
  Instance inst = path_with_two_cycle();
  std::vector<double> x = {1.0, 1.0, 0.3, 0.3};
  std::vector<double> fixed = remove_cycles(inst, x);
  CHECK(fixed[0] == 1.0);
  CHECK(fixed[1] == 1.0);
  CHECK(fixed[2] == 0.0);
  CHECK(fixed[3] == 0.0);
}

TEST_CASE("remove_cycles is the identity on acyclic support") {
  Instance inst = gen_gap_sp(0);
  std::vector<double> x(inst.num_edges(), 0.5);
  CHECK(remove_cycles(inst, x) == x);
}

TEST_CASE("remove_cycles property: acyclic output, never costlier") {
  std::mt19937_64 rng(31337);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  int cyclic_inputs = 0;
  for (int trial = 0; trial < 20; ++trial) {
    // a layered random DAG plus random back arcs to force cycles
    RandomSpec spec;
    spec.kind = Kind::shortest_path;
    spec.n = 8;
    spec.density = 0.6;
    spec.scenarios = 3;
    spec.seed = rng();
    Instance inst = gen_random(spec);
    std::vector<Edge> extra = inst.edges;
    const int base_m = inst.num_edges();
    for (int b = 0; b < 4; ++b) {
      const Edge& e = inst.edges[static_cast<int>(rng() % base_m)];
      if (e.tail == inst.source || e.head == inst.target) continue;
      extra.push_back({e.head, e.tail});
    }
    Instance aug = inst;
    aug.edges = extra;
    for (auto& row : aug.scenarios)
      while (row.size() < extra.size()) row.push_back(Rational(0));
    aug.validate();

    std::vector<double> x;
    for (std::size_t e = 0; e < extra.size(); ++e) x.push_back(uniform());
    if (!support_is_acyclic(aug, x)) ++cyclic_inputs;

    const double before = max_cost_of(aug, x);
    std::vector<double> out = remove_cycles(aug, x);
    CHECK(support_is_acyclic(aug, out));
    CHECK(max_cost_of(aug, out) <= before + 1e-9);

    // cancellation must not disturb node balances (cycles are circulations)
    for (int v = 0; v < aug.n; ++v) {
      double balance_before = 0.0, balance_after = 0.0;
      for (int e = 0; e < aug.num_edges(); ++e) {
        const double sign = aug.edges[e].tail == v ? 1.0 : aug.edges[e].head == v ? -1.0 : 0.0;
        balance_before += sign * x[e];
        balance_after += sign * out[e];
      }
      CHECK_THAT(balance_after, Catch::Matchers::WithinAbs(balance_before, 1e-9));
    }
  }
  CHECK(cyclic_inputs >= 5);  // the generator must actually produce cycles
}

TEST_CASE("series_reduce collapses a three-arc path into one arc") {
  Instance inst;
  inst.kind = Kind::shortest_path;
  inst.name = "chain";
  inst.n = 4;
  inst.edges = {{0, 1}, {1, 2}, {2, 3}};
  inst.scenarios = {{Rational(1), Rational(2), Rational(4)},
                    {Rational(1, 2), Rational(1, 3), Rational(1, 6)}};
  inst.source = 0;
  inst.target = 3;
  inst.validate();

  SeriesReduction red = series_reduce(inst, {0.8, 0.8, 0.8});
  REQUIRE(red.reduced.num_edges() == 1);
  CHECK(red.reduced.n == 2);
  CHECK(red.reduced.cost(0, 0) == Rational(7));
  CHECK(red.reduced.cost(1, 0) == Rational(1));
  CHECK(red.x[0] == 0.8);
  CHECK(red.arc_origin[0] == std::vector<int>{0, 1, 2});
  red.reduced.validate();
}

TEST_CASE("series_reduce is the identity when no node qualifies") {
  // diamond with a chord: both internal nodes branch
  Instance inst;
  inst.kind = Kind::shortest_path;
  inst.name = "diamond";
  inst.n = 4;  // s=0 a=1 b=2 t=3
  inst.edges = {{0, 1}, {0, 2}, {1, 3}, {1, 2}, {2, 3}};
  inst.scenarios = {{Rational(1), Rational(1), Rational(1), Rational(1), Rational(1)}};
  inst.source = 0;
  inst.target = 3;
  inst.validate();
  std::vector<double> x = {0.6, 0.4, 0.5, 0.1, 0.5};
  SeriesReduction red = series_reduce(inst, x);
  REQUIRE(red.reduced.num_edges() == inst.num_edges());
  CHECK(red.reduced.n == inst.n);
  for (int e = 0; e < inst.num_edges(); ++e) {
    CHECK(red.arc_origin[e] == std::vector<int>{e});
    CHECK(red.reduced.edges[e] == inst.edges[e]);
  }
}

TEST_CASE("series_reduce collapses the level-0 gap graph to two parallel pairs") {
  Instance gap = gen_gap_sp(0);
  std::vector<double> x(gap.num_edges(), 0.5);
  SeriesReduction red = series_reduce(gap, x);
  // a, b, d, g are degree-(1,1); only s, c, t survive
  CHECK(red.reduced.n == 3);
  CHECK(red.reduced.num_edges() == 4);
  for (const auto& origin : red.arc_origin) CHECK(origin.size() == 2);
}

TEST_CASE("series_reduce preserves L* on the level-1 gap instance") {
  Instance gap = gen_gap_sp(1);
  auto [l_star, fs] = minimize_l(gap);
  CHECK_THAT(l_star, Catch::Matchers::WithinAbs(1.0, 1e-7));
  std::vector<double> x = remove_cycles(gap, fs.x);
  SeriesReduction red = series_reduce(gap, x);
  CHECK(red.reduced.num_edges() < gap.num_edges());
  auto [l_red, fs_red] = minimize_l(red.reduced);
  CHECK_THAT(l_red, Catch::Matchers::WithinAbs(1.0, 1e-6));
}
