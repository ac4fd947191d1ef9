#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "robustnet/brute_force.hpp"
#include "robustnet/generators.hpp"
#include "robustnet/mst_approx.hpp"

using namespace robustnet;

namespace {

// exact maximum independent set by bitmask, for cross-checking MIN
int exact_mis(int n, const std::vector<std::pair<int, int>>& edges) {
  int best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (const auto& [u, v] : edges)
      if (((mask >> u) & 1u) && ((mask >> v) & 1u)) {
        ok = false;
        break;
      }
    if (ok) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

ContractedGraph make_contracted(int comps, const std::vector<std::pair<int, int>>& edges) {
  // Build a contracted graph directly: one original node per component,
  // surviving edges as given.
  Instance inst;
  inst.kind = Kind::spanning_tree;
  inst.name = "h";
  inst.n = comps;
  for (const auto& [u, v] : edges) inst.edges.push_back({u, v});
  // no validation: this helper only feeds contract_components
  std::vector<char> surviving(inst.num_edges(), 1);
  return contract_components(inst, {}, surviving);
}

}  // namespace

TEST_CASE("MIN independent set on pinned shapes") {
  SECTION("edgeless graph keeps every node") {
    ContractedGraph h = make_contracted(5, {});
    CHECK(independent_set_min(h) == std::vector<int>{0, 1, 2, 3, 4});
  }
  SECTION("star takes the leaves") {
    ContractedGraph h = make_contracted(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    std::vector<int> ind = independent_set_min(h);
    std::sort(ind.begin(), ind.end());
    CHECK(ind == std::vector<int>{1, 2, 3, 4});
  }
}

TEST_CASE("MIN independent set: independence and Wei bound on random graphs") {
  std::mt19937_64 rng(616);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 19);  // up to 20
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (uniform() < 0.3) edges.push_back({u, v});
    ContractedGraph h = make_contracted(n, edges);
    std::vector<int> ind = independent_set_min(h);  // asserts the Wei bound itself

    std::vector<char> in_i(n, 0);
    for (int u : ind) in_i[u] = 1;
    for (const auto& [u, v] : edges) CHECK(!(in_i[u] && in_i[v]));

    if (n <= 16) CHECK(static_cast<int>(ind.size()) <= exact_mis(n, edges));
  }
}

TEST_CASE("deterministic MST solver returns the input tree when m = n-1") {
  Instance inst = gen_random({Kind::spanning_tree, 9, 0.0, 3, 77});
  REQUIRE(inst.num_edges() == 8);
  auto [sol, report] = solve_mst_deterministic(inst);
  CHECK(sol.edges.size() == 8);
  CHECK(report.rounds == 0);  // round 0 already completes the tree
}

TEST_CASE("deterministic MST solver matches the optimum on the k=2 gap") {
  Instance gap = gen_gap_mst(2);
  auto [sol, report] = solve_mst_deterministic(gap);
  CHECK(sol.max_cost == Rational(2));
  CHECK_THAT(report.l_star, Catch::Matchers::WithinAbs(1.0, 1e-7));
}

TEST_CASE("deterministic MST solver: trees, round caps, per-round expansion") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 15; ++trial) {
    RandomSpec spec;
    spec.kind = Kind::spanning_tree;
    spec.n = 5 + static_cast<int>(rng() % 8);  // up to 12
    spec.density = 0.25 + 0.5 * static_cast<double>(rng() % 100) / 100.0;
    spec.scenarios = 1 + static_cast<int>(rng() % 16);
    spec.seed = rng();
    Instance inst = gen_random(spec);

    auto [sol, report] = solve_mst_deterministic(inst);  // evaluate() checks the tree
    try {
      DiscreteSolution opt = brute_force_opt(inst);
      CHECK(opt.max_cost <= sol.max_cost);
    } catch (const cap_exceeded_error&) {
      // dense instances can exceed the enumeration budget; the oracle
      // refuses rather than approximate, and the remaining checks stand
    }
    CHECK(report.rounds <= 4 * static_cast<int>(std::ceil(std::log2(std::max(2, inst.n)))) + 8);

    // recursion C_{k+1} <= C_k (1 - 1/alpha) with the observed alpha
    for (std::size_t r = 1; r < report.round_stats.size(); ++r) {
      const auto& st = report.round_stats[r];
      const double before = st.at("components_before");
      const double after = st.at("components_after");
      const double alpha = 1.0 + st.at("avg_degree");
      CHECK(st.at("independent_set") >= before / alpha - 1e-9);
      CHECK(after <= before * (1.0 - 1.0 / alpha) + 1e-9);
    }
  }
}

TEST_CASE("randomized MST solver includes a full-support tree with certainty") {
  Instance inst = gen_random({Kind::spanning_tree, 8, 0.0, 2, 3030});
  CoinConfig coin;
  coin.mode = CoinConfig::Mode::paper;
  coin.seed = 12345;
  RandomizedMstResult res = solve_mst_randomized(inst, coin);
  REQUIRE(res.solution.has_value());
  CHECK(res.solution->edges.size() == 7);
  CHECK(res.report.rounds == 1);
}

TEST_CASE("randomized MST solver on a 4-cycle stays connected in paper mode") {
  Instance inst;
  inst.kind = Kind::spanning_tree;
  inst.name = "c4";
  inst.n = 4;
  inst.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  inst.scenarios = {{Rational(1), Rational(1), Rational(1), Rational(1)}};
  inst.validate();
  int connected = 0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    CoinConfig coin;
    coin.mode = CoinConfig::Mode::paper;
    coin.seed = static_cast<std::uint64_t>(seed);
    if (solve_mst_randomized(inst, coin).solution) ++connected;
  }
  // the advertised guarantee is 1 - 1/(2 n^2); with k_hat = 57 coins the
  // empirical rate is simply 100%
  CHECK(connected >= static_cast<int>(seeds * (1.0 - 1.0 / (2.0 * 16.0))));
}

TEST_CASE("randomized MST solver in practical mode on the k=2 gap") {
  Instance gap = gen_gap_mst(2);
  const double n = gap.n;
  const double k_scen = gap.num_scenarios();
  const double k_hat = 8.0;
  const double threshold = k_hat + (std::exp(1.0) - 1.0) * std::sqrt(k_hat * std::log(2 * n * n * k_scen));
  int ok = 0;
  const int seeds = 200;
  for (int seed = 0; seed < seeds; ++seed) {
    CoinConfig coin;
    coin.mode = CoinConfig::Mode::practical;
    coin.practical_k = 8;
    coin.max_retries = 20;
    coin.seed = static_cast<std::uint64_t>(seed) * 7919;
    RandomizedMstResult res = solve_mst_randomized(gap, coin);
    if (!res.solution) continue;
    if (res.solution->max_cost.to_double() <= threshold * std::max(res.report.l_star, 1e-12))
      ++ok;
  }
  CHECK(ok >= static_cast<int>(0.95 * seeds));
}

TEST_CASE("deterministic MST solver is deterministic and scales to sparser, larger graphs") {
  // sparse graphs force several contraction rounds
  Instance inst = gen_random({Kind::spanning_tree, 20, 0.08, 10, 161803});
  auto [sol_a, rep_a] = solve_mst_deterministic(inst);
  auto [sol_b, rep_b] = solve_mst_deterministic(inst);
  CHECK(sol_a.edges == sol_b.edges);
  CHECK(rep_a.rounds == rep_b.rounds);
  CHECK(static_cast<int>(sol_a.edges.size()) == inst.n - 1);
}

TEST_CASE("parallel edges survive parsing, evaluation, and the solver") {
  Instance inst;
  inst.kind = Kind::spanning_tree;
  inst.name = "parallel";
  inst.n = 3;
  inst.edges = {{0, 1}, {0, 1}, {1, 2}};  // multigraph
  inst.scenarios = {{Rational(5), Rational(1), Rational(0)},
                    {Rational(0), Rational(4), Rational(1)}};
  inst.validate();
  DiscreteSolution cheap = evaluate(inst, {1, 2});
  CHECK(cheap.max_cost == Rational(5));
  CHECK_THROWS_AS(evaluate(inst, {0, 1}), infeasible_set_error);  // 2-cycle, not spanning
  auto [sol, report] = solve_mst_deterministic(inst);
  CHECK(sol.edges.size() == 2);
}

TEST_CASE("deterministic MST solver on an all-zero-cost instance") {
  Instance inst = gen_random({Kind::spanning_tree, 7, 0.5, 3, 123});
  for (auto& row : inst.scenarios)
    for (auto& c : row) c = Rational(0);
  inst.validate();
  auto [sol, report] = solve_mst_deterministic(inst);
  CHECK(sol.max_cost == Rational(0));
  CHECK(static_cast<int>(sol.edges.size()) == inst.n - 1);
}

TEST_CASE("randomized MST solver validates its configuration") {
  Instance gap = gen_gap_mst(2);
  CoinConfig coin;
  coin.gamma = -1.0;
  CHECK_THROWS_AS(solve_mst_randomized(gap, coin), validation_error);
  coin.gamma = 1.0;
  coin.mode = CoinConfig::Mode::practical;
  coin.practical_k = 0;
  CHECK_THROWS_AS(solve_mst_randomized(gap, coin), validation_error);
}
