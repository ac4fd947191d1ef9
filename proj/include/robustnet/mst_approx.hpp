#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "robustnet/errors.hpp"
#include "robustnet/instance.hpp"
#include "robustnet/log.hpp"
#include "robustnet/lp_engine.hpp"
#include "robustnet/report.hpp"
#include "robustnet/rounding.hpp"

namespace robustnet {

// The multigraph H = (U, W) obtained by contracting the forest's connected
// components; self-loops vanish, parallel edges stay.
struct ContractedGraph {
  int num_components = 0;
  std::vector<int> component;                   // original node -> component id
  std::vector<int> edge_ids;                    // surviving inter-component edges
  std::vector<std::pair<int, int>> edge_comps;  // their endpoints as components
  std::vector<std::vector<int>> incident;       // component -> indices into edge_ids

  double avg_degree() const {
    return num_components == 0 ? 0.0
                               : 2.0 * static_cast<double>(edge_ids.size()) / num_components;
  }
};

inline ContractedGraph contract_components(const Instance& inst,
                                           const std::vector<int>& forest_edges,
                                           const std::vector<char>& surviving) {
  detail::DisjointSets dsu(inst.n);
  for (int id : forest_edges) dsu.unite(inst.edges[id].tail, inst.edges[id].head);

  ContractedGraph h;
  h.component.assign(inst.n, -1);
  std::vector<int> root_comp(inst.n, -1);
  for (int v = 0; v < inst.n; ++v) {
    const int root = dsu.find(v);
    if (root_comp[root] < 0) root_comp[root] = h.num_components++;
    h.component[v] = root_comp[root];
  }
  h.incident.resize(h.num_components);
  for (int e = 0; e < inst.num_edges(); ++e) {
    if (!surviving[e]) continue;
    const int a = h.component[inst.edges[e].tail];
    const int b = h.component[inst.edges[e].head];
    if (a == b) continue;  // self-loop after contraction, dropped
    const int idx = static_cast<int>(h.edge_ids.size());
    h.edge_ids.push_back(e);
    h.edge_comps.emplace_back(a, b);
    h.incident[a].push_back(idx);
    h.incident[b].push_back(idx);
  }
  return h;
}

// Greedy MIN independent set: repeatedly take a minimum-degree node (lowest
// id on ties) and delete it with its neighborhood. Degrees count parallel
// edges, which only weakens the guarantee |I| >= |U| / (1 + avg degree).
inline std::vector<int> independent_set_min(const ContractedGraph& h) {
  check_invariant(h.num_components >= 1, "independent set needs a nonempty graph");
  std::vector<char> alive(h.num_components, 1);
  auto live_degree = [&](int u) {
    long d = 0;
    for (int idx : h.incident[u]) {
      const auto [a, b] = h.edge_comps[idx];
      if (alive[a == u ? b : a]) ++d;
    }
    return d;
  };

  std::vector<int> picked;
  int remaining = h.num_components;
  while (remaining > 0) {
    int best = -1;
    long best_deg = 0;
    for (int u = 0; u < h.num_components; ++u) {
      if (!alive[u]) continue;
      const long d = live_degree(u);
      if (best < 0 || d < best_deg) {
        best = u;
        best_deg = d;
      }
    }
    picked.push_back(best);
    alive[best] = 0;
    --remaining;
    for (int idx : h.incident[best]) {
      const auto [a, b] = h.edge_comps[idx];
      const int other = a == best ? b : a;
      if (alive[other]) {
        alive[other] = 0;
        --remaining;
      }
    }
  }

  const double wei_bound = h.num_components / (1.0 + h.avg_degree());
  check_invariant(static_cast<double>(picked.size()) >= wei_bound - 1e-9,
                  "MIN heuristic fell below the |U|/(1+avg degree) bound");
  return picked;
}

struct MstConfig {
  double support_eps = 1e-9;
  int extra_rounds = 8;  // cap is 4*ceil(log2 n) + extra_rounds
};

// Deterministic min-max spanning tree: select-items rounding seeds a forest,
// then contraction + MIN independent set + representative rounding grows it
// to a tree.
inline std::pair<DiscreteSolution, RunReport> solve_mst_deterministic(const Instance& inst,
                                                                      const MstConfig& config = {}) {
  check_invariant(inst.kind == Kind::spanning_tree, "solve_mst_deterministic needs MST kind");
  const auto t0 = std::chrono::steady_clock::now();

  RunReport report;
  report.algorithm = "mst-det";

  auto [l_star, fractional] = minimize_l(inst);
  report.l_star = l_star;

  std::vector<char> surviving(inst.num_edges(), 0);
  std::vector<int> surviving_ids;
  for (int e = 0; e < inst.num_edges(); ++e)
    if (fractional.x[e] > config.support_eps) {
      surviving[e] = 1;
      surviving_ids.push_back(e);
    }

  // Round 0: select-items with p = n - 1 over the surviving support.
  GroupedFractional si;
  si.mode = GroupingMode::select_items;
  si.groups = {surviving_ids};
  si.x = fractional.x;
  si.p = inst.n - 1;
  si.bound = l_star;
  SelectionOutcome seed_round = round_si_deterministic(si, inst.scenarios);

  detail::DisjointSets forest_dsu(inst.n);
  std::vector<int> forest;
  std::vector<int> round0;
  for (int e : seed_round.chosen)
    if (forest_dsu.unite(inst.edges[e].tail, inst.edges[e].head)) {
      forest.push_back(e);
      round0.push_back(e);
    }
  report.round_selections.push_back(round0);
  int components = inst.n - static_cast<int>(forest.size());
  report.round_stats.push_back({{"components_after", static_cast<double>(components)},
                                {"selected", static_cast<double>(round0.size())}});

  const int round_cap =
      4 * static_cast<int>(std::ceil(std::log2(std::max(2, inst.n)))) + config.extra_rounds;
  while (components > 1) {
    if (report.rounds >= round_cap)
      throw infeasible_error("mst-det exceeded its round cap of " + std::to_string(round_cap) +
                             "; the independent-set expansion assumption failed");

    ContractedGraph h = contract_components(inst, forest, surviving);
    check_invariant(h.num_components == components, "contraction component count mismatch");
    std::vector<int> ind = independent_set_min(h);

    GroupedFractional gf;
    gf.mode = GroupingMode::representative_selection;
    gf.bound = l_star;
    gf.x.assign(inst.num_edges(), 0.0);
    std::vector<char> used_edge(inst.num_edges(), 0);
    for (int u : ind) {
      std::vector<int> group;
      double mass = 0.0;
      for (int idx : h.incident[u]) {
        const int e = h.edge_ids[idx];
        check_invariant(!used_edge[e], "independent components must give disjoint edge groups");
        used_edge[e] = 1;
        group.push_back(e);
        mass += fractional.x[e];
      }
      check_invariant(mass >= 0.99, "component cut carries fractional mass " +
                                        std::to_string(mass) + " < 0.99");
      for (int e : group) gf.x[e] = fractional.x[e] / mass;
      gf.groups.push_back(std::move(group));
    }

    SelectionOutcome picked = round_rs_deterministic(gf, inst.scenarios);
    for (int e : picked.chosen) {
      check_invariant(forest_dsu.unite(inst.edges[e].tail, inst.edges[e].head),
                      "representative rounding closed a cycle");
      forest.push_back(e);
    }
    components -= static_cast<int>(picked.chosen.size());

    std::vector<int> chosen_sorted = picked.chosen;
    std::sort(chosen_sorted.begin(), chosen_sorted.end());
    report.round_selections.push_back(std::move(chosen_sorted));
    report.round_stats.push_back(
        {{"components_before", static_cast<double>(h.num_components)},
         {"avg_degree", h.avg_degree()},
         {"independent_set", static_cast<double>(ind.size())},
         {"components_after", static_cast<double>(components)}});
    ++report.rounds;
  }

  DiscreteSolution sol = evaluate(inst, forest);
  report.max_cost = sol.max_cost;
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(sol), std::move(report)};
}

// Coin-flip configuration for the randomized solver. Paper mode draws
// k_hat = ceil((40 + gamma) ln n) and is allowed a single shot; practical
// mode uses the caller's k_hat and retries with fresh seeds.
struct CoinConfig {
  enum class Mode { paper, practical };
  Mode mode = Mode::paper;
  double gamma = 1.0;
  int practical_k = 8;
  int max_retries = 0;
  std::uint64_t seed = 0;
};

struct RandomizedMstResult {
  std::optional<DiscreteSolution> solution;  // empty: all attempts disconnected
  RunReport report;
};

// Randomized min-max spanning tree: include each surviving edge after k_hat
// x_e-coin flips (at least one head), return a min-max-greedy spanning tree
// of the included subgraph if connected.
inline RandomizedMstResult solve_mst_randomized(const Instance& inst, const CoinConfig& coin) {
  check_invariant(inst.kind == Kind::spanning_tree, "solve_mst_randomized needs MST kind");
  const auto t0 = std::chrono::steady_clock::now();

  RandomizedMstResult out;
  RunReport& report = out.report;
  report.algorithm = "mst-rand";
  report.rng_seed = coin.seed;

  const double n = inst.n;
  const double k_scen = inst.num_scenarios();
  if (k_scen > n * n * n * n)
    log::info("mst-rand: K exceeds n^4; the poly(n) scenario assumption is stretched");

  int k_hat;
  int attempts;
  if (coin.mode == CoinConfig::Mode::paper) {
    if (coin.gamma < 0.0) throw validation_error("gamma must be nonnegative", "gamma");
    k_hat = static_cast<int>(std::ceil((40.0 + coin.gamma) * std::log(n)));
    if (!(k_hat > std::log(2.0 * n * n * k_scen)))
      throw validation_error(
          "gamma too small: paper mode needs ceil((40+gamma) ln n) > ln(2 n^2 K)", "gamma");
    attempts = 1;
  } else {
    if (coin.practical_k < 1) throw validation_error("practical k must be >= 1", "practical-k");
    k_hat = coin.practical_k;
    attempts = 1 + std::max(0, coin.max_retries);
  }
  report.metrics["k_hat"] = k_hat;

  auto [l_star, fractional] = minimize_l(inst);
  report.l_star = l_star;

  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::mt19937_64 rng(coin.seed + static_cast<std::uint64_t>(attempt));
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<int> included;
    for (int e = 0; e < inst.num_edges(); ++e) {
      const double x = std::clamp(fractional.x[e], 0.0, 1.0);
      if (x <= 0.0) continue;
      const double p_include = 1.0 - std::pow(1.0 - x, k_hat);
      if (uniform() < p_include) included.push_back(e);
    }
    report.round_selections.push_back(included);
    ++report.rounds;

    detail::DisjointSets dsu(inst.n);
    int components = inst.n;
    for (int e : included)
      if (dsu.unite(inst.edges[e].tail, inst.edges[e].head)) --components;
    if (components > 1) continue;

    // Spanning tree of the included subgraph: Kruskal by max scenario cost,
    // ties by edge id.
    std::vector<std::pair<Rational, int>> order;
    order.reserve(included.size());
    for (int e : included) order.emplace_back(inst.max_scenario_cost(e), e);
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) {
                return a.first < b.first || (a.first == b.first && a.second < b.second);
              });
    detail::DisjointSets tree_dsu(inst.n);
    std::vector<int> tree;
    for (const auto& [cost, e] : order)
      if (tree_dsu.unite(inst.edges[e].tail, inst.edges[e].head)) tree.push_back(e);

    DiscreteSolution sol = evaluate(inst, tree);
    report.max_cost = sol.max_cost;
    report.metrics["attempt"] = attempt;
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.solution = std::move(sol);
    return out;
  }

  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;  // every attempt left the graph disconnected
}

}  // namespace robustnet
