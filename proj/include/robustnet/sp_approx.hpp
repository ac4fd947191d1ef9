#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <vector>

#include "robustnet/errors.hpp"
#include "robustnet/flow_graph.hpp"
#include "robustnet/instance.hpp"
#include "robustnet/lp_engine.hpp"
#include "robustnet/report.hpp"
#include "robustnet/rounding.hpp"

namespace robustnet {

// The working graph of Algorithm 1: the acyclic support of x* after series
// reduction, with 0/1 arc lengths (selected arcs have length 0) and distance
// labels from the source.
struct LabeledDag {
  const Instance* graph = nullptr;  // reduced SP instance
  std::vector<char> selected;       // l_e == 0
  std::vector<int> dist;            // d(v); unreachable() when no path

  static constexpr int unreachable() { return std::numeric_limits<int>::max(); }

  explicit LabeledDag(const Instance& reduced)
      : graph(&reduced), selected(reduced.num_edges(), 0) {
    recompute_labels();
  }

  int arc_length(int id) const { return selected[id] ? 0 : 1; }

  // 0/1 Dijkstra (deque BFS) from the source, rebuilt from scratch.
  void recompute_labels() {
    const Instance& g = *graph;
    std::vector<std::vector<int>> out(g.n);
    for (int id = 0; id < g.num_edges(); ++id) out[g.edges[id].tail].push_back(id);
    dist.assign(g.n, unreachable());
    std::deque<int> dq{g.source};
    dist[g.source] = 0;
    while (!dq.empty()) {
      const int v = dq.front();
      dq.pop_front();
      for (int id : out[v]) {
        const int w = g.edges[id].head;
        const int nd = dist[v] + arc_length(id);
        if (nd < dist[w]) {
          dist[w] = nd;
          if (arc_length(id) == 0)
            dq.push_front(w);
          else
            dq.push_back(w);
        }
      }
    }
  }

  int path_length() const { return dist[graph->target]; }
};

struct CutsetFamily {
  std::vector<std::vector<int>> sets;  // arc ids per distance layer
};

// The l_P arc-disjoint cut-sets E_i = {(u,v) : d(u) = i-1, d(v) = i}. No
// selected arc can qualify: a length-0 arc never gains a distance level.
inline CutsetFamily extract_cutsets(const LabeledDag& dag, const std::vector<double>& x) {
  const Instance& g = *dag.graph;
  const int lp = dag.path_length();
  check_invariant(lp >= 1 && lp != LabeledDag::unreachable(),
                  "cut-set extraction needs a reachable target");
  CutsetFamily fam;
  fam.sets.assign(lp, {});
  for (int id = 0; id < g.num_edges(); ++id) {
    const int du = dag.dist[g.edges[id].tail];
    const int dv = dag.dist[g.edges[id].head];
    if (du == LabeledDag::unreachable() || dv == LabeledDag::unreachable()) continue;
    if (dv >= 1 && dv <= lp && du == dv - 1) {
      check_invariant(!dag.selected[id], "selected arc fell into a cut-set");
      fam.sets[dv - 1].push_back(id);
    }
  }
  for (int i = 0; i < lp; ++i) {
    double mass = 0.0;
    for (int id : fam.sets[i]) mass += x[id];
    check_invariant(mass >= 0.99,
                    "cut-set " + std::to_string(i + 1) + " carries fractional mass " +
                        std::to_string(mass) + " < 0.99; upstream flow is broken");
  }
  return fam;
}

struct SpConfig {
  double support_eps = 1e-9;
};

namespace detail {

// Shortest s-t path under the current labels with the lexicographically
// smallest arc-id sequence: walk greedily over arcs that stay on some
// shortest path, picking the lowest id each step.
inline std::vector<int> lex_shortest_path(const LabeledDag& dag) {
  const Instance& g = *dag.graph;
  std::vector<std::vector<int>> in(g.n);
  for (int id = 0; id < g.num_edges(); ++id) in[g.edges[id].head].push_back(id);
  std::vector<int> dist_to(g.n, LabeledDag::unreachable());
  std::deque<int> dq{g.target};
  dist_to[g.target] = 0;
  while (!dq.empty()) {
    const int v = dq.front();
    dq.pop_front();
    for (int id : in[v]) {
      const int u = g.edges[id].tail;
      const int nd = dist_to[v] + dag.arc_length(id);
      if (nd < dist_to[u]) {
        dist_to[u] = nd;
        if (dag.arc_length(id) == 0)
          dq.push_front(u);
        else
          dq.push_back(u);
      }
    }
  }
  const int total = dag.path_length();
  check_invariant(dist_to[g.source] == total, "forward/backward label mismatch");

  std::vector<std::vector<int>> out(g.n);
  for (int id = 0; id < g.num_edges(); ++id) out[g.edges[id].tail].push_back(id);
  std::vector<int> path;
  int v = g.source;
  while (v != g.target) {
    int next_arc = -1;
    for (int id : out[v]) {
      const int w = g.edges[id].head;
      if (dist_to[w] == LabeledDag::unreachable()) continue;
      if (dag.dist[v] + dag.arc_length(id) + dist_to[w] == total &&
          dag.dist[v] + dag.arc_length(id) == dag.dist[w]) {
        if (next_arc < 0 || id < next_arc) next_arc = id;
      }
    }
    check_invariant(next_arc >= 0, "shortest-path walk got stuck");
    path.push_back(next_arc);
    v = g.edges[next_arc].head;
    check_invariant(static_cast<int>(path.size()) <= g.num_edges(), "shortest-path walk cycled");
  }
  return path;
}

inline int forest_components(int n, const Instance& g, const std::vector<char>& selected) {
  DisjointSets dsu(n);
  int comps = n;
  for (int id = 0; id < g.num_edges(); ++id)
    if (selected[id]) {
      check_invariant(dsu.unite(g.edges[id].tail, g.edges[id].head),
                      "selected arcs closed a cycle");
      --comps;
    }
  return comps;
}

}  // namespace detail

// Deterministic min-max shortest path: LP bound, cycle removal and series
// reduction, then rounds of cut-set extraction + representative rounding
// until a path of at most l_hat unselected arcs exists.
inline std::pair<DiscreteSolution, RunReport> solve_sp(const Instance& inst,
                                                       const SpConfig& config = {}) {
  check_invariant(inst.kind == Kind::shortest_path, "solve_sp needs an SP instance");
  const auto t0 = std::chrono::steady_clock::now();

  RunReport report;
  report.algorithm = "sp-alg1";

  auto [l_star, fractional] = minimize_l(inst);
  report.l_star = l_star;

  std::vector<double> x = fractional.x;
  for (double& v : x)
    if (v <= config.support_eps) v = 0.0;
  x = remove_cycles(inst, x, config.support_eps);
  SeriesReduction red = series_reduce(inst, x, config.support_eps);

  const int k_scen = inst.num_scenarios();
  const int l_hat =
      std::max(1, static_cast<int>(std::ceil(std::sqrt(inst.n * log_ratio(k_scen)))));
  const int round_cap = (inst.n + l_hat - 1) / l_hat;
  report.metrics["l_hat"] = l_hat;
  report.metrics["reduced_n"] = red.reduced.n;
  report.metrics["reduced_m"] = red.reduced.num_edges();

  LabeledDag dag(red.reduced);
  while (true) {
    dag.recompute_labels();
    const int lp = dag.path_length();
    check_invariant(lp != LabeledDag::unreachable(), "support graph lost s-t reachability");
    if (lp <= l_hat) break;
    check_invariant(report.rounds < round_cap,
                    "round count exceeded ceil(n / l_hat) = " + std::to_string(round_cap));

    CutsetFamily cutsets = extract_cutsets(dag, red.x);

    GroupedFractional gf;
    gf.mode = GroupingMode::representative_selection;
    gf.groups = cutsets.sets;
    gf.bound = l_star;
    gf.x.assign(red.reduced.num_edges(), 0.0);
    for (const auto& set : cutsets.sets) {
      double mass = 0.0;
      for (int id : set) mass += red.x[id];
      for (int id : set) gf.x[id] = red.x[id] / mass;
    }

    const int comps_before = detail::forest_components(red.reduced.n, red.reduced, dag.selected);
    SelectionOutcome picked = round_rs_deterministic(gf, red.reduced.scenarios);
    std::vector<int> original_ids;
    for (int id : picked.chosen) {
      dag.selected[id] = 1;
      original_ids.insert(original_ids.end(), red.arc_origin[id].begin(),
                          red.arc_origin[id].end());
    }
    const int comps_after = detail::forest_components(red.reduced.n, red.reduced, dag.selected);
    check_invariant(comps_before - comps_after == lp,
                    "selected arcs must merge exactly l_P components");

    std::sort(original_ids.begin(), original_ids.end());
    report.round_selections.push_back(std::move(original_ids));
    report.round_stats.push_back({{"l_P", static_cast<double>(lp)},
                                  {"components_before", static_cast<double>(comps_before)},
                                  {"components_after", static_cast<double>(comps_after)}});
    ++report.rounds;
  }

  const std::vector<int> reduced_path = detail::lex_shortest_path(dag);
  int unselected = 0;
  std::vector<int> path_ids;
  for (int id : reduced_path) {
    if (!dag.selected[id]) ++unselected;
    path_ids.insert(path_ids.end(), red.arc_origin[id].begin(), red.arc_origin[id].end());
  }
  check_invariant(unselected <= l_hat, "returned path has more than l_hat unselected arcs");
  report.metrics["final_l_P"] = unselected;

  DiscreteSolution sol = evaluate(inst, path_ids);
  check_invariant(sol.max_cost.to_double() >= l_star - 1e-9,
                  "discrete cost dropped below the LP lower bound");
  report.max_cost = sol.max_cost;
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(sol), std::move(report)};
}

// The folklore K-approximation: an optimal path for the scenario-averaged
// costs.
inline DiscreteSolution solve_sp_average_baseline(const Instance& inst) {
  check_invariant(inst.kind == Kind::shortest_path, "baseline needs an SP instance");
  const int k_scen = inst.num_scenarios();
  std::vector<double> avg(inst.num_edges(), 0.0);
  for (int e = 0; e < inst.num_edges(); ++e) {
    for (int xi = 0; xi < k_scen; ++xi) avg[e] += inst.cost(xi, e).to_double();
    avg[e] /= k_scen;
  }

  std::vector<std::vector<int>> out(inst.n);
  for (int id = 0; id < inst.num_edges(); ++id) out[inst.edges[id].tail].push_back(id);
  std::vector<double> dist(inst.n, std::numeric_limits<double>::infinity());
  std::vector<int> via(inst.n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[inst.source] = 0.0;
  pq.push({0.0, inst.source});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (int id : out[v]) {
      const int w = inst.edges[id].head;
      const double nd = d + avg[id];
      if (nd < dist[w] || (nd == dist[w] && via[w] >= 0 && id < via[w])) {
        dist[w] = nd;
        via[w] = id;
        pq.push({nd, w});
      }
    }
  }
  if (via[inst.target] < 0 && inst.target != inst.source)
    throw infeasible_error("no s-t path exists");
  std::vector<int> path;
  for (int v = inst.target; v != inst.source; v = inst.edges[via[v]].tail)
    path.push_back(via[v]);
  return evaluate(inst, path);
}

}  // namespace robustnet
