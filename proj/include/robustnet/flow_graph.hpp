#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "robustnet/errors.hpp"
#include "robustnet/instance.hpp"

namespace robustnet {

namespace detail {

// A directed cycle in the support graph {e : x_e > eps}, as arc ids, or
// empty. Deterministic: adjacency in arc-id order, DFS roots in node order.
inline std::vector<int> find_support_cycle(const Instance& inst, const std::vector<double>& x,
                                           double eps) {
  std::vector<std::vector<int>> out(inst.n);
  for (int id = 0; id < inst.num_edges(); ++id)
    if (x[id] > eps) out[inst.edges[id].tail].push_back(id);

  std::vector<char> color(inst.n, 0);  // 0 white, 1 on stack, 2 done
  std::vector<int> stack_arcs;
  std::vector<int> result;

  auto dfs = [&](auto&& self, int v) -> bool {
    color[v] = 1;
    for (int id : out[v]) {
      const int w = inst.edges[id].head;
      if (color[w] == 1) {
        // arcs from w's position on the stack, plus the closing arc
        std::size_t i = 0;
        while (i < stack_arcs.size() && inst.edges[stack_arcs[i]].tail != w) ++i;
        result.assign(stack_arcs.begin() + i, stack_arcs.end());
        result.push_back(id);
        return true;
      }
      if (color[w] == 0) {
        stack_arcs.push_back(id);
        if (self(self, w)) return true;
        stack_arcs.pop_back();
      }
    }
    color[v] = 2;
    return false;
  };

  for (int v = 0; v < inst.n; ++v)
    if (color[v] == 0 && dfs(dfs, v)) return result;
  return {};
}

inline double max_scenario_cost_of(const Instance& inst, const std::vector<double>& x) {
  double worst = 0.0;
  for (int xi = 0; xi < inst.num_scenarios(); ++xi) {
    double total = 0.0;
    for (int e = 0; e < inst.num_edges(); ++e)
      if (x[e] > 0.0) total += inst.cost(xi, e).to_double() * x[e];
    worst = std::max(worst, total);
  }
  return worst;
}

}  // namespace detail

// Cancels flow around directed cycles until the support is acyclic. Costs
// are nonnegative, so every cancellation weakly lowers each scenario cost;
// that is asserted rather than assumed.
inline std::vector<double> remove_cycles(const Instance& inst, std::vector<double> x,
                                         double support_eps = 1e-9) {
  const double before = detail::max_scenario_cost_of(inst, x);
  while (true) {
    std::vector<int> cycle = detail::find_support_cycle(inst, x, support_eps);
    if (cycle.empty()) break;
    double delta = x[cycle.front()];
    for (int id : cycle) delta = std::min(delta, x[id]);
    for (int id : cycle) {
      x[id] -= delta;
      if (x[id] <= support_eps) x[id] = 0.0;
    }
  }
  const double after = detail::max_scenario_cost_of(inst, x);
  check_invariant(after <= before + 1e-9, "cycle cancellation increased the max scenario cost");
  return x;
}

// Result of collapsing series arcs (internal nodes with in-degree 1 and
// out-degree 1 on the support): a smaller SP instance plus the expansion
// map back to original arc ids.
struct SeriesReduction {
  Instance reduced;
  std::vector<double> x;                     // per reduced arc
  std::vector<std::vector<int>> arc_origin;  // reduced arc -> original arcs, path order
  std::vector<int> node_map;                 // original node -> reduced node, -1 if dropped
};

// Precondition: x is an acyclic s-t flow on `inst` (run remove_cycles first).
// Arcs with x <= support_eps are dropped; series chains merge into single
// arcs with per-scenario costs added and the common flow value carried over.
inline SeriesReduction series_reduce(const Instance& inst, const std::vector<double>& x,
                                     double support_eps = 1e-9) {
  struct Arc {
    int tail, head;
    std::vector<Rational> cost;  // K entries
    double flow;
    std::vector<int> origin;
    bool alive = true;
  };
  const int K = inst.num_scenarios();
  std::vector<Arc> arcs;
  for (int id = 0; id < inst.num_edges(); ++id) {
    if (x[id] <= support_eps) continue;
    Arc a;
    a.tail = inst.edges[id].tail;
    a.head = inst.edges[id].head;
    a.cost.reserve(K);
    for (int xi = 0; xi < K; ++xi) a.cost.push_back(inst.cost(xi, id));
    a.flow = x[id];
    a.origin = {id};
    arcs.push_back(std::move(a));
  }

  std::vector<std::vector<int>> in(inst.n), out(inst.n);
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
    out[arcs[i].tail].push_back(i);
    in[arcs[i].head].push_back(i);
  }

  auto live_count = [&](const std::vector<int>& ids) {
    int c = 0;
    for (int i : ids)
      if (arcs[i].alive) ++c;
    return c;
  };
  auto live_one = [&](const std::vector<int>& ids) {
    for (int i : ids)
      if (arcs[i].alive) return i;
    return -1;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < inst.n; ++v) {
      if (v == inst.source || v == inst.target) continue;
      if (live_count(in[v]) != 1 || live_count(out[v]) != 1) continue;
      const int fi = live_one(in[v]);
      const int gi = live_one(out[v]);
      Arc& f = arcs[fi];
      Arc& g = arcs[gi];
      check_invariant(f.tail != g.head, "series reduction would create a self-loop");
      check_invariant(std::fabs(f.flow - g.flow) <= 1e-6,
                      "series arcs carry different flow at node " + std::to_string(v));
      Arc merged;
      merged.tail = f.tail;
      merged.head = g.head;
      merged.cost.reserve(K);
      for (int xi = 0; xi < K; ++xi) merged.cost.push_back(f.cost[xi] + g.cost[xi]);
      merged.flow = f.flow;
      merged.origin = f.origin;
      merged.origin.insert(merged.origin.end(), g.origin.begin(), g.origin.end());
      f.alive = g.alive = false;
      const int mi = static_cast<int>(arcs.size());
      arcs.push_back(std::move(merged));
      out[arcs[mi].tail].push_back(mi);
      in[arcs[mi].head].push_back(mi);
      changed = true;
    }
  }

  // Compact: keep nodes incident to live arcs plus the terminals.
  std::vector<char> keep(inst.n, 0);
  keep[inst.source] = keep[inst.target] = 1;
  for (const Arc& a : arcs)
    if (a.alive) keep[a.tail] = keep[a.head] = 1;

  SeriesReduction res;
  res.node_map.assign(inst.n, -1);
  int next_id = 0;
  for (int v = 0; v < inst.n; ++v)
    if (keep[v]) res.node_map[v] = next_id++;

  res.reduced.kind = Kind::shortest_path;
  res.reduced.name = inst.name + "/reduced";
  res.reduced.n = next_id;
  res.reduced.source = res.node_map[inst.source];
  res.reduced.target = res.node_map[inst.target];
  res.reduced.scenarios.assign(K, {});
  for (const Arc& a : arcs) {
    if (!a.alive) continue;
    res.reduced.edges.push_back({res.node_map[a.tail], res.node_map[a.head]});
    for (int xi = 0; xi < K; ++xi) res.reduced.scenarios[xi].push_back(a.cost[xi]);
    res.x.push_back(a.flow);
    res.arc_origin.push_back(a.origin);
  }
  return res;
}

}  // namespace robustnet
