#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "robustnet/errors.hpp"
#include "robustnet/rational.hpp"

namespace robustnet {

enum class Kind { shortest_path, spanning_tree };

inline const char* kind_name(Kind k) { return k == Kind::shortest_path ? "sp" : "mst"; }

// One arc (SP, tail -> head) or undirected edge (MST, endpoints a, b).
struct Edge {
  int tail = 0;
  int head = 0;
  bool operator==(const Edge&) const = default;
};

// A min-max instance: a graph, K cost scenarios, and the problem kind.
// Immutable after construction/validation; safe to share across threads.
struct Instance {
  Kind kind = Kind::shortest_path;
  std::string name;
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<Rational>> scenarios;  // K rows of length m
  int source = -1;  // SP only
  int target = -1;  // SP only

  int num_nodes() const { return n; }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_scenarios() const { return static_cast<int>(scenarios.size()); }

  const Rational& cost(int scenario, int edge) const { return scenarios[scenario][edge]; }

  // max_xi c_e^xi, the value that decides membership in E(L).
  Rational max_scenario_cost(int edge) const {
    Rational m = scenarios[0][edge];
    for (int xi = 1; xi < num_scenarios(); ++xi)
      if (m < scenarios[xi][edge]) m = scenarios[xi][edge];
    return m;
  }

  void validate() const;
};

// Edge subset (path or tree) with its exact per-scenario cost vector.
struct DiscreteSolution {
  std::vector<int> edges;  // sorted edge ids
  std::vector<Rational> per_scenario_cost;
  Rational max_cost;
};

// Fractional certificate: x in [0,1]^m with max scenario cost <= bound.
struct FractionalSolution {
  std::vector<double> x;
  double bound = 0.0;
  std::vector<int> tight_scenarios;  // scenarios xi with sum c^xi x == bound (within tol)
};

namespace detail {

// Union-find over node ids; used by validation, evaluation and contraction.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }
  // Returns false if already joined.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

inline bool connected_by(int n, const std::vector<Edge>& edges, const std::vector<int>& ids) {
  if (n <= 1) return true;
  DisjointSets dsu(n);
  int components = n;
  for (int id : ids)
    if (dsu.unite(edges[id].tail, edges[id].head)) --components;
  return components == 1;
}

}  // namespace detail

inline void Instance::validate() const {
  if (n <= 0) throw validation_error("node count must be positive", "n");
  if (scenarios.empty()) throw validation_error("at least one scenario required", "scenarios");
  const int m = num_edges();
  for (int i = 0; i < m; ++i) {
    const Edge& e = edges[i];
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
      throw validation_error("dangling endpoint", "edges[" + std::to_string(i) + "]");
    if (e.tail == e.head)
      throw validation_error("self-loop rejected", "edges[" + std::to_string(i) + "]");
  }
  for (int xi = 0; xi < num_scenarios(); ++xi) {
    if (static_cast<int>(scenarios[xi].size()) != m)
      throw validation_error("scenario length != edge count", "scenarios[" + std::to_string(xi) + "]");
    for (int e = 0; e < m; ++e)
      if (scenarios[xi][e].sign() < 0)
        throw validation_error("negative cost",
                               "scenarios[" + std::to_string(xi) + "][" + std::to_string(e) + "]");
  }
  if (kind == Kind::shortest_path) {
    if (source < 0 || source >= n) throw validation_error("source out of range", "s");
    if (target < 0 || target >= n) throw validation_error("target out of range", "t");
    if (source == target) throw validation_error("source equals target", "s");
  } else {
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    if (!detail::connected_by(n, edges, all))
      throw validation_error("underlying graph is not connected", "edges");
  }
}

namespace detail {

// Checks that `ids` forms a simple source-target path. Returns a witness on failure.
inline void check_simple_path(const Instance& inst, const std::vector<int>& ids) {
  std::vector<int> out_arc(inst.n, -1), in_deg(inst.n, 0);
  for (int id : ids) {
    const Edge& e = inst.edges[id];
    if (out_arc[e.tail] != -1)
      throw infeasible_set_error("not a path: branching at node " + std::to_string(e.tail),
                                 {out_arc[e.tail], id}, {e.tail});
    out_arc[e.tail] = id;
    if (++in_deg[e.head] > 1) {
      std::vector<int> both;
      for (int other : ids)
        if (inst.edges[other].head == e.head) both.push_back(other);
      throw infeasible_set_error("not a path: two arcs enter node " + std::to_string(e.head), both,
                                 {e.head});
    }
  }
  // Walk from the source along the unique out-arcs.
  std::vector<int> walked;
  std::vector<char> seen(inst.n, 0);
  int v = inst.source;
  seen[v] = 1;
  while (out_arc[v] != -1) {
    int id = out_arc[v];
    walked.push_back(id);
    v = inst.edges[id].head;
    if (seen[v]) {
      // Arcs from the first visit of v onwards close a cycle.
      std::vector<int> cyc;
      int u = v;
      for (int arc : walked) {
        if (!cyc.empty() || inst.edges[arc].tail == u) cyc.push_back(arc);
      }
      throw infeasible_set_error("not a simple path: cycle through node " + std::to_string(v), cyc,
                                 {v});
    }
    seen[v] = 1;
  }
  if (v != inst.target)
    throw infeasible_set_error("walk from source ends at node " + std::to_string(v) +
                                   ", not the target",
                               walked, {v});
  if (walked.size() != ids.size()) {
    std::vector<char> used(inst.num_edges(), 0);
    for (int id : walked) used[id] = 1;
    std::vector<int> stray;
    for (int id : ids)
      if (!used[id]) stray.push_back(id);
    throw infeasible_set_error("edge set is not a single path: disconnected arcs remain", stray);
  }
}

// Checks that `ids` forms a spanning tree. Returns a witness on failure.
inline void check_spanning_tree(const Instance& inst, const std::vector<int>& ids) {
  if (static_cast<int>(ids.size()) != inst.n - 1)
    throw infeasible_set_error("edge set has " + std::to_string(ids.size()) + " edges, tree needs " +
                                   std::to_string(inst.n - 1),
                               ids);
  DisjointSets dsu(inst.n);
  // adjacency over accepted edges, for cycle witness recovery
  std::vector<std::vector<std::pair<int, int>>> adj(inst.n);
  for (int id : ids) {
    const Edge& e = inst.edges[id];
    if (!dsu.unite(e.tail, e.head)) {
      // Path tail..head in the current forest plus this edge is the cycle.
      std::vector<int> prev_edge(inst.n, -1), prev_node(inst.n, -1);
      std::queue<int> q;
      q.push(e.tail);
      std::vector<char> vis(inst.n, 0);
      vis[e.tail] = 1;
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [w, eid] : adj[u])
          if (!vis[w]) {
            vis[w] = 1;
            prev_edge[w] = eid;
            prev_node[w] = u;
            q.push(w);
          }
      }
      std::vector<int> cyc{id};
      for (int v = e.head; v != e.tail; v = prev_node[v]) cyc.push_back(prev_edge[v]);
      std::sort(cyc.begin(), cyc.end());
      throw infeasible_set_error("edge set contains a cycle", cyc);
    }
    adj[e.tail].push_back({e.head, id});
    adj[e.head].push_back({e.tail, id});
  }
  for (int v = 0; v < inst.n; ++v)
    if (dsu.find(v) != dsu.find(0))
      throw infeasible_set_error("edge set does not span: node " + std::to_string(v) +
                                     " disconnected",
                                 ids, {v});
}

}  // namespace detail

// Exact per-scenario cost of a feasible edge set. Throws infeasible_set_error
// (with a witness) when the set is not a path / spanning tree of the
// instance's kind.
inline DiscreteSolution evaluate(const Instance& inst, std::vector<int> edge_set) {
  for (int id : edge_set)
    if (id < 0 || id >= inst.num_edges())
      throw validation_error("edge id out of range: " + std::to_string(id));
  std::sort(edge_set.begin(), edge_set.end());
  if (std::adjacent_find(edge_set.begin(), edge_set.end()) != edge_set.end())
    throw validation_error("duplicate edge id in edge set");

  if (inst.kind == Kind::shortest_path)
    detail::check_simple_path(inst, edge_set);
  else
    detail::check_spanning_tree(inst, edge_set);

  DiscreteSolution sol;
  sol.edges = std::move(edge_set);
  sol.per_scenario_cost.reserve(inst.num_scenarios());
  for (int xi = 0; xi < inst.num_scenarios(); ++xi) {
    Rational total(0);
    for (int id : sol.edges) total += inst.cost(xi, id);
    sol.per_scenario_cost.push_back(total);
  }
  sol.max_cost = *std::max_element(sol.per_scenario_cost.begin(), sol.per_scenario_cost.end());
  return sol;
}

}  // namespace robustnet
