#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "robustnet/errors.hpp"
#include "robustnet/instance.hpp"

namespace robustnet {

struct BruteForceOptions {
  long long limit = 1'000'000;  // enumeration work cap; exceeding it refuses
};

namespace detail {

// Shared enumeration state: exact partial costs, the incumbent, work budget.
class EnumState {
 public:
  EnumState(const Instance& inst, long long limit) : inst_(inst), limit_(limit) {
    partial_.assign(inst.num_scenarios(), Rational(0));
  }

  void charge() {
    if (++visits_ > limit_)
      throw cap_exceeded_error("brute force exceeded its enumeration cap of " +
                               std::to_string(limit_));
  }

  void push(int edge) {
    for (int xi = 0; xi < inst_.num_scenarios(); ++xi) partial_[xi] += inst_.cost(xi, edge);
    stack_.push_back(edge);
  }
  void pop() {
    const int edge = stack_.back();
    stack_.pop_back();
    for (int xi = 0; xi < inst_.num_scenarios(); ++xi) partial_[xi] -= inst_.cost(xi, edge);
  }

  Rational partial_max() const {
    Rational m = partial_[0];
    for (const Rational& c : partial_)
      if (m < c) m = c;
    return m;
  }

  // Costs only grow, so a partial max at or above the incumbent is dead.
  bool dominated() const { return best_ && !(partial_max() < *best_); }

  void offer() {
    const Rational value = partial_max();
    if (!best_ || value < *best_) {
      best_ = value;
      best_edges_ = stack_;
    }
  }

  std::optional<Rational> best() const { return best_; }
  std::vector<int> best_edges() const { return best_edges_; }

 private:
  const Instance& inst_;
  long long limit_;
  long long visits_ = 0;
  std::vector<Rational> partial_;
  std::vector<int> stack_;
  std::optional<Rational> best_;
  std::vector<int> best_edges_;
};

inline void enumerate_paths(const Instance& inst, const std::vector<std::vector<int>>& out,
                            std::vector<char>& visited, int v, EnumState& st) {
  st.charge();
  if (v == inst.target) {
    st.offer();
    return;
  }
  for (int id : out[v]) {
    const int w = inst.edges[id].head;
    if (visited[w]) continue;
    st.push(id);
    if (!st.dominated()) {
      visited[w] = 1;
      enumerate_paths(inst, out, visited, w, st);
      visited[w] = 0;
    }
    st.pop();
  }
}

// Deletion/contraction over the edge list: every edge is either taken (if it
// joins two components) or skipped (if the remaining edges can still span).
inline void enumerate_trees(const Instance& inst, int idx, int taken, DisjointSets dsu,
                            EnumState& st) {
  st.charge();
  if (taken == inst.n - 1) {
    st.offer();
    return;
  }
  if (idx >= inst.num_edges()) return;
  if (st.dominated()) return;

  // Prune: can the rest of the edge list still connect everything?
  {
    DisjointSets probe = dsu;
    int comps = inst.n - taken;
    for (int e = idx; e < inst.num_edges(); ++e)
      if (probe.unite(inst.edges[e].tail, inst.edges[e].head)) --comps;
    if (comps > 1) return;
  }

  const Edge& e = inst.edges[idx];
  DisjointSets with = dsu;
  if (with.unite(e.tail, e.head)) {
    st.push(idx);
    enumerate_trees(inst, idx + 1, taken + 1, std::move(with), st);
    st.pop();
  }
  enumerate_trees(inst, idx + 1, taken, std::move(dsu), st);
}

}  // namespace detail

// Exact min-max optimum by exhaustive enumeration: DFS over simple s-t paths
// or deletion/contraction over spanning trees. The reference oracle; it
// refuses (cap_exceeded_error) rather than answer approximately.
inline DiscreteSolution brute_force_opt(const Instance& inst, const BruteForceOptions& opts = {}) {
  detail::EnumState st(inst, opts.limit);
  if (inst.kind == Kind::shortest_path) {
    std::vector<std::vector<int>> out(inst.n);
    for (int id = 0; id < inst.num_edges(); ++id) out[inst.edges[id].tail].push_back(id);
    std::vector<char> visited(inst.n, 0);
    visited[inst.source] = 1;
    detail::enumerate_paths(inst, out, visited, inst.source, st);
    if (!st.best()) throw infeasible_error("no s-t path exists");
  } else {
    detail::enumerate_trees(inst, 0, 0, detail::DisjointSets(inst.n), st);
    if (!st.best()) throw infeasible_error("graph admits no spanning tree");
  }
  return evaluate(inst, st.best_edges());
}

}  // namespace robustnet
