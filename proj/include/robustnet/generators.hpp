#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "robustnet/errors.hpp"
#include "robustnet/instance.hpp"

namespace robustnet {

namespace detail {

// Level-0 shortest-path gap graph: two charged stages in series, each offering
// two parallel solid arcs, glued by zero-cost dashed arcs. The four scenarios
// charge one solid arc per stage.
inline Instance gap_sp_base() {
  Instance inst;
  inst.kind = Kind::shortest_path;
  inst.name = "gap_sp_r0";
  inst.n = 7;  // s a b c d g t
  inst.source = 0;
  inst.target = 6;
  inst.edges = {
      {0, 1},  // e1 s->a   solid
      {0, 2},  // e2 s->b   solid
      {1, 3},  // f1 a->c
      {2, 3},  // f2 b->c
      {3, 4},  // e3 c->d   solid
      {3, 5},  // e4 c->g   solid
      {4, 6},  // f3 d->t
      {5, 6},  // f4 g->t
  };
  const int solid[4] = {0, 1, 4, 5};
  for (int first = 0; first < 2; ++first)
    for (int second = 2; second < 4; ++second) {
      std::vector<Rational> row(8, Rational(0));
      row[solid[first]] = Rational(1);
      row[solid[second]] = Rational(1);
      inst.scenarios.push_back(std::move(row));
    }
  return inst;
}

// One recursion step: plant a fresh copy of `prev` on each solid arc of the
// base skeleton and lift the base scenarios through the Cartesian product of
// the copies' scenario sets.
inline Instance gap_sp_lift(const Instance& prev, int level) {
  const Instance base = gap_sp_base();
  const int solid[4] = {0, 1, 4, 5};

  Instance inst;
  inst.kind = Kind::shortest_path;
  inst.name = "gap_sp_r" + std::to_string(level);

  // Skeleton nodes keep ids 0..6; each copy appends its internal nodes.
  inst.n = 7;
  inst.source = 0;
  inst.target = 6;

  std::vector<int> copy_arc_offset(4, -1);
  std::vector<std::vector<int>> copy_node_map(4);
  int copy_index = 0;
  for (int b = 0; b < 8; ++b) {
    const Edge& skel = base.edges[b];
    const bool is_solid = std::find(std::begin(solid), std::end(solid), b) != std::end(solid);
    if (!is_solid) {
      inst.edges.push_back(skel);
      continue;
    }
    std::vector<int>& node_map = copy_node_map[copy_index];
    node_map.assign(prev.n, -1);
    node_map[prev.source] = skel.tail;
    node_map[prev.target] = skel.head;
    for (int v = 0; v < prev.n; ++v)
      if (node_map[v] < 0) node_map[v] = inst.n++;
    copy_arc_offset[copy_index] = static_cast<int>(inst.edges.size());
    for (const Edge& e : prev.edges) inst.edges.push_back({node_map[e.tail], node_map[e.head]});
    ++copy_index;
  }

  // Base scenario b charges solid arcs (alpha, beta); the copies planted
  // there receive scenario columns (p, q) in p-major order.
  const int charged[4][2] = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
  const int k_prev = prev.num_scenarios();
  const int m = static_cast<int>(inst.edges.size());
  for (auto [alpha, beta] : charged)
    for (int p = 0; p < k_prev; ++p)
      for (int q = 0; q < k_prev; ++q) {
        std::vector<Rational> row(m, Rational(0));
        for (int e = 0; e < prev.num_edges(); ++e) {
          row[copy_arc_offset[alpha] + e] = prev.cost(p, e);
          row[copy_arc_offset[beta] + e] = prev.cost(q, e);
        }
        inst.scenarios.push_back(std::move(row));
      }
  return inst;
}

}  // namespace detail

// Recursive shortest-path gap family: level r has integrality gap 2^(r+1).
// Refuses r > 2, where the scenario matrix stops being desk-sized.
inline Instance gen_gap_sp(int r) {
  if (r < 0 || r > 2)
    throw validation_error("gap-sp level must be between 0 and 2 (K = 4^(2^(r+1)-1) explodes)");
  Instance inst = detail::gap_sp_base();
  for (int level = 1; level <= r; ++level) inst = detail::gap_sp_lift(inst, level);

  const long long k = 1LL << (r + 1);
  long long expected_k_scen = 1;
  for (long long i = 0; i < k - 1; ++i) expected_k_scen *= 4;
  check_invariant(inst.num_scenarios() == expected_k_scen, "gap-sp scenario count mismatch");
  check_invariant(3LL * inst.num_edges() == 7 * k * k - 4, "gap-sp arc count mismatch");
  check_invariant(3LL * (inst.n - 2) == 5 * (k * k - 1), "gap-sp node count mismatch");
  inst.validate();
  return inst;
}

// Series-composition spanning-tree gap family: k hub-to-hub subgraphs, each
// with k charged solid spokes and k free dashed closers; the k^k scenarios
// charge one solid edge per subgraph. Integrality gap k.
inline Instance gen_gap_mst(int k) {
  if (k < 2 || k > 4) throw validation_error("gap-mst k must be between 2 and 4 (K = k^k)");
  Instance inst;
  inst.kind = Kind::spanning_tree;
  inst.name = "gap_mst_k" + std::to_string(k);
  inst.n = k * k + k + 1;  // hubs v_1..v_{k+1} are ids 0..k, then the spokes
  const auto spoke = [k](int i, int j) { return (k + 1) + i * k + j; };  // i, j 0-based

  std::vector<std::vector<int>> solid_edge(k, std::vector<int>(k, -1));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      solid_edge[i][j] = static_cast<int>(inst.edges.size());
      inst.edges.push_back({i, spoke(i, j)});  // solid {v_i, u^i_j}
    }
    for (int j = 0; j < k; ++j) inst.edges.push_back({spoke(i, j), i + 1});  // dashed
  }

  // Scenario per tuple (j_1..j_k), first coordinate slowest.
  std::vector<int> tuple(k, 0);
  const int m = static_cast<int>(inst.edges.size());
  while (true) {
    std::vector<Rational> row(m, Rational(0));
    for (int i = 0; i < k; ++i) row[solid_edge[i][tuple[i]]] = Rational(1);
    inst.scenarios.push_back(std::move(row));
    int pos = k - 1;
    while (pos >= 0 && tuple[pos] == k - 1) tuple[pos--] = 0;
    if (pos < 0) break;
    ++tuple[pos];
  }

  long long expected_scen = 1;
  for (int i = 0; i < k; ++i) expected_scen *= k;
  check_invariant(inst.num_scenarios() == expected_scen, "gap-mst scenario count mismatch");
  check_invariant(inst.num_edges() == 2 * k * k, "gap-mst edge count mismatch");
  // Every node except the leftmost hub touches a dashed edge.
  std::vector<char> has_dashed(inst.n, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      has_dashed[spoke(i, j)] = 1;
      has_dashed[i + 1] = 1;
    }
  for (int v = 1; v < inst.n; ++v)
    check_invariant(has_dashed[v], "gap-mst: node without incident dashed edge");
  check_invariant(!has_dashed[0], "gap-mst: leftmost hub must have no dashed edge");
  inst.validate();
  return inst;
}

// Crossing-spanning-tree adapter: each cut becomes a 0-1 scenario charging
// the edges that cross it, so min-max tree cost = max crossing.
inline Instance gen_cst(int n, const std::vector<Edge>& edges, const std::string& name,
                        const std::vector<std::vector<int>>& cuts) {
  if (cuts.empty()) throw validation_error("cst needs at least one cut", "cuts");
  Instance inst;
  inst.kind = Kind::spanning_tree;
  inst.name = name;
  inst.n = n;
  inst.edges = edges;
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    const std::string where = "cuts[" + std::to_string(c) + "]";
    if (cuts[c].empty() || static_cast<int>(cuts[c].size()) >= n)
      throw validation_error("cut must be a nonempty proper node subset", where);
    std::vector<char> in_s(n, 0);
    for (int v : cuts[c]) {
      if (v < 0 || v >= n) throw validation_error("cut node out of range", where);
      if (in_s[v]) throw validation_error("duplicate node in cut", where);
      in_s[v] = 1;
    }
    std::vector<Rational> row;
    row.reserve(edges.size());
    for (const Edge& e : edges)
      row.push_back(in_s[e.tail] != in_s[e.head] ? Rational(1) : Rational(0));
    inst.scenarios.push_back(std::move(row));
  }
  inst.validate();
  return inst;
}

enum class CostDist { milli_uniform, small_int };

struct RandomSpec {
  Kind kind = Kind::shortest_path;
  int n = 8;
  double density = 0.5;  // probability of each optional edge
  int scenarios = 4;
  std::uint64_t seed = 0;
  CostDist dist = CostDist::milli_uniform;
};

// Seed-reproducible random instances. SP builds a layered DAG with a backbone
// path (an s-t path always exists); MST plants a random spanning tree first.
inline Instance gen_random(const RandomSpec& spec) {
  if (spec.n < 2) throw validation_error("random instance needs n >= 2", "n");
  if (spec.scenarios < 1) throw validation_error("need K >= 1 scenarios", "K");
  if (spec.density < 0.0 || spec.density > 1.0)
    throw validation_error("density must lie in [0,1]", "density");

  std::mt19937_64 rng(spec.seed);
  auto pick = [&rng](int bound) { return static_cast<int>(rng() % static_cast<std::uint64_t>(bound)); };
  auto coin = [&rng](double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };

  Instance inst;
  inst.kind = spec.kind;
  inst.n = spec.n;

  if (spec.kind == Kind::shortest_path) {
    inst.source = 0;
    inst.target = spec.n - 1;
    const int internal = spec.n - 2;
    std::vector<int> order(internal);
    std::iota(order.begin(), order.end(), 1);
    for (int i = internal - 1; i > 0; --i) std::swap(order[i], order[pick(i + 1)]);

    const int width = std::max(1, static_cast<int>(std::lround(std::sqrt(std::max(1, internal)))));
    std::vector<std::vector<int>> layers;
    layers.push_back({0});
    for (int i = 0; i < internal; i += width)
      layers.push_back({order.begin() + i, order.begin() + std::min(internal, i + width)});
    layers.push_back({spec.n - 1});

    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
      inst.edges.push_back({layers[l][0], layers[l + 1][0]});  // backbone
      for (int u : layers[l])
        for (int v : layers[l + 1]) {
          if (u == layers[l][0] && v == layers[l + 1][0]) continue;
          if (coin(spec.density)) inst.edges.push_back({u, v});
        }
    }
  } else {
    std::vector<int> order(spec.n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = spec.n - 1; i > 0; --i) std::swap(order[i], order[pick(i + 1)]);
    std::set<std::pair<int, int>> present;
    for (int i = 1; i < spec.n; ++i) {
      const int u = order[i];
      const int v = order[pick(i)];
      inst.edges.push_back({u, v});
      present.insert(std::minmax(u, v));
    }
    for (int u = 0; u < spec.n; ++u)
      for (int v = u + 1; v < spec.n; ++v) {
        if (present.count({u, v})) continue;
        if (coin(spec.density)) inst.edges.push_back({u, v});
      }
  }

  for (int xi = 0; xi < spec.scenarios; ++xi) {
    std::vector<Rational> row;
    row.reserve(inst.edges.size());
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
      row.push_back(spec.dist == CostDist::milli_uniform ? Rational(pick(1001), 1000)
                                                         : Rational(pick(11)));
    inst.scenarios.push_back(std::move(row));
  }

  inst.name = std::string("random_") + kind_name(spec.kind) + "_n" + std::to_string(spec.n) + "_K" +
              std::to_string(spec.scenarios) + "_s" + std::to_string(spec.seed);
  inst.validate();
  return inst;
}

}  // namespace robustnet
