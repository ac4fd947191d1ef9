#pragma once

#include <algorithm>
#include <tuple>
#include <vector>

#include "robustnet/errors.hpp"

namespace robustnet {

struct MinCutResult {
  double value = 0.0;
  std::vector<int> side;  // the node set S of the best cut, sorted
};

// Stoer-Wagner global minimum cut on an undirected weighted graph given as
// (u, v, w) triples with w >= 0; parallel edges accumulate. Dense O(n^3),
// deterministic: maximum-adjacency ties and merge order resolve by lowest
// node id, and the first phase attaining the minimum wins.
inline MinCutResult stoer_wagner_min_cut(int n, const std::vector<std::tuple<int, int, double>>& edges) {
  check_invariant(n >= 2, "min cut needs at least two nodes");
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (const auto& [u, v, wt] : edges) {
    if (u == v) continue;
    w[u][v] += wt;
    w[v][u] += wt;
  }

  std::vector<std::vector<int>> group(n);
  for (int v = 0; v < n; ++v) group[v] = {v};
  std::vector<char> merged(n, 0);

  MinCutResult best;
  best.value = -1.0;

  for (int phase = 0; phase < n - 1; ++phase) {
    std::vector<char> in_a(n, 0);
    std::vector<double> adj(n, 0.0);
    int prev = -1, last = -1;
    const int active = n - phase;
    for (int step = 0; step < active; ++step) {
      int pick = -1;
      for (int v = 0; v < n; ++v)
        if (!merged[v] && !in_a[v] && (pick < 0 || adj[v] > adj[pick])) pick = v;
      in_a[pick] = 1;
      prev = last;
      last = pick;
      for (int v = 0; v < n; ++v)
        if (!merged[v] && !in_a[v]) adj[v] += w[pick][v];
    }
    const double cut_of_phase = adj[last];
    if (best.value < 0.0 || cut_of_phase < best.value) {
      best.value = cut_of_phase;
      best.side = group[last];
    }
    // merge last into prev
    merged[last] = 1;
    group[prev].insert(group[prev].end(), group[last].begin(), group[last].end());
    for (int v = 0; v < n; ++v) {
      if (merged[v] || v == prev) continue;
      w[prev][v] += w[last][v];
      w[v][prev] = w[prev][v];
    }
  }
  std::sort(best.side.begin(), best.side.end());
  return best;
}

}  // namespace robustnet
