#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "robustnet/errors.hpp"
#include "robustnet/rational.hpp"

namespace robustnet {

enum class GroupingMode { select_items, representative_selection };

// A fractional solution to the selection relaxation: one group with
// sum x = p (select-items) or p groups each with sum x = 1 (representatives).
// `bound` is a certified budget: every scenario's fractional cost is <= bound.
struct GroupedFractional {
  std::vector<std::vector<int>> groups;  // disjoint element ids
  std::vector<double> x;                 // per element
  GroupingMode mode = GroupingMode::representative_selection;
  int p = 0;  // select-items cardinality; representatives use groups.size()
  double bound = 0.0;
};

struct SelectionOutcome {
  std::vector<int> chosen;
  std::vector<Rational> per_scenario_cost;
  Rational max_cost;
  std::vector<double> phi_trace;  // estimator value before/after each decision
};

using CostMatrix = std::vector<std::vector<Rational>>;  // K rows, one entry per element

// ln K / ln ln K with K clamped to 3, the recurring quality scale.
inline double log_ratio(int k) {
  const double kk = static_cast<double>(std::max(k, 3));
  return std::log(kk) / std::log(std::log(kk));
}

namespace detail {

inline void validate_grouping(const GroupedFractional& gf, const CostMatrix& costs) {
  if (costs.empty()) throw validation_error("cost matrix needs at least one scenario");
  const int elements = static_cast<int>(gf.x.size());
  for (const auto& row : costs)
    if (static_cast<int>(row.size()) != elements)
      throw validation_error("cost row length != element count");
  std::vector<char> seen(elements, 0);
  for (const auto& g : gf.groups) {
    if (g.empty()) throw validation_error("empty group");
    for (int e : g) {
      if (e < 0 || e >= elements) throw validation_error("group references unknown element");
      if (seen[e]) throw validation_error("groups are not disjoint");
      seen[e] = 1;
    }
  }
  if (gf.mode == GroupingMode::select_items) {
    if (gf.groups.size() != 1) throw validation_error("select-items expects a single group");
    if (gf.p < 0 || gf.p > static_cast<int>(gf.groups[0].size()))
      throw validation_error("cardinality p out of range");
  }
}

// exp(t * c / L) per scenario and element, the moment factors of the
// pessimistic estimator. Exponents are clamped to keep the products finite.
inline std::vector<std::vector<double>> moment_factors(const GroupedFractional& gf,
                                                       const CostMatrix& costs, double t) {
  const int K = static_cast<int>(costs.size());
  const int elements = static_cast<int>(gf.x.size());
  std::vector<std::vector<double>> ef(K, std::vector<double>(elements, 1.0));
  for (int xi = 0; xi < K; ++xi)
    for (int e = 0; e < elements; ++e) {
      const double arg = std::min(500.0, t * costs[xi][e].to_double() / gf.bound);
      ef[xi][e] = std::exp(arg);
    }
  return ef;
}

inline SelectionOutcome finish_selection(std::vector<int> chosen, const CostMatrix& costs,
                                         std::vector<double> trace) {
  SelectionOutcome out;
  out.chosen = std::move(chosen);
  out.phi_trace = std::move(trace);
  out.per_scenario_cost.reserve(costs.size());
  for (const auto& row : costs) {
    Rational total(0);
    for (int e : out.chosen) total += row[e];
    out.per_scenario_cost.push_back(total);
  }
  out.max_cost = *std::max_element(out.per_scenario_cost.begin(), out.per_scenario_cost.end());
  return out;
}

inline int argmin_max_cost(const std::vector<int>& group, const CostMatrix& costs) {
  int best = group.front();
  auto max_cost = [&](int e) {
    Rational m = costs[0][e];
    for (const auto& row : costs)
      if (m < row[e]) m = row[e];
    return m;
  };
  Rational best_cost = max_cost(best);
  for (int e : group) {
    Rational c = max_cost(e);
    if (c < best_cost || (c == best_cost && e < best)) {
      best = e;
      best_cost = c;
    }
  }
  return best;
}

inline void assert_non_increasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    check_invariant(trace[i] <= trace[i - 1] * (1.0 + 1e-9) + 1e-12,
                    "pessimistic estimator increased along the decision sequence");
}

}  // namespace detail

// Derandomized representative selection: conditional expectations on the
// pessimistic estimator Phi = sum_xi prod_i m_i(xi), where an undecided
// group i contributes m_i(xi) = sum_{e in E_i} x_e exp(t c_e^xi / L) and a
// decided one its realized factor. Groups are processed in index order and
// each picks the element minimizing Phi; ties go to the lowest element id.
inline SelectionOutcome round_rs_deterministic(const GroupedFractional& gf,
                                               const CostMatrix& costs) {
  detail::validate_grouping(gf, costs);
  const int K = static_cast<int>(costs.size());
  const int num_groups = static_cast<int>(gf.groups.size());

  if (gf.bound <= 0.0) {
    // Degenerate estimator: fall back to the min-max-cost element per group.
    std::vector<int> chosen;
    for (const auto& g : gf.groups) chosen.push_back(detail::argmin_max_cost(g, costs));
    return detail::finish_selection(std::move(chosen), costs, {});
  }

  const double t = std::log(1.0 + log_ratio(K));
  const auto ef = detail::moment_factors(gf, costs, t);

  // Per-group x renormalized to sum exactly 1.
  std::vector<std::vector<double>> weight(num_groups);
  for (int g = 0; g < num_groups; ++g) {
    double total = 0.0;
    for (int e : gf.groups[g]) total += std::max(0.0, gf.x[e]);
    weight[g].reserve(gf.groups[g].size());
    for (int e : gf.groups[g])
      weight[g].push_back(total > 0.0 ? std::max(0.0, gf.x[e]) / total
                                      : 1.0 / static_cast<double>(gf.groups[g].size()));
  }

  std::vector<int> chosen(num_groups, -1);
  auto phi = [&]() {
    double total = 0.0;
    for (int xi = 0; xi < K; ++xi) {
      double prod = 1.0;
      for (int g = 0; g < num_groups; ++g) {
        if (chosen[g] >= 0) {
          prod *= ef[xi][chosen[g]];
        } else {
          double m = 0.0;
          for (std::size_t k = 0; k < gf.groups[g].size(); ++k)
            m += weight[g][k] * ef[xi][gf.groups[g][k]];
          prod *= m;
        }
      }
      total += prod;
    }
    return total;
  };

  std::vector<double> trace{phi()};
  for (int g = 0; g < num_groups; ++g) {
    int best = -1;
    double best_phi = 0.0;
    for (int e : gf.groups[g]) {
      chosen[g] = e;
      const double value = phi();
      if (best < 0 || value < best_phi) {
        best = e;
        best_phi = value;
      }
    }
    chosen[g] = best;
    trace.push_back(best_phi);
  }
  detail::assert_non_increasing(trace);
  return detail::finish_selection(std::move(chosen), costs, std::move(trace));
}

// Derandomized select-items: the same estimator over independent per-element
// inclusion, each element decided in/out by conditional expectations, then a
// cardinality repair pass brings the selection to exactly p elements.
inline SelectionOutcome round_si_deterministic(const GroupedFractional& gf,
                                               const CostMatrix& costs) {
  detail::validate_grouping(gf, costs);
  if (gf.mode != GroupingMode::select_items)
    throw validation_error("round_si_deterministic expects select-items mode");
  const std::vector<int>& elems = gf.groups[0];
  const int K = static_cast<int>(costs.size());

  if (gf.bound <= 0.0) {
    std::vector<std::pair<Rational, int>> order;
    for (int e : elems) {
      Rational m = costs[0][e];
      for (const auto& row : costs)
        if (m < row[e]) m = row[e];
      order.emplace_back(m, e);
    }
    std::sort(order.begin(), order.end());
    std::vector<int> chosen;
    for (int i = 0; i < gf.p; ++i) chosen.push_back(order[i].second);
    std::sort(chosen.begin(), chosen.end());
    return detail::finish_selection(std::move(chosen), costs, {});
  }

  const double t = std::log(1.0 + log_ratio(K));
  const auto ef = detail::moment_factors(gf, costs, t);

  // -1 undecided, 0 out, 1 in
  std::vector<int> status(gf.x.size(), -1);
  auto phi = [&]() {
    double total = 0.0;
    for (int xi = 0; xi < K; ++xi) {
      double prod = 1.0;
      for (int e : elems) {
        if (status[e] == 1)
          prod *= ef[xi][e];
        else if (status[e] == -1)
          prod *= (1.0 - gf.x[e]) + gf.x[e] * ef[xi][e];
      }
      total += prod;
    }
    return total;
  };

  std::vector<double> trace{phi()};
  int taken = 0;
  for (int e : elems) {
    if (gf.x[e] >= 1.0 - 1e-9) {
      status[e] = 1;  // zero-probability branch "out" is never taken
    } else if (gf.x[e] <= 1e-9) {
      status[e] = 0;
    } else {
      status[e] = 1;
      const double phi_in = phi();
      status[e] = 0;
      const double phi_out = phi();
      if (phi_in < phi_out || (phi_in == phi_out && gf.x[e] >= 0.5)) status[e] = 1;
    }
    if (status[e] == 1) ++taken;
    trace.push_back(phi());
  }
  detail::assert_non_increasing(trace);

  // Cardinality repair: drop the element freeing the most estimator mass /
  // add the one costing the least, until exactly p remain.
  while (taken > gf.p) {
    int best = -1;
    double best_phi = 0.0;
    for (int e : elems) {
      if (status[e] != 1) continue;
      status[e] = 0;
      const double value = phi();
      status[e] = 1;
      if (best < 0 || value < best_phi) {
        best = e;
        best_phi = value;
      }
    }
    status[best] = 0;
    --taken;
    trace.push_back(best_phi);
  }
  while (taken < gf.p) {
    int best = -1;
    double best_phi = 0.0;
    for (int e : elems) {
      if (status[e] != 0) continue;
      status[e] = 1;
      const double value = phi();
      status[e] = 0;
      if (best < 0 || value < best_phi) {
        best = e;
        best_phi = value;
      }
    }
    status[best] = 1;
    ++taken;
    trace.push_back(best_phi);
  }

  std::vector<int> chosen;
  for (int e : elems)
    if (status[e] == 1) chosen.push_back(e);
  std::sort(chosen.begin(), chosen.end());
  return detail::finish_selection(std::move(chosen), costs, std::move(trace));
}

// Randomized baseline for the representatives problem: samples one element
// per group with probabilities x_e, independently across groups.
inline SelectionOutcome round_rs_randomized(const GroupedFractional& gf, const CostMatrix& costs,
                                            std::uint64_t seed) {
  detail::validate_grouping(gf, costs);
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<int> chosen;
  for (const auto& g : gf.groups) {
    double total = 0.0;
    for (int e : g) total += std::max(0.0, gf.x[e]);
    const double u = uniform() * (total > 0.0 ? total : 1.0);
    double acc = 0.0;
    int pick = g.back();
    for (int e : g) {
      acc += total > 0.0 ? std::max(0.0, gf.x[e]) : 1.0 / static_cast<double>(g.size());
      if (u < acc) {
        pick = e;
        break;
      }
    }
    chosen.push_back(pick);
  }
  return detail::finish_selection(std::move(chosen), costs, {});
}

}  // namespace robustnet
