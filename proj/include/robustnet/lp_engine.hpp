#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "robustnet/errors.hpp"
#include "robustnet/instance.hpp"
#include "robustnet/log.hpp"
#include "robustnet/mincut.hpp"
#include "robustnet/simplex.hpp"

namespace robustnet {

// The cutting-plane loop gave up before the lazy family was satisfied.
// Deliberately distinct from infeasible_error.
class cut_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LazyFamily { none, spanning_cuts };

// An LP over the instance's edge variables, plus an optional L variable and
// an optional lazily separated row family.
template <class Num>
struct LpProblem {
  LpModel<Num> model;
  const Instance* instance = nullptr;
  std::vector<int> edge_vars;  // edge id -> model variable
  int l_var = -1;              // -1 when L enters as a fixed right-hand side
  LazyFamily lazy = LazyFamily::none;
};

struct SeparationResult {
  enum class Status { all_satisfied, violated };
  Status status = Status::all_satisfied;
  std::vector<int> cut_nodes;  // S
  std::vector<int> cut_edges;  // delta(S), edge ids
  double cut_value = 0.0;
  double violation = 0.0;  // 1 - cut_value when violated
};

// E(L): edges whose cost is at most L under every scenario. Exact.
inline std::vector<int> edge_filter(const Instance& inst, const Rational& l) {
  std::vector<int> kept;
  for (int e = 0; e < inst.num_edges(); ++e)
    if (!(l < inst.max_scenario_cost(e))) kept.push_back(e);
  return kept;
}

// Minimum spanning-cut separation: the global min cut of the x-weighted
// graph. Violated when its value drops below 1 - tol.
inline SeparationResult separate_spanning_cuts(const Instance& inst, const std::vector<double>& x,
                                               double tol = 1e-7) {
  SeparationResult res;
  if (inst.n < 2) return res;
  std::vector<std::tuple<int, int, double>> wedges;
  wedges.reserve(inst.edges.size());
  for (int e = 0; e < inst.num_edges(); ++e)
    wedges.emplace_back(inst.edges[e].tail, inst.edges[e].head, std::max(0.0, x[e]));
  MinCutResult cut = stoer_wagner_min_cut(inst.n, wedges);
  if (cut.value >= 1.0 - tol) return res;

  res.status = SeparationResult::Status::violated;
  res.cut_nodes = cut.side;
  res.cut_value = cut.value;
  res.violation = 1.0 - cut.value;
  std::vector<char> in_s(inst.n, 0);
  for (int v : cut.side) in_s[v] = 1;
  for (int e = 0; e < inst.num_edges(); ++e)
    if (in_s[inst.edges[e].tail] != in_s[inst.edges[e].head]) res.cut_edges.push_back(e);
  return res;
}

namespace detail {

template <class Num>
Num num_cast(const Rational& r);
template <>
inline double num_cast<double>(const Rational& r) {
  return r.to_double();
}
template <>
inline Rational num_cast<Rational>(const Rational& r) {
  return r;
}

// Scenario budget rows. With l_var >= 0 the rows read sum c x - L <= 0,
// otherwise sum c x <= L for the fixed L given.
template <class Num>
void add_scenario_rows(LpProblem<Num>& prob, const Instance& inst, const Num& fixed_l) {
  for (int xi = 0; xi < inst.num_scenarios(); ++xi) {
    std::vector<std::pair<int, Num>> coeffs;
    for (int e = 0; e < inst.num_edges(); ++e) {
      const Rational& c = inst.cost(xi, e);
      if (!c.is_zero()) coeffs.emplace_back(prob.edge_vars[e], num_cast<Num>(c));
    }
    if (prob.l_var >= 0) {
      coeffs.emplace_back(prob.l_var, Num{-1});
      prob.model.add_row(std::move(coeffs), Rel::le, Num{});
    } else {
      prob.model.add_row(std::move(coeffs), Rel::le, fixed_l);
    }
  }
}

template <class Num>
void add_edge_vars(LpProblem<Num>& prob, const Instance& inst, const std::vector<int>& active) {
  std::vector<char> in_set(inst.num_edges(), 0);
  for (int e : active) in_set[e] = 1;
  for (int e = 0; e < inst.num_edges(); ++e)
    prob.edge_vars.push_back(prob.model.add_var(Num{}, in_set[e] ? Num{1} : Num{}));
}

// Mass-balance rows (flow conservation; unit flow out of s and into t).
template <class Num>
void add_sp_rows(LpProblem<Num>& prob, const Instance& inst) {
  for (int v = 0; v < inst.n; ++v) {
    if (v == inst.source || v == inst.target) continue;
    std::vector<std::pair<int, Num>> coeffs;
    for (int e = 0; e < inst.num_edges(); ++e) {
      if (inst.edges[e].tail == v) coeffs.emplace_back(prob.edge_vars[e], Num{1});
      if (inst.edges[e].head == v) coeffs.emplace_back(prob.edge_vars[e], Num{-1});
    }
    if (!coeffs.empty()) prob.model.add_row(std::move(coeffs), Rel::eq, Num{});
  }
  std::vector<std::pair<int, Num>> out_s, in_t;
  for (int e = 0; e < inst.num_edges(); ++e) {
    if (inst.edges[e].tail == inst.source) out_s.emplace_back(prob.edge_vars[e], Num{1});
    if (inst.edges[e].head == inst.target) in_t.emplace_back(prob.edge_vars[e], Num{1});
  }
  prob.model.add_row(std::move(out_s), Rel::eq, Num{1});
  prob.model.add_row(std::move(in_t), Rel::eq, Num{1});
}

// Cardinality row of the cut-set formulation; the cut rows themselves are
// generated lazily.
template <class Num>
void add_mst_rows(LpProblem<Num>& prob, const Instance& inst) {
  std::vector<std::pair<int, Num>> coeffs;
  for (int e = 0; e < inst.num_edges(); ++e) coeffs.emplace_back(prob.edge_vars[e], Num{1});
  prob.model.add_row(std::move(coeffs), Rel::eq, Num(inst.n - 1));
  prob.lazy = LazyFamily::spanning_cuts;
}

}  // namespace detail

// LP(L) for a shortest-path instance: scenario rows at budget L, mass
// balance, x_e fixed to zero outside E(L).
template <class Num = double>
LpProblem<Num> build_sp_model(const Instance& inst, const Rational& l) {
  check_invariant(inst.kind == Kind::shortest_path, "build_sp_model needs an SP instance");
  LpProblem<Num> prob;
  prob.instance = &inst;
  detail::add_edge_vars(prob, inst, edge_filter(inst, l));
  detail::add_scenario_rows(prob, inst, detail::num_cast<Num>(l));
  detail::add_sp_rows(prob, inst);
  return prob;
}

// LP(L) for a spanning-tree instance: scenario rows, the cardinality row
// sum x = n-1, and the lazily separated spanning-cut family.
template <class Num = double>
LpProblem<Num> build_mst_model(const Instance& inst, const Rational& l) {
  check_invariant(inst.kind == Kind::spanning_tree, "build_mst_model needs an MST instance");
  LpProblem<Num> prob;
  prob.instance = &inst;
  detail::add_edge_vars(prob, inst, edge_filter(inst, l));
  detail::add_scenario_rows(prob, inst, detail::num_cast<Num>(l));
  detail::add_mst_rows(prob, inst);
  return prob;
}

namespace detail {

// Exhaustive exact separation over all 2^(n-1)-1 cuts: the most violated
// cut, lowest bitmask on ties. Oracle-grade; n is capped by the caller.
inline std::optional<std::vector<int>> separate_exact(const Instance& inst,
                                                      const std::vector<Rational>& x) {
  check_invariant(inst.n <= 22, "exact separation is capped at 22 nodes");
  const unsigned long long masks = 1ULL << (inst.n - 1);
  std::optional<std::vector<int>> best;
  Rational best_value;
  for (unsigned long long s = 1; s < masks; ++s) {
    Rational value(0);
    std::vector<int> cut;
    for (int e = 0; e < inst.num_edges(); ++e) {
      const bool a = (s >> inst.edges[e].tail) & 1ULL;  // node n-1 never in S
      const bool b = inst.edges[e].head < inst.n - 1 && ((s >> inst.edges[e].head) & 1ULL);
      if (a != b) {
        value += x[e];
        cut.push_back(e);
      }
    }
    if (value < Rational(1) && (!best || value < best_value)) {
      best = cut;
      best_value = value;
    }
  }
  return best;
}

struct FeasibilityOutcome {
  bool feasible = false;
  long cuts_added = 0;
};

// Solve-separate-add loop shared by the double and exact paths. `solution`
// receives edge-indexed x on success. cut_cap <= 0 means the 10*m*n default.
template <class Num>
FeasibilityOutcome solve_with_lazy_cuts(LpProblem<Num>& prob, std::vector<Num>& solution,
                                        long cut_cap, const SimplexOptions& sopts) {
  FeasibilityOutcome out;
  if (cut_cap <= 0 && prob.instance)
    cut_cap = 10L * std::max(1, prob.instance->num_edges()) * std::max(1, prob.instance->n);
  while (true) {
    LpResult<Num> res = solve_lp(prob.model, sopts);
    check_invariant(res.status != LpStatus::iteration_limit, "simplex hit its pivot cap");
    check_invariant(res.status != LpStatus::unbounded, "LP(L) cannot be unbounded");
    if (res.status == LpStatus::infeasible) return out;
    if (!prob.instance) {
      solution.assign(res.x.begin(),
                      res.x.begin() + std::min<std::size_t>(res.x.size(), prob.edge_vars.size()));
      out.feasible = true;
      return out;
    }
    const Instance& inst = *prob.instance;

    std::vector<Num> x(inst.num_edges());
    for (int e = 0; e < inst.num_edges(); ++e) x[e] = res.x[prob.edge_vars[e]];

    if (prob.lazy == LazyFamily::spanning_cuts && inst.n >= 2) {
      std::vector<int> cut;
      bool violated = false;
      if constexpr (std::is_same_v<Num, double>) {
        SeparationResult sep = separate_spanning_cuts(inst, x);
        if (sep.status == SeparationResult::Status::violated) {
          violated = true;
          cut = sep.cut_edges;
        }
      } else {
        auto exact = separate_exact(inst, x);
        if (exact) {
          violated = true;
          cut = *exact;
        }
      }
      if (violated) {
        if (out.cuts_added >= cut_cap)
          throw cut_limit_error("spanning-cut generation exceeded " + std::to_string(cut_cap) +
                                " rows");
        std::vector<std::pair<int, Num>> coeffs;
        for (int e : cut) coeffs.emplace_back(prob.edge_vars[e], Num{1});
        prob.model.add_row(std::move(coeffs), Rel::ge, Num{1});
        ++out.cuts_added;
        if (log::debug_enabled()) {
          std::string ids;
          for (int e : cut) ids += (ids.empty() ? "" : ",") + std::to_string(e);
          log::debug("{\"event\":\"cut\",\"edges\":[" + ids + "]}");
        }
        continue;
      }
    }
    solution = std::move(x);
    out.feasible = true;
    return out;
  }
}

}  // namespace detail

// Feasibility of LP(L), iterating the lazy family (when attached) until all
// generated rows are satisfied. Returns edge-indexed x on success.
template <class Num>
std::optional<std::vector<Num>> solve_feasibility(LpProblem<Num>& prob, long cut_cap = 0) {
  std::vector<Num> x;
  SimplexOptions sopts;
  sopts.trace = log::debug_enabled();
  auto out = detail::solve_with_lazy_cuts(prob, x, cut_cap, sopts);
  if (!out.feasible) return std::nullopt;
  return x;
}

template <class Num>
struct MinimizeOutcome {
  Num l_star{};
  std::vector<Num> x;  // edge-indexed optimal solution
  long cuts_added = 0;
};

namespace detail {

inline bool sp_reachable(const Instance& inst, const std::vector<char>& active) {
  std::vector<std::vector<int>> out(inst.n);
  for (int e = 0; e < inst.num_edges(); ++e)
    if (active[e]) out[inst.edges[e].tail].push_back(inst.edges[e].head);
  std::vector<char> seen(inst.n, 0);
  std::queue<int> q;
  q.push(inst.source);
  seen[inst.source] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (v == inst.target) return true;
    for (int w : out[v])
      if (!seen[w]) {
        seen[w] = 1;
        q.push(w);
      }
  }
  return false;
}

inline bool mst_spanning(const Instance& inst, const std::vector<char>& active) {
  DisjointSets dsu(inst.n);
  int comps = inst.n;
  for (int e = 0; e < inst.num_edges(); ++e)
    if (active[e] && dsu.unite(inst.edges[e].tail, inst.edges[e].head)) --comps;
  return comps == 1;
}

// Exact two-phase search for L*: the breakpoints of E(L) are the distinct
// values of max_xi c_e^xi. For each breakpoint interval in ascending order,
// fix E(L) membership, solve min L with L >= the interval's left end, and
// accept the first optimum that does not pass the next breakpoint.
template <class Num>
MinimizeOutcome<Num> minimize_l_impl(const Instance& inst) {
  if (inst.kind == Kind::spanning_tree && inst.n == 1)
    return {Num{}, std::vector<Num>(inst.num_edges(), Num{}), 0};

  std::vector<Rational> breakpoints;
  for (int e = 0; e < inst.num_edges(); ++e) breakpoints.push_back(inst.max_scenario_cost(e));
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  const Num accept_tol = lp_traits<Num>::zero_tol();
  long cuts_total = 0;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const Rational& left = breakpoints[i];
    std::vector<int> active_ids = edge_filter(inst, left);
    std::vector<char> active(inst.num_edges(), 0);
    for (int e : active_ids) active[e] = 1;
    if (inst.kind == Kind::shortest_path && !sp_reachable(inst, active)) continue;
    if (inst.kind == Kind::spanning_tree && !mst_spanning(inst, active)) continue;

    LpProblem<Num> prob;
    prob.instance = &inst;
    add_edge_vars(prob, inst, active_ids);
    prob.l_var = prob.model.add_var(num_cast<Num>(robustnet::max(left, Rational(0))), std::nullopt);
    prob.model.objective = {{prob.l_var, Num{1}}};
    add_scenario_rows(prob, inst, Num{});
    if (inst.kind == Kind::shortest_path)
      add_sp_rows(prob, inst);
    else
      add_mst_rows(prob, inst);

    std::vector<Num> x;
    SimplexOptions sopts;
    sopts.trace = log::debug_enabled();
    FeasibilityOutcome out = solve_with_lazy_cuts(prob, x, 0, sopts);
    cuts_total += out.cuts_added;
    if (!out.feasible) continue;

    // Recover L as the max scenario cost of x (the objective value may sit
    // a hair above it when the L variable is degenerate).
    Num l_opt{};
    for (int xi = 0; xi < inst.num_scenarios(); ++xi) {
      Num total{};
      for (int e = 0; e < inst.num_edges(); ++e)
        if (!(lp_traits<Num>::abs(x[e]) <= lp_traits<Num>::zero_tol()))
          total += num_cast<Num>(inst.cost(xi, e)) * x[e];
      if (l_opt < total) l_opt = total;
    }
    if (l_opt < num_cast<Num>(left)) l_opt = num_cast<Num>(left);

    const bool last = i + 1 == breakpoints.size();
    if (last || !(num_cast<Num>(breakpoints[i + 1]) + accept_tol < l_opt))
      return {l_opt, std::move(x), cuts_total};
  }
  throw infeasible_error(inst.kind == Kind::shortest_path
                             ? "NoFeasibleL: no s-t path exists"
                             : "NoFeasibleL: E(L) never spans the graph");
}

}  // namespace detail

// L* and an optimal fractional solution, double arithmetic.
inline std::pair<double, FractionalSolution> minimize_l(const Instance& inst) {
  MinimizeOutcome<double> out = detail::minimize_l_impl<double>(inst);
  FractionalSolution fs;
  fs.x.resize(inst.num_edges());
  for (int e = 0; e < inst.num_edges(); ++e) fs.x[e] = std::clamp(out.x[e], 0.0, 1.0);
  fs.bound = out.l_star;
  for (int xi = 0; xi < inst.num_scenarios(); ++xi) {
    double total = 0.0;
    for (int e = 0; e < inst.num_edges(); ++e) total += inst.cost(xi, e).to_double() * fs.x[e];
    if (std::fabs(total - fs.bound) <= 1e-7 * std::max(1.0, std::fabs(fs.bound)))
      fs.tight_scenarios.push_back(xi);
  }
  return {out.l_star, std::move(fs)};
}

// Exact-rational L*; the oracle mode behind the integrality-gap checks.
// Restricted to small models by design.
inline std::pair<Rational, std::vector<Rational>> minimize_l_exact(const Instance& inst) {
  check_invariant(inst.num_edges() <= 64, "exact mode is reserved for models with at most 64 edges");
  MinimizeOutcome<Rational> out = detail::minimize_l_impl<Rational>(inst);
  return {out.l_star, std::move(out.x)};
}

}  // namespace robustnet
