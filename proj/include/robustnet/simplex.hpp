#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robustnet/errors.hpp"
#include "robustnet/log.hpp"
#include "robustnet/rational.hpp"

namespace robustnet {

enum class Rel { le, eq, ge };

template <class Num>
struct LinearRow {
  std::vector<std::pair<int, Num>> coeffs;  // (variable, coefficient), vars unique
  Rel rel = Rel::le;
  Num rhs{};
};

// A bounded-variable LP: minimize objective over explicit rows and bounds.
// An empty objective makes solve_lp a pure feasibility solve.
template <class Num>
struct LpModel {
  int num_vars = 0;
  std::vector<LinearRow<Num>> rows;
  std::vector<std::optional<Num>> lower, upper;  // nullopt = unbounded side
  std::vector<std::pair<int, Num>> objective;    // minimized

  int add_var(std::optional<Num> lo, std::optional<Num> hi) {
    lower.push_back(std::move(lo));
    upper.push_back(std::move(hi));
    return num_vars++;
  }

  void add_row(std::vector<std::pair<int, Num>> coeffs, Rel rel, Num rhs) {
    rows.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

template <class Num>
struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<Num> x;  // structural variable values
  Num objective{};
  long pivots = 0;
};

struct SimplexOptions {
  long max_pivots = 0;              // 0: 1000 + 200 * (rows + vars)
  long bland_after_degenerate = 0;  // 0: 2 * (rows + vars)
  bool trace = false;               // JSON pivot log via robustnet::log
};

template <class Num>
struct lp_traits;

template <>
struct lp_traits<double> {
  static double zero_tol() { return 1e-9; }
  static double abs(double v) { return std::fabs(v); }
};

template <>
struct lp_traits<Rational> {
  static Rational zero_tol() { return Rational(0); }
  static Rational abs(const Rational& v) { return robustnet::abs(v); }
};

namespace detail {

// Two-phase primal simplex on a dense tableau with explicit lower/upper
// bound handling: nonbasic variables rest at a bound and may flip to the
// opposite bound without a basis change. Entering rule is Dantzig with
// lowest-index ties; after the degenerate-pivot budget is spent the solver
// switches to Bland's rule for guaranteed termination. The same code runs
// in double (production) and Rational (exact oracle) arithmetic.
template <class Num>
class SimplexSolver {
  using Traits = lp_traits<Num>;

  enum class VarState : unsigned char { basic, at_lower, at_upper, free_zero };

 public:
  SimplexSolver(const LpModel<Num>& model, const SimplexOptions& opts)
      : model_(model), opts_(opts), rows_(static_cast<int>(model.rows.size())) {
    build();
  }

  LpResult<Num> run() {
    LpResult<Num> result;
    if (opts_.max_pivots <= 0) opts_.max_pivots = 1000 + 200L * (rows_ + cols_);
    if (opts_.bland_after_degenerate <= 0) opts_.bland_after_degenerate = 2L * (rows_ + cols_);

    // Phase 1: drive the artificial variables to zero.
    IterStatus st = iterate(z1_);
    if (st == IterStatus::limit) return finish(result, LpStatus::iteration_limit);
    check_invariant(st != IterStatus::unbounded, "phase-1 LP cannot be unbounded");
    Num infeasibility{};
    for (int j = first_artificial_; j < cols_; ++j) infeasibility += value_[j];
    if (feas_budget() < Traits::abs(infeasibility)) return finish(result, LpStatus::infeasible);

    pivot_out_artificials();
    for (int j = first_artificial_; j < cols_; ++j) upper_[j] = Num{};  // pin to zero

    // Phase 2: the caller's objective (a zero row means feasibility only).
    st = iterate(z2_);
    if (st == IterStatus::limit) return finish(result, LpStatus::iteration_limit);
    if (st == IterStatus::unbounded) return finish(result, LpStatus::unbounded);
    return finish(result, LpStatus::optimal);
  }

 private:
  enum class IterStatus { optimal, unbounded, limit };

  // Row residuals are accepted up to zero_tol each; phase-1 infeasibility
  // below rows * zero_tol counts as feasible. Exact zero in Rational mode.
  Num feas_budget() const {
    Num tol{};
    for (int i = 0; i <= rows_; ++i) tol += Traits::zero_tol();
    return tol;
  }

  void build() {
    const int structural = model_.num_vars;
    int slacks = 0;
    for (const auto& row : model_.rows)
      if (row.rel != Rel::eq) ++slacks;
    first_slack_ = structural;
    first_artificial_ = structural + slacks;
    cols_ = first_artificial_ + rows_;

    lower_.assign(cols_, std::nullopt);
    upper_.assign(cols_, std::nullopt);
    for (int j = 0; j < structural; ++j) {
      lower_[j] = model_.lower[j];
      upper_[j] = model_.upper[j];
    }
    for (int j = first_slack_; j < cols_; ++j) lower_[j] = Num{};  // slacks, artificials >= 0

    tableau_.assign(rows_, std::vector<Num>(cols_, Num{}));
    value_.assign(cols_, Num{});
    state_.assign(cols_, VarState::at_lower);
    basis_.assign(rows_, -1);

    for (int j = 0; j < first_artificial_; ++j) {
      if (lower_[j]) {
        value_[j] = *lower_[j];
        state_[j] = VarState::at_lower;
      } else if (upper_[j]) {
        value_[j] = *upper_[j];
        state_[j] = VarState::at_upper;
      } else {
        state_[j] = VarState::free_zero;
      }
    }

    int slack = first_slack_;
    for (int i = 0; i < rows_; ++i) {
      const LinearRow<Num>& row = model_.rows[i];
      auto& trow = tableau_[i];
      for (const auto& [var, coef] : row.coeffs) trow[var] += coef;
      if (row.rel == Rel::le) trow[slack++] = Num{1};
      if (row.rel == Rel::ge) trow[slack++] = Num{-1};

      Num residual = row.rhs;
      for (int j = 0; j < first_artificial_; ++j) residual -= trow[j] * value_[j];
      if (residual < Num{}) {
        for (int j = 0; j < first_artificial_; ++j) trow[j] = -trow[j];
        residual = -residual;
      }
      const int art = first_artificial_ + i;
      trow[art] = Num{1};
      value_[art] = residual;
      state_[art] = VarState::basic;
      basis_[i] = art;
    }

    // Objective rows, reduced against the all-artificial starting basis.
    z1_.assign(cols_, Num{});
    z2_.assign(cols_, Num{});
    for (int j = first_artificial_; j < cols_; ++j) z1_[j] = Num{1};
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) z1_[j] -= tableau_[i][j];
    for (const auto& [var, coef] : model_.objective) z2_[var] += coef;
  }

  bool fixed_var(int j) const { return lower_[j] && upper_[j] && !(*lower_[j] < *upper_[j]); }

  // Entering variable and direction, or nullopt at optimality.
  std::optional<std::pair<int, int>> pick_entering(const std::vector<Num>& z) const {
    const Num tol = Traits::zero_tol();
    int best = -1, best_dir = 0;
    Num best_score{};
    for (int j = 0; j < cols_; ++j) {
      if (state_[j] == VarState::basic || fixed_var(j)) continue;
      int dir = 0;
      if (state_[j] != VarState::at_upper && z[j] < -tol)
        dir = 1;
      else if (state_[j] != VarState::at_lower && z[j] > tol)
        dir = -1;
      if (dir == 0) continue;
      if (bland_) return std::make_pair(j, dir);
      const Num score = Traits::abs(z[j]);
      if (best < 0 || best_score < score) {
        best = j;
        best_dir = dir;
        best_score = score;
      }
    }
    if (best < 0) return std::nullopt;
    return std::make_pair(best, best_dir);
  }

  IterStatus iterate(std::vector<Num>& z) {
    const Num tol = Traits::zero_tol();
    while (true) {
      auto entering = pick_entering(z);
      if (!entering) return IterStatus::optimal;
      if (pivots_ >= opts_.max_pivots) return IterStatus::limit;
      const auto [q, dir] = *entering;
      const Num dirn = dir > 0 ? Num{1} : Num{-1};

      // Ratio test. A bound flip of q itself competes with the basic
      // variables' bounds; on equal ratios the flip wins, row ties keep the
      // lowest leaving variable index.
      bool bounded = false, own_bound = false;
      Num delta{};
      int block_row = -1;
      if (lower_[q] && upper_[q]) {
        delta = *upper_[q] - *lower_[q];
        bounded = own_bound = true;
      }
      for (int i = 0; i < rows_; ++i) {
        const Num beta = tableau_[i][q] * dirn;  // basic k moves by -beta * step
        if (Traits::abs(beta) <= tol) continue;
        const int k = basis_[i];
        std::optional<Num> lim;
        if (beta > Num{}) {
          if (lower_[k]) lim = (value_[k] - *lower_[k]) / beta;
        } else {
          if (upper_[k]) lim = (*upper_[k] - value_[k]) / (-beta);
        }
        if (!lim) continue;
        if (*lim < Num{}) lim = Num{};  // numerical drift guard
        if (!bounded || *lim < delta) {
          delta = *lim;
          block_row = i;
          bounded = true;
          own_bound = false;
        } else if (!own_bound && !(delta < *lim) && basis_[i] < basis_[block_row]) {
          block_row = i;
        }
      }
      if (!bounded) return IterStatus::unbounded;

      if (Traits::abs(delta) <= tol && ++degenerate_pivots_ > opts_.bland_after_degenerate)
        bland_ = true;

      const Num step = dirn * delta;
      value_[q] += step;
      for (int i = 0; i < rows_; ++i)
        if (!(Traits::abs(tableau_[i][q]) <= tol)) value_[basis_[i]] -= tableau_[i][q] * step;

      ++pivots_;
      if (own_bound) {
        if (dir > 0) {
          value_[q] = *upper_[q];
          state_[q] = VarState::at_upper;
        } else {
          value_[q] = *lower_[q];
          state_[q] = VarState::at_lower;
        }
        continue;
      }

      const int leave = basis_[block_row];
      if (tableau_[block_row][q] * dirn > Num{}) {
        value_[leave] = *lower_[leave];
        state_[leave] = VarState::at_lower;
      } else {
        value_[leave] = *upper_[leave];
        state_[leave] = VarState::at_upper;
      }
      pivot(block_row, q);
      if (opts_.trace)
        log::debug("{\"event\":\"pivot\",\"enter\":" + std::to_string(q) +
                   ",\"leave\":" + std::to_string(leave) +
                   ",\"row\":" + std::to_string(block_row) + "}");
    }
  }

  void pivot(int row, int col) {
    auto& prow = tableau_[row];
    const Num piv = prow[col];
    check_invariant(!(Traits::abs(piv) <= Traits::zero_tol()), "zero pivot element");
    for (int j = 0; j < cols_; ++j) prow[j] = prow[j] / piv;
    prow[col] = Num{1};
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const Num f = tableau_[i][col];
      if (Traits::abs(f) <= Traits::zero_tol()) continue;
      auto& r = tableau_[i];
      for (int j = 0; j < cols_; ++j) r[j] -= f * prow[j];
      r[col] = Num{};
    }
    for (std::vector<Num>* zp : {&z1_, &z2_}) {
      const Num f = (*zp)[col];
      if (Traits::abs(f) <= Traits::zero_tol()) continue;
      for (int j = 0; j < cols_; ++j) (*zp)[j] -= f * prow[j];
      (*zp)[col] = Num{};
    }
    state_[col] = VarState::basic;
    basis_[row] = col;
  }

  // After phase 1, swap basic artificials for usable non-artificial columns.
  // Rows offering none are redundant; their artificial stays basic at zero.
  void pivot_out_artificials() {
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      int col = -1;
      for (int j = 0; j < first_artificial_; ++j)
        if (state_[j] != VarState::basic && !fixed_var(j) &&
            !(Traits::abs(tableau_[i][j]) <= Traits::zero_tol())) {
          col = j;
          break;
        }
      if (col < 0) continue;
      const int art = basis_[i];
      value_[art] = Num{};
      state_[art] = VarState::at_lower;
      pivot(i, col);  // degenerate swap; the entering column keeps its value
    }
  }

  LpResult<Num> finish(LpResult<Num>& result, LpStatus status) {
    result.status = status;
    result.pivots = pivots_;
    result.x.assign(value_.begin(), value_.begin() + model_.num_vars);
    result.objective = Num{};
    for (const auto& [var, coef] : model_.objective) result.objective += coef * value_[var];
    return result;
  }

  const LpModel<Num>& model_;
  SimplexOptions opts_;
  int rows_ = 0, cols_ = 0, first_slack_ = 0, first_artificial_ = 0;
  std::vector<std::optional<Num>> lower_, upper_;
  std::vector<std::vector<Num>> tableau_;
  std::vector<Num> value_, z1_, z2_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  long pivots_ = 0, degenerate_pivots_ = 0;
  bool bland_ = false;
};

}  // namespace detail

template <class Num>
LpResult<Num> solve_lp(const LpModel<Num>& model, const SimplexOptions& opts = {}) {
  detail::SimplexSolver<Num> solver(model, opts);
  return solver.run();
}

}  // namespace robustnet
