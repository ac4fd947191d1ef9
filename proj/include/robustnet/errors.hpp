#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace robustnet {

// Input data violates the instance schema or an instance invariant.
// `where` is the JSON field path of the offending value when known.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg, std::string where = {})
      : std::runtime_error(where.empty() ? msg : msg + " at " + where), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// A requested solution does not exist (no s-t path, LP(L) infeasible for
// every L, randomized rounding failed to connect, ...).
class infeasible_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An edge set handed to evaluate() is not a path / spanning tree.
// Carries a witness: the offending edge ids and/or node ids.
class infeasible_set_error : public infeasible_error {
 public:
  infeasible_set_error(const std::string& msg, std::vector<int> witness_edges,
                       std::vector<int> witness_nodes = {})
      : infeasible_error(msg),
        witness_edges(std::move(witness_edges)),
        witness_nodes(std::move(witness_nodes)) {}

  std::vector<int> witness_edges;
  std::vector<int> witness_nodes;
};

// An internal invariant the algorithms rely on was violated. Signals a bug,
// not bad input; the CLI maps it to a dedicated exit code.
class invariant_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Enumeration oracle hit its work cap; the caller asked for more than the
// brute-force solver is willing to do.
class cap_exceeded_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void check_invariant(bool cond, const std::string& msg) {
  if (!cond) throw invariant_error(msg);
}

}  // namespace robustnet
