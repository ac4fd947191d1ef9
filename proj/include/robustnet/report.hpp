#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "robustnet/rational.hpp"

namespace robustnet {

// Trace of one solver run: what was selected when, the LP bound, and how the
// final cost relates to it.
struct RunReport {
  std::string algorithm;
  int rounds = 0;
  std::vector<std::vector<int>> round_selections;  // edge ids chosen per round
  double l_star = 0.0;
  Rational max_cost;
  std::optional<std::uint64_t> rng_seed;
  double wall_ms = 0.0;
  std::map<std::string, double> metrics;                     // named scalars (l_hat, ...)
  std::vector<std::map<std::string, double>> round_stats;    // per-round named scalars

  // max_cost / L*, with 0/0 treated as ratio 1.
  double ratio() const {
    const double mc = max_cost.to_double();
    if (l_star <= 0.0) return mc <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return mc / l_star;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["algorithm"] = algorithm;
    j["rounds"] = rounds;
    j["round_selections"] = round_selections;
    j["L_star"] = l_star;
    j["max_cost"] = max_cost.is_integer() ? nlohmann::json(max_cost.num())
                                          : nlohmann::json(max_cost.str());
    j["ratio"] = ratio();
    if (rng_seed) j["rng_seed"] = *rng_seed;
    j["wall_ms"] = wall_ms;
    if (!metrics.empty()) j["metrics"] = metrics;
    if (!round_stats.empty()) j["round_stats"] = round_stats;
    return j;
  }
};

}  // namespace robustnet
