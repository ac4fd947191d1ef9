#pragma once

#include <string>

#include <json.hpp>

#include "robustnet/instance.hpp"

namespace robustnet {

namespace detail {

inline Rational cost_from_json(const nlohmann::json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_float()) return Rational::from_double_exact(v.get<double>());
    if (v.is_string()) return Rational::parse(v.get<std::string>());
  } catch (const std::exception& ex) {
    throw validation_error(std::string("bad cost (") + ex.what() + ")", where);
  }
  throw validation_error("cost must be a number or a \"p/q\" string", where);
}

inline nlohmann::json cost_to_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.str();
}

}  // namespace detail

// Parses the canonical instance JSON:
//   {"kind":"sp"|"mst","name":str,"n":int,"edges":[[tail,head],...],
//    "scenarios":[[num,...],...],"s":int,"t":int}
// Costs are JSON numbers or "p/q" strings; "s"/"t" present iff kind == "sp".
// Throws validation_error with the offending field path.
inline Instance parse_instance(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& ex) {
    throw validation_error(std::string("malformed JSON: ") + ex.what());
  }
  if (!j.is_object()) throw validation_error("instance must be a JSON object");

  auto field = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw validation_error("missing field", key);
    return j.at(key);
  };

  Instance inst;
  const std::string kind = field("kind").is_string() ? field("kind").get<std::string>() : "";
  if (kind == "sp")
    inst.kind = Kind::shortest_path;
  else if (kind == "mst")
    inst.kind = Kind::spanning_tree;
  else
    throw validation_error("kind must be \"sp\" or \"mst\"", "kind");

  if (!field("name").is_string()) throw validation_error("name must be a string", "name");
  inst.name = j["name"].get<std::string>();
  if (!field("n").is_number_integer()) throw validation_error("n must be an integer", "n");
  inst.n = j["n"].get<int>();

  const nlohmann::json& edges = field("edges");
  if (!edges.is_array()) throw validation_error("edges must be an array", "edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw validation_error("edge must be [tail, head]", where);
    inst.edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }

  const nlohmann::json& scen = field("scenarios");
  if (!scen.is_array() || scen.empty())
    throw validation_error("scenarios must be a non-empty array", "scenarios");
  for (std::size_t xi = 0; xi < scen.size(); ++xi) {
    const std::string row_path = "scenarios[" + std::to_string(xi) + "]";
    if (!scen[xi].is_array()) throw validation_error("scenario must be an array", row_path);
    std::vector<Rational> row;
    for (std::size_t e = 0; e < scen[xi].size(); ++e)
      row.push_back(detail::cost_from_json(scen[xi][e], row_path + "[" + std::to_string(e) + "]"));
    inst.scenarios.push_back(std::move(row));
  }

  if (inst.kind == Kind::shortest_path) {
    if (!field("s").is_number_integer()) throw validation_error("s must be an integer", "s");
    if (!field("t").is_number_integer()) throw validation_error("t must be an integer", "t");
    inst.source = j["s"].get<int>();
    inst.target = j["t"].get<int>();
  } else if (j.contains("s") || j.contains("t")) {
    throw validation_error("s/t only valid for kind \"sp\"", "s");
  }

  inst.validate();
  return inst;
}

// Canonical serialization: sorted keys, 2-space indent, integer costs as JSON
// integers and non-integers as "p/q" strings. parse_instance(serialize(x))
// reproduces x bit-exactly.
inline std::string serialize_instance(const Instance& inst) {
  nlohmann::json j;
  j["kind"] = kind_name(inst.kind);
  j["name"] = inst.name;
  j["n"] = inst.n;
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : inst.edges) edges.push_back({e.tail, e.head});
  j["edges"] = std::move(edges);
  nlohmann::json scen = nlohmann::json::array();
  for (const auto& row : inst.scenarios) {
    nlohmann::json r = nlohmann::json::array();
    for (const Rational& c : row) r.push_back(detail::cost_to_json(c));
    scen.push_back(std::move(r));
  }
  j["scenarios"] = std::move(scen);
  if (inst.kind == Kind::shortest_path) {
    j["s"] = inst.source;
    j["t"] = inst.target;
  }
  return j.dump(2) + "\n";
}

}  // namespace robustnet
