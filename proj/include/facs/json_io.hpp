#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "facs/schema.hpp"
#include "facs/system.hpp"

namespace facs {

// Integers ride as JSON numbers when they fit 64 bits, decimal strings
// otherwise. Readers accept both forms.
inline nlohmann::json int_to_json(const Int& v) {
  if (fits_int64(v)) return v.convert_to<std::int64_t>();
  return v.str();
}

inline Int int_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
  if (j.is_string()) return int_from_string(j.get<std::string>());
  throw std::invalid_argument("expected integer (number or decimal string)");
}

inline nlohmann::json vec_to_json(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(int_to_json(x));
  return a;
}

inline Vec vec_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected array of integers");
  Vec v;
  for (const auto& x : j) v.push_back(int_from_json(x));
  return v;
}

inline nlohmann::json system_to_json(const CounterSystem& s) {
  nlohmann::json j;
  j["dimension"] = s.dimension;
  j["states"] = nlohmann::json::array();
  for (const auto& st : s.states)
    j["states"].push_back({{"id", st.id}, {"labels", st.labels}});
  j["rules"] = nlohmann::json::array();
  for (const auto& r : s.rules) {
    nlohmann::json guard = nlohmann::json::array();
    for (const auto& row : r.guard.rows)
      guard.push_back({{"coeffs", vec_to_json(row.coeffs)}, {"bound", int_to_json(row.bound)}});
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t i = 0; i < r.update.a.rows; ++i) {
      nlohmann::json rowj = nlohmann::json::array();
      for (std::size_t k = 0; k < r.update.a.cols; ++k)
        rowj.push_back(int_to_json(r.update.a.at(i, k)));
      a.push_back(rowj);
    }
    j["rules"].push_back({{"id", r.id},
                          {"from", r.source},
                          {"to", r.target},
                          {"guard", guard},
                          {"A", a},
                          {"b", vec_to_json(r.update.b)}});
  }
  return j;
}

inline CounterSystem system_from_json(const nlohmann::json& j) {
  CounterSystem s;
  if (!j.is_object()) throw std::invalid_argument("system: expected object");
  s.dimension = j.at("dimension").get<std::size_t>();
  for (const auto& stj : j.at("states")) {
    State st;
    st.id = stj.at("id").get<std::string>();
    if (stj.contains("labels"))
      st.labels = stj.at("labels").get<std::vector<std::string>>();
    std::sort(st.labels.begin(), st.labels.end());
    st.labels.erase(std::unique(st.labels.begin(), st.labels.end()), st.labels.end());
    s.states.push_back(std::move(st));
  }
  for (const auto& rj : j.at("rules")) {
    TransitionRule r;
    r.id = rj.at("id").get<std::string>();
    r.source = rj.at("from").get<std::string>();
    r.target = rj.at("to").get<std::string>();
    if (rj.contains("guard")) {
      for (const auto& rowj : rj.at("guard"))
        r.guard.rows.push_back(
            GuardRow{vec_from_json(rowj.at("coeffs")), int_from_json(rowj.at("bound"))});
    }
    const auto& aj = rj.at("A");
    if (!aj.is_array() || aj.size() != s.dimension)
      throw std::invalid_argument("rule " + r.id + ": matrix must have " +
                                  std::to_string(s.dimension) + " rows");
    r.update.a = Matrix(s.dimension, s.dimension);
    for (std::size_t i = 0; i < s.dimension; ++i) {
      Vec row = vec_from_json(aj[i]);
      if (row.size() != s.dimension)
        throw std::invalid_argument("rule " + r.id + ": matrix row length mismatch");
      for (std::size_t k = 0; k < s.dimension; ++k) r.update.a.at(i, k) = row[k];
    }
    r.update.b = vec_from_json(rj.at("b"));
    s.rules.push_back(std::move(r));
  }
  validate_wellformed(s);
  return s;
}

// "q0 0 0 0" -> configuration; counter count must match the dimension.
inline Configuration parse_configuration(const CounterSystem& s, const std::string& text) {
  std::istringstream in(text);
  Configuration c;
  if (!(in >> c.state)) throw std::invalid_argument("configuration: missing state");
  if (!s.has_state(c.state)) throw std::invalid_argument("configuration: unknown state " + c.state);
  std::string tok;
  while (in >> tok) c.values.push_back(int_from_string(tok));
  if (c.values.size() != s.dimension)
    throw std::invalid_argument("configuration: expected " + std::to_string(s.dimension) +
                                " counters");
  return c;
}

// Schemas serialize as an ordered list; a plain rule is its id string, a
// cycle is the array of its rule ids.
inline nlohmann::json schema_to_json(const CounterSystem& s, const PathSchema& p) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : p.elements) {
    if (e.is_cycle) {
      nlohmann::json c = nlohmann::json::array();
      for (std::size_t ri : e.rules) c.push_back(s.rules[ri].id);
      a.push_back(c);
    } else {
      a.push_back(s.rules[e.rules.front()].id);
    }
  }
  return a;
}

inline PathSchema schema_from_json(const CounterSystem& s, const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("schema: expected array");
  PathSchema p;
  for (const auto& ej : j) {
    SchemaElement e;
    if (ej.is_string()) {
      e.is_cycle = false;
      e.rules.push_back(s.rule_index(ej.get<std::string>()));
    } else if (ej.is_array()) {
      e.is_cycle = true;
      for (const auto& idj : ej) e.rules.push_back(s.rule_index(idj.get<std::string>()));
      if (e.rules.empty()) throw std::invalid_argument("schema: empty cycle");
    } else {
      throw std::invalid_argument("schema: element must be rule id or cycle array");
    }
    p.elements.push_back(std::move(e));
  }
  return p;
}

inline nlohmann::json config_to_json(const Configuration& c) {
  return {{"state", c.state}, {"values", vec_to_json(c.values)}};
}

inline Configuration config_from_json(const CounterSystem& s, const nlohmann::json& j) {
  Configuration c;
  c.state = j.at("state").get<std::string>();
  if (!s.has_state(c.state)) throw std::invalid_argument("config: unknown state " + c.state);
  c.values = vec_from_json(j.at("values"));
  if (c.values.size() != s.dimension)
    throw std::invalid_argument("config: dimension mismatch");
  return c;
}

inline nlohmann::json witness_to_json(const CounterSystem& s, const PathSchema& schema,
                                      const std::vector<Int>& counts,
                                      const std::optional<Configuration>& reached) {
  nlohmann::json j;
  j["schema"] = schema_to_json(s, schema);
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : counts) cs.push_back(int_to_json(c));
  j["counts"] = cs;
  if (reached) j["reached"] = config_to_json(*reached);
  return j;
}

struct WitnessData {
  PathSchema schema;
  std::vector<Int> counts;
  std::optional<Configuration> reached;
};

inline WitnessData witness_from_json(const CounterSystem& s, const nlohmann::json& j) {
  WitnessData w;
  w.schema = schema_from_json(s, j.at("schema"));
  for (const auto& c : j.at("counts")) w.counts.push_back(int_from_json(c));
  if (j.contains("reached")) w.reached = config_from_json(s, j.at("reached"));
  return w;
}

}  // namespace facs
