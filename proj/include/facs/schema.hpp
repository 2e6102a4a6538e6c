#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "facs/system.hpp"

namespace facs {

// One element of a path schema: a single rule or a simple cycle (rule indices
// in traversal order, rotated so the cycle starts at its entry state).
struct SchemaElement {
  bool is_cycle = false;
  std::vector<std::size_t> rules;

  bool operator==(const SchemaElement& o) const {
    return is_cycle == o.is_cycle && rules == o.rules;
  }
};

// Elements are pairwise distinct (rotations of one cycle count as the same
// element), consecutive elements are adjacent, and the last element is a
// cycle, iterated forever.
struct PathSchema {
  std::vector<SchemaElement> elements;

  bool operator==(const PathSchema& o) const { return elements == o.elements; }
};

// counts[i] pairs with elements[i] for i < elements.size()-1; the terminal
// cycle has no count. Rule elements carry count 1.
struct IteratedPathSchema {
  PathSchema schema;
  std::vector<Int> counts;
};

using Letter = std::vector<std::string>;  // sorted label set

struct LassoWord {
  std::vector<Letter> prefix;
  std::vector<Letter> loop;  // never empty

  const Letter& at(std::size_t pos) const {
    if (pos < prefix.size()) return prefix[pos];
    return loop[(pos - prefix.size()) % loop.size()];
  }
};

inline std::size_t element_source(const CounterSystem& s, const SchemaElement& e) {
  return s.state_index(s.rules[e.rules.front()].source);
}

inline std::size_t element_target(const CounterSystem& s, const SchemaElement& e) {
  if (e.is_cycle) return element_source(s, e);
  return s.state_index(s.rules[e.rules.front()].target);
}

// States a traversal of the schema necessarily visits.
inline std::set<std::size_t> touched_states(const CounterSystem& s, const PathSchema& p) {
  std::set<std::size_t> r;
  for (const auto& e : p.elements) {
    for (std::size_t ri : e.rules) {
      r.insert(s.state_index(s.rules[ri].source));
      r.insert(s.state_index(s.rules[ri].target));
    }
  }
  return r;
}

// Throws std::invalid_argument unless the pair is a well-shaped iterated path
// schema for the given system.
inline void check_ips_shape(const CounterSystem& s, const IteratedPathSchema& ips) {
  const auto& el = ips.schema.elements;
  if (el.empty()) throw std::invalid_argument("ips: empty schema");
  if (!el.back().is_cycle) throw std::invalid_argument("ips: last element is not a cycle");
  if (ips.counts.size() + 1 != el.size())
    throw std::invalid_argument("ips: count vector length mismatch");
  for (std::size_t i = 0; i < el.size(); ++i) {
    const auto& e = el[i];
    if (e.rules.empty()) throw std::invalid_argument("ips: empty element");
    if (!e.is_cycle && e.rules.size() != 1)
      throw std::invalid_argument("ips: rule element with several rules");
    for (std::size_t ri : e.rules)
      if (ri >= s.rules.size()) throw std::invalid_argument("ips: rule index out of range");
    for (std::size_t j = 0; j + 1 < e.rules.size(); ++j)
      if (s.rules[e.rules[j]].target != s.rules[e.rules[j + 1]].source)
        throw std::invalid_argument("ips: cycle rules are not chained");
    if (e.is_cycle &&
        s.rules[e.rules.back()].target != s.rules[e.rules.front()].source)
      throw std::invalid_argument("ips: cycle does not close");
    if (i + 1 < el.size() && element_target(s, e) != element_source(s, el[i + 1]))
      throw std::invalid_argument("ips: consecutive elements are not adjacent");
    if (i + 1 < el.size()) {
      if (ips.counts[i] < 1) throw std::invalid_argument("ips: count below 1");
      if (!e.is_cycle && ips.counts[i] != 1)
        throw std::invalid_argument("ips: rule element iterated");
    }
  }
}

// Streams every path schema whose first element starts at `start`, in a fixed
// depth-first order: at each state the cycle comes before plain rules, ending
// the schema before extending it. The consumer returns false to stop early.
inline void enumerate_schemas(const CounterSystem& s, const std::string& start,
                              const std::function<bool(const PathSchema&)>& visit) {
  FlatStructure fs = flat_structure(s);
  std::set<std::vector<std::size_t>> used_cycles;  // canonical: sorted rule set
  std::vector<bool> used_rule(s.rules.size(), false);
  std::vector<SchemaElement> seq;
  bool stop = false;

  auto cycle_key = [&](const std::vector<std::size_t>& rules) {
    std::vector<std::size_t> k = rules;
    std::sort(k.begin(), k.end());
    return k;
  };

  auto dfs = [&](auto&& self, std::size_t cur) -> void {
    if (stop) return;
    auto extend_with_rules = [&](auto&& again) -> void {
      for (std::size_t ri : s.outgoing(cur)) {
        if (stop) return;
        const TransitionRule& r = s.rules[ri];
        if (r.source == r.target) continue;  // self-loops live only as cycles
        if (used_rule[ri]) continue;
        used_rule[ri] = true;
        seq.push_back(SchemaElement{false, {ri}});
        again(again, s.state_index(r.target));
        seq.pop_back();
        used_rule[ri] = false;
      }
    };
    if (fs.cycle_at[cur]) {
      auto key = cycle_key(*fs.cycle_at[cur]);
      if (!used_cycles.count(key)) {
        used_cycles.insert(key);
        seq.push_back(SchemaElement{true, *fs.cycle_at[cur]});
        if (!visit(PathSchema{seq})) stop = true;
        if (!stop) extend_with_rules(self);
        seq.pop_back();
        used_cycles.erase(key);
      }
    }
    if (!stop) extend_with_rules(self);
  };
  dfs(dfs, s.state_index(start));
}

inline std::vector<PathSchema> collect_schemas(const CounterSystem& s,
                                               const std::string& start) {
  std::vector<PathSchema> r;
  enumerate_schemas(s, start, [&](const PathSchema& p) {
    r.push_back(p);
    return true;
  });
  return r;
}

// Label word spelled by the iterated schema: each traversed rule contributes
// the labels of its source state; the terminal cycle forms the loop.
inline LassoWord word_of(const CounterSystem& s, const IteratedPathSchema& ips) {
  check_ips_shape(s, ips);
  LassoWord w;
  auto letters_of = [&](const SchemaElement& e) {
    std::vector<Letter> ls;
    for (std::size_t ri : e.rules)
      ls.push_back(s.states[s.state_index(s.rules[ri].source)].labels);
    return ls;
  };
  for (std::size_t i = 0; i + 1 < ips.schema.elements.size(); ++i) {
    auto ls = letters_of(ips.schema.elements[i]);
    if (ips.counts[i] > Int(1000000))
      throw std::length_error("word_of: count too large to expand");
    std::uint64_t c = ips.counts[i].convert_to<std::uint64_t>();
    for (std::uint64_t k = 0; k < c; ++k)
      w.prefix.insert(w.prefix.end(), ls.begin(), ls.end());
  }
  w.loop = letters_of(ips.schema.elements.back());
  return w;
}

// Componentwise truncation at the threshold.
inline std::vector<Int> xi(const std::vector<Int>& m, const Int& threshold) {
  if (threshold < 1) throw std::invalid_argument("xi: threshold below 1");
  std::vector<Int> r = m;
  for (auto& v : r)
    if (v > threshold) v = threshold;
  return r;
}

}  // namespace facs
