#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "facs/matrix.hpp"

namespace facs {

// One row of a conjunctive guard: coeffs . x <= bound.
struct GuardRow {
  Vec coeffs;
  Int bound;
};

// Conjunction of rows; the empty conjunction is the trivial guard.
struct Guard {
  std::vector<GuardRow> rows;

  bool is_top() const { return rows.empty(); }

  bool satisfied(const Vec& v) const {
    for (const auto& r : rows)
      if (dot(r.coeffs, v) > r.bound) return false;
    return true;
  }
};

struct AffineUpdate {
  Matrix a;
  Vec b;

  Vec apply(const Vec& v) const { return vec_add(mat_vec(a, v), b); }
};

struct TransitionRule {
  std::string id;
  std::string source;
  std::string target;
  Guard guard;
  AffineUpdate update;
};

struct State {
  std::string id;
  std::vector<std::string> labels;  // sorted, duplicate-free
};

struct Configuration {
  std::string state;
  Vec values;

  bool operator==(const Configuration& o) const {
    return state == o.state && values == o.values;
  }
};

struct CounterSystem {
  std::size_t dimension = 0;
  std::vector<State> states;
  std::vector<TransitionRule> rules;

  std::size_t state_index(const std::string& id) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i].id == id) return i;
    throw std::invalid_argument("unknown state: " + id);
  }

  std::size_t rule_index(const std::string& id) const {
    for (std::size_t i = 0; i < rules.size(); ++i)
      if (rules[i].id == id) return i;
    throw std::invalid_argument("unknown rule: " + id);
  }

  bool has_state(const std::string& id) const {
    for (const auto& s : states)
      if (s.id == id) return true;
    return false;
  }

  // Outgoing rule indices of a state, in declaration order.
  std::vector<std::size_t> outgoing(std::size_t state) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < rules.size(); ++i)
      if (rules[i].source == states[state].id) r.push_back(i);
    return r;
  }
};

// Structural well-formedness; throws std::invalid_argument on violation.
inline void validate_wellformed(const CounterSystem& s) {
  std::set<std::string> sids;
  for (const auto& st : s.states) {
    if (st.id.empty()) throw std::invalid_argument("empty state id");
    if (!sids.insert(st.id).second)
      throw std::invalid_argument("duplicate state id: " + st.id);
    for (std::size_t i = 1; i < st.labels.size(); ++i)
      if (!(st.labels[i - 1] < st.labels[i]))
        throw std::invalid_argument("labels not sorted/unique on " + st.id);
  }
  std::set<std::string> rids;
  for (const auto& r : s.rules) {
    if (r.id.empty()) throw std::invalid_argument("empty rule id");
    if (!rids.insert(r.id).second)
      throw std::invalid_argument("duplicate rule id: " + r.id);
    if (!sids.count(r.source))
      throw std::invalid_argument("rule " + r.id + ": unknown source " + r.source);
    if (!sids.count(r.target))
      throw std::invalid_argument("rule " + r.id + ": unknown target " + r.target);
    if (r.update.a.rows != s.dimension || r.update.a.cols != s.dimension)
      throw std::invalid_argument("rule " + r.id + ": matrix dimension mismatch");
    if (r.update.b.size() != s.dimension)
      throw std::invalid_argument("rule " + r.id + ": offset dimension mismatch");
    for (const auto& row : r.guard.rows) {
      if (row.coeffs.size() != s.dimension)
        throw std::invalid_argument("rule " + r.id + ": guard dimension mismatch");
      if (s.dimension == 0)
        throw std::invalid_argument("rule " + r.id +
                                    ": only the trivial guard is allowed at dimension 0");
    }
  }
}

// Guarded step; nullopt signals a guard refusal.
inline std::optional<Configuration> step(const CounterSystem& s,
                                         const Configuration& c,
                                         std::size_t rule) {
  if (rule >= s.rules.size()) throw std::invalid_argument("rule index out of range");
  const TransitionRule& r = s.rules[rule];
  if (r.source != c.state)
    throw std::invalid_argument("step: rule " + r.id + " does not start at " + c.state);
  if (c.values.size() != s.dimension)
    throw std::invalid_argument("step: configuration dimension mismatch");
  if (!r.guard.satisfied(c.values)) return std::nullopt;
  return Configuration{r.target, r.update.apply(c.values)};
}

// Update application ignoring the guard.
inline Configuration pseudo_step(const CounterSystem& s, const Configuration& c,
                                 std::size_t rule) {
  if (rule >= s.rules.size()) throw std::invalid_argument("rule index out of range");
  const TransitionRule& r = s.rules[rule];
  if (r.source != c.state)
    throw std::invalid_argument("pseudo_step: rule " + r.id + " does not start at " + c.state);
  if (c.values.size() != s.dimension)
    throw std::invalid_argument("pseudo_step: configuration dimension mismatch");
  return Configuration{r.target, r.update.apply(c.values)};
}

// All cycles with pairwise-distinct intermediate states, each reported once,
// rotated so that its lowest-index state comes first. Rule ids stay in path
// order.
inline std::vector<std::vector<std::size_t>> simple_cycles(const CounterSystem& s) {
  std::vector<std::vector<std::size_t>> found;
  const std::size_t n = s.states.size();
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < s.rules.size(); ++i)
    out[s.state_index(s.rules[i].source)].push_back(i);

  std::vector<std::size_t> path;       // rule indices
  std::vector<bool> on_path(n, false);

  // Cycles whose minimal state index equals root are discovered from root,
  // visiting only states with index >= root.
  auto dfs = [&](auto&& self, std::size_t root, std::size_t cur) -> void {
    for (std::size_t ri : out[cur]) {
      std::size_t tgt = s.state_index(s.rules[ri].target);
      if (tgt == root) {
        path.push_back(ri);
        found.push_back(path);
        path.pop_back();
        continue;
      }
      if (tgt < root || on_path[tgt]) continue;
      on_path[tgt] = true;
      path.push_back(ri);
      self(self, root, tgt);
      path.pop_back();
      on_path[tgt] = false;
    }
  };
  for (std::size_t root = 0; root < n; ++root) {
    on_path[root] = true;
    dfs(dfs, root, root);
    on_path[root] = false;
  }
  return found;
}

struct FlatnessResult {
  bool flat = true;
  // Populated when not flat: two distinct simple cycles and the state they share.
  std::string shared_state;
  std::vector<std::string> cycle_a;
  std::vector<std::string> cycle_b;
};

// Per-state cycle map of a flat system: cycle_at[q] holds the unique simple
// cycle through q, rotated to start at q.
struct FlatStructure {
  std::vector<std::optional<std::vector<std::size_t>>> cycle_at;
};

namespace detail {

inline std::vector<std::size_t> states_on_cycle(const CounterSystem& s,
                                                const std::vector<std::size_t>& cyc) {
  std::vector<std::size_t> r;
  for (std::size_t ri : cyc) r.push_back(s.state_index(s.rules[ri].source));
  return r;
}

}  // namespace detail

inline FlatnessResult check_flat(const CounterSystem& s) {
  auto cycles = simple_cycles(s);
  const std::size_t n = s.states.size();
  std::vector<std::vector<std::size_t>> through(n);  // cycle indices per state
  for (std::size_t c = 0; c < cycles.size(); ++c)
    for (std::size_t q : detail::states_on_cycle(s, cycles[c])) through[q].push_back(c);

  FlatnessResult res;
  for (std::size_t q = 0; q < n; ++q) {
    if (through[q].size() < 2) continue;
    res.flat = false;
    res.shared_state = s.states[q].id;
    for (std::size_t ri : cycles[through[q][0]]) res.cycle_a.push_back(s.rules[ri].id);
    for (std::size_t ri : cycles[through[q][1]]) res.cycle_b.push_back(s.rules[ri].id);
    return res;
  }
  return res;
}

inline FlatStructure flat_structure(const CounterSystem& s) {
  auto cycles = simple_cycles(s);
  const std::size_t n = s.states.size();
  FlatStructure fs;
  fs.cycle_at.resize(n);
  for (const auto& cyc : cycles) {
    auto sts = detail::states_on_cycle(s, cyc);
    for (std::size_t pos = 0; pos < sts.size(); ++pos) {
      if (fs.cycle_at[sts[pos]])
        throw std::invalid_argument("flat_structure: system is not flat at state " +
                                    s.states[sts[pos]].id);
      std::vector<std::size_t> rot(cyc.begin() + pos, cyc.end());
      rot.insert(rot.end(), cyc.begin(), cyc.begin() + pos);
      fs.cycle_at[sts[pos]] = std::move(rot);
    }
  }
  return fs;
}

// Composed update matrix of a rule path: A_(k-1) * ... * A_0.
inline Matrix path_matrix(const CounterSystem& s, const std::vector<std::size_t>& rules) {
  Matrix m = Matrix::identity(s.dimension);
  for (std::size_t ri : rules) m = mat_mul(s.rules[ri].update.a, m);
  return m;
}

struct CycleMonoid {
  std::vector<std::size_t> rules;  // min-state rotation
  MonoidResult monoid;             // of the composed update matrix
};

struct FiniteMonoidResult {
  MonoidKind kind = MonoidKind::finite;  // worst verdict over all cycles
  std::vector<CycleMonoid> cycles;
  std::size_t offending = 0;  // index into cycles when kind != finite
};

// Checks, per simple cycle, that the powers of the composed update matrix
// form a finite monoid. Requires a flat system.
inline FiniteMonoidResult check_finite_monoid(const CounterSystem& s,
                                              std::uint64_t cap = 1000000) {
  if (!check_flat(s).flat)
    throw std::invalid_argument("check_finite_monoid: system is not flat");
  FiniteMonoidResult res;
  for (const auto& cyc : simple_cycles(s)) {
    CycleMonoid cm;
    cm.rules = cyc;
    cm.monoid = monoid_of(path_matrix(s, cyc), cap);
    res.cycles.push_back(std::move(cm));
    MonoidKind k = res.cycles.back().monoid.kind;
    if (k != MonoidKind::finite && res.kind == MonoidKind::finite) {
      res.kind = k;
      res.offending = res.cycles.size() - 1;
    }
    // An infinite verdict dominates a capped one.
    if (k == MonoidKind::infinite && res.kind == MonoidKind::capped) {
      res.kind = k;
      res.offending = res.cycles.size() - 1;
    }
  }
  return res;
}

namespace detail {

inline std::string fresh_state_id(const CounterSystem& s, std::string base) {
  std::string id = base;
  int k = 0;
  while (s.has_state(id)) id = base + "_" + std::to_string(++k);
  return id;
}

inline std::string fresh_rule_id(const std::set<std::string>& used, std::string base) {
  std::string id = base;
  int k = 0;
  while (used.count(id)) id = base + "_" + std::to_string(++k);
  return id;
}

}  // namespace detail

// Adds a sink state with a trivially guarded identity self-loop and a trivial
// escape rule from every state (including the sink's own loop counts as its
// escape). Every configuration then has at least one enabled successor, and
// flatness is preserved: no path leads back out of the sink.
inline CounterSystem complete_deadlock_free(const CounterSystem& s) {
  CounterSystem r = s;
  std::string sink = detail::fresh_state_id(s, "sink");
  r.states.push_back(State{sink, {}});

  std::set<std::string> rids;
  for (const auto& rule : r.rules) rids.insert(rule.id);

  AffineUpdate idu{Matrix::identity(s.dimension), Vec(s.dimension)};
  for (const auto& st : s.states) {
    std::string id = detail::fresh_rule_id(rids, "esc_" + st.id);
    rids.insert(id);
    r.rules.push_back(TransitionRule{id, st.id, sink, Guard{}, idu});
  }
  std::string loop = detail::fresh_rule_id(rids, "loop_" + sink);
  r.rules.push_back(TransitionRule{loop, sink, sink, Guard{}, idu});
  return r;
}

}  // namespace facs
