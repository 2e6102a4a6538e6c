#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "facs/logic.hpp"
#include "facs/schema.hpp"
#include "facs/system.hpp"

namespace facs {

// Budgeted breadth-first search. EXHAUSTED means the budgets ran out before
// the target showed up; it never certifies unreachability.
enum class BfsStatus { reachable, exhausted };

struct BfsResult {
  BfsStatus status = BfsStatus::exhausted;
  std::uint64_t explored = 0;              // configurations popped
  std::optional<Configuration> hit;        // first target configuration seen

  bool reachable() const { return status == BfsStatus::reachable; }
};

// Explores every run of at most step_budget - 1 steps whose configurations
// all satisfy |v|_inf <= value_budget. A step_budget of 1 inspects only the
// initial configuration.
inline BfsResult bfs_reach(const CounterSystem& s, const Configuration& init,
                           const std::string& target, std::uint64_t step_budget,
                           const Int& value_budget) {
  if (!s.has_state(target)) throw std::invalid_argument("bfs_reach: unknown target " + target);
  if (!s.has_state(init.state))
    throw std::invalid_argument("bfs_reach: unknown state " + init.state);
  if (init.values.size() != s.dimension)
    throw std::invalid_argument("bfs_reach: initial dimension mismatch");
  if (step_budget == 0 || value_budget < 0) return {};

  auto fits = [&](const Vec& v) {
    for (const Int& x : v)
      if (x > value_budget || -x > value_budget) return false;
    return true;
  };

  BfsResult res;
  if (!fits(init.values)) return res;

  std::set<std::pair<std::string, Vec>> seen;
  std::deque<std::pair<Configuration, std::uint64_t>> queue;  // (config, depth)
  seen.insert({init.state, init.values});
  queue.push_back({init, 0});

  while (!queue.empty()) {
    auto [cur, depth] = std::move(queue.front());
    queue.pop_front();
    ++res.explored;
    if (cur.state == target) {
      res.status = BfsStatus::reachable;
      res.hit = std::move(cur);
      return res;
    }
    if (depth + 1 >= step_budget) continue;
    for (std::size_t ri = 0; ri < s.rules.size(); ++ri) {
      if (s.rules[ri].source != cur.state) continue;
      auto next = step(s, cur, ri);
      if (!next || !fits(next->values)) continue;
      if (!seen.insert({next->state, next->values}).second) continue;
      queue.push_back({std::move(*next), depth + 1});
    }
  }
  return res;
}

// Step-by-step replay of an iterated path schema: the finite prefix in full,
// then the terminal cycle until `horizon` rule applications have been made.
struct ReplayResult {
  bool ok = true;
  std::uint64_t failed_step = 0;           // first refused guard, when !ok
  std::optional<Configuration> terminal_entry;  // set once the prefix completed
  Configuration last;                      // at failure, or after the horizon

  explicit operator bool() const { return ok; }
};

inline ReplayResult replay(const CounterSystem& s, const Configuration& init,
                           const IteratedPathSchema& ips, std::uint64_t horizon) {
  check_ips_shape(s, ips);
  const auto& el = ips.schema.elements;
  if (s.state_index(init.state) != element_source(s, el.front()))
    throw std::invalid_argument("replay: initial state does not start the schema");
  if (init.values.size() != s.dimension)
    throw std::invalid_argument("replay: initial dimension mismatch");

  ReplayResult res;
  res.last = init;
  std::uint64_t taken = 0;
  auto fire = [&](std::size_t ri) {  // false: out of horizon or guard refusal
    if (taken >= horizon) return false;
    auto next = step(s, res.last, ri);
    if (!next) {
      res.ok = false;
      res.failed_step = taken;
      return false;
    }
    res.last = std::move(*next);
    ++taken;
    return true;
  };

  for (std::size_t e = 0; e + 1 < el.size(); ++e) {
    for (Int c = 0; c < ips.counts[e]; ++c)
      for (std::size_t ri : el[e].rules)
        if (!fire(ri)) return res;
  }
  res.terminal_entry = res.last;
  while (taken < horizon)
    for (std::size_t ri : el.back().rules)
      if (!fire(ri)) return res;
  return res;
}

// Reference PLTL evaluation straight from the semantics: eventualities are
// scanned over a long but finite span. Exact once the span covers a full
// period past the position, which horizon_copies = 64 guarantees for the
// word sizes under test.
inline bool brute_eval_pltl(const LassoWord& w, const PltlFormula& f, std::size_t position = 0,
                            std::size_t horizon_copies = 64) {
  if (w.loop.empty()) throw std::invalid_argument("brute_eval_pltl: empty loop");
  const std::size_t span = w.prefix.size() + horizon_copies * w.loop.size();
  std::vector<std::map<std::size_t, bool>> memo(f.nodes.size());

  auto ev = [&](auto&& self, std::size_t x, std::size_t i) -> bool {
    const PltlNode& nd = f.nodes[x];
    switch (nd.op) {
      case PltlOp::top: return true;
      case PltlOp::atom: return logicdetail::letter_has(w.at(i), nd.atom);
      case PltlOp::neg: return !self(self, nd.lhs, i);
      case PltlOp::conj: return self(self, nd.lhs, i) && self(self, nd.rhs, i);
      case PltlOp::next: return self(self, nd.lhs, i + 1);
      case PltlOp::prev: return i > 0 && self(self, nd.lhs, i - 1);
      default: break;
    }
    auto it = memo[x].find(i);
    if (it != memo[x].end()) return it->second;
    bool r = false;
    if (nd.op == PltlOp::until) {
      for (std::size_t j = i; j < i + span; ++j) {
        if (self(self, nd.rhs, j)) {
          r = true;
          break;
        }
        if (!self(self, nd.lhs, j)) break;
      }
    } else {  // since
      for (std::size_t j = i + 1; j-- > 0;) {
        if (self(self, nd.rhs, j)) {
          r = true;
          break;
        }
        if (!self(self, nd.lhs, j)) break;
      }
    }
    memo[x].emplace(i, r);
    return r;
  };
  return ev(ev, f.root, position);
}

// Reference FO evaluation: plain recursive quantification over the first
// |u| + horizon_copies*|v| positions, no memoization.
inline bool brute_eval_fo(const LassoWord& w, const FoFormula& f,
                          std::size_t horizon_copies = 64) {
  if (w.loop.empty()) throw std::invalid_argument("brute_eval_fo: empty loop");
  const std::size_t domain = w.prefix.size() + horizon_copies * w.loop.size();
  std::vector<std::size_t> env(f.slots, 0);
  std::vector<char> bound(f.slots, 0);

  auto ev = [&](auto&& self, std::size_t x) -> bool {
    const FoNode& nd = f.nodes[x];
    switch (nd.op) {
      case FoOp::atom:
        if (!bound[nd.var]) throw std::invalid_argument("brute_eval_fo: free variable");
        return logicdetail::letter_has(w.at(env[nd.var]), nd.pred);
      case FoOp::less:
        if (!bound[nd.var] || !bound[nd.var2])
          throw std::invalid_argument("brute_eval_fo: free variable");
        return env[nd.var] < env[nd.var2];
      case FoOp::neg: return !self(self, nd.lhs);
      case FoOp::conj: return self(self, nd.lhs) && self(self, nd.rhs);
      case FoOp::exists: {
        bound[nd.var] = 1;
        bool r = false;
        for (std::size_t pos = 0; pos < domain && !r; ++pos) {
          env[nd.var] = pos;
          r = self(self, nd.lhs);
        }
        bound[nd.var] = 0;
        return r;
      }
    }
    throw std::logic_error("brute_eval_fo: bad node");
  };
  return ev(ev, f.root);
}

}  // namespace facs
