#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "facs/logic.hpp"
#include "facs/solver.hpp"

namespace facs {

struct McOptions {
  std::uint64_t threshold_budget = 4096;  // largest truncation threshold accepted
};

// Raised when a formula's truncation threshold exceeds the configured
// budget; distinct from UNSAT.
struct McBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct McResult {
  bool sat = false;
  std::optional<RunWitness> witness;
  std::optional<LassoWord> word;  // truncated witness word that passed the checker
  std::uint64_t schemas_tried = 0;
  std::uint64_t leaves = 0;       // pattern combinations that reached the terminal cycle
  std::uint64_t evals = 0;        // distinct truncated words evaluated
  std::uint64_t ilp_calls = 0;
};

namespace mcdetail {

// Existential model checking: enumerate path schemas from the initial state
// and, per schema, every per-cycle truncation pattern — counts pinned to a
// value below T, or left open with the constraint count >= T. A pattern's
// truncated word is evaluated first; the run-existence ILP runs only for
// words the checker accepts.
template <typename Checker>
McResult mc_drive(const CounterSystem& s, const Configuration& init, std::uint64_t T,
                  const Checker& checker) {
  using namespace solverdetail;
  if (T == 0) throw std::invalid_argument("mc: threshold must be positive");
  if (!s.has_state(init.state)) throw std::invalid_argument("mc: unknown state " + init.state);
  if (init.values.size() != s.dimension)
    throw std::invalid_argument("mc: initial dimension mismatch");
  auto flat = check_flat(s);
  if (!flat.flat) throw std::domain_error("mc: system is not flat at state " + flat.shared_state);

  McResult res;
  CycleCache cache;
  enumerate_schemas(s, init.state, [&](const PathSchema& schema) {
    ++res.schemas_tried;
    std::vector<std::size_t> ordinal(schema.elements.size(), 0);
    std::size_t cycles = 0;
    for (std::size_t e = 0; e < schema.elements.size(); ++e)
      if (schema.elements[e].is_cycle) ordinal[e] = cycles++;
    const std::size_t width = cycles - 1;
    std::vector<Choice> choice(width);
    std::vector<Int> xi(schema.elements.size() - 1, Int(1));
    std::map<std::vector<Int>, bool> word_memo;

    auto walk = [&](auto&& self, std::size_t e, Assembly a) -> std::optional<RunWitness> {
      if (a.dead) return std::nullopt;
      const auto& el = schema.elements[e];
      if (e + 1 == schema.elements.size()) {
        add_terminal(s, analyzed(s, el.rules, cache), a);
        if (a.dead) return std::nullopt;
        ++res.leaves;
        auto [it, fresh] = word_memo.try_emplace(xi, false);
        if (fresh) {
          ++res.evals;
          it->second = checker(word_of(s, IteratedPathSchema{schema, xi}));
        }
        if (!it->second) return std::nullopt;
        ++res.ilp_calls;
        auto w = finish(s, schema, choice, ordinal, a);
        if (w) res.word = word_of(s, IteratedPathSchema{schema, xi});
        return w;
      }
      if (!el.is_cycle) {
        add_rule(s, el.rules.front(), a);
        return self(self, e + 1, std::move(a));
      }
      const CycleData& cd = analyzed(s, el.rules, cache);
      choice[ordinal[e]].data = &cd;
      const std::uint64_t around = cd.mono.alpha + 2 * cd.mono.beta + 1;
      const std::uint64_t cap = std::max<std::uint64_t>(T - 1, around);

      // Counts 1..T-1 pinned exactly; counts T..alpha+2beta+1 are explicit
      // members of the open class and share its truncated word.
      Assembly cur = a;
      for (std::uint64_t ell = 1; ell <= cap; ++ell) {
        add_turn(s, el.rules, cur);
        if (cur.dead) break;
        choice[ordinal[e]].parametric = false;
        choice[ordinal[e]].count = Int(ell);
        xi[e] = Int(ell < T ? ell : T);
        if (auto w = self(self, e + 1, cur)) return w;
      }
      // Open-class tail: one branch per residue, constrained to count >= T.
      for (std::uint64_t r = 0; r < cd.mono.beta; ++r) {
        Int z_min = ceil_div(Int(T) - Int(cd.mono.alpha) - Int(cd.mono.beta) - Int(r),
                             Int(cd.mono.beta));
        if (z_min < 1) z_min = 1;
        Assembly par = a;
        add_parametric(s, cd, r, z_min, ordinal[e], par);
        if (par.dead) continue;
        choice[ordinal[e]].parametric = true;
        choice[ordinal[e]].residue = r;
        xi[e] = Int(T);
        if (auto w = self(self, e + 1, std::move(par))) return w;
      }
      return std::nullopt;
    };

    auto w = walk(walk, 0, Assembly::start(init.values, width));
    if (!w) return true;
    res.sat = true;
    res.witness = std::move(w);
    return false;
  });
  return res;
}

}  // namespace mcdetail

// Does some run from init satisfy the formula at position 0?
inline McResult mc_pltl(const CounterSystem& s, const Configuration& init, const PltlFormula& f,
                        const McOptions& opt = {}) {
  const std::uint64_t T = 2 * temporal_depth(f) + 5;
  if (T > opt.threshold_budget)
    throw McBudgetError("mc_pltl: truncation threshold " + std::to_string(T) +
                        " exceeds the budget " + std::to_string(opt.threshold_budget));
  return mcdetail::mc_drive(s, init, T,
                            [&](const LassoWord& w) { return eval_pltl(w, f, 0); });
}

inline McResult mc_fo(const CounterSystem& s, const Configuration& init, const FoFormula& f,
                      const McOptions& opt = {}) {
  const std::size_t qh = quantifier_height(f);
  if (qh + 2 >= 63) throw McBudgetError("mc_fo: quantifier height out of range");
  const std::uint64_t T = std::uint64_t{1} << (qh + 2);
  if (T > opt.threshold_budget)
    throw McBudgetError("mc_fo: truncation threshold " + std::to_string(T) +
                        " exceeds the budget " + std::to_string(opt.threshold_budget));
  return mcdetail::mc_drive(s, init, T, [&](const LassoWord& w) { return eval_fo(w, f); });
}

}  // namespace facs
