#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "facs/cycle_analysis.hpp"
#include "facs/ilp.hpp"
#include "facs/schema.hpp"
#include "facs/system.hpp"

namespace facs {

// Iteration mode of one cycle element in a run query. An explicit mode pins
// the count; a parametric mode leaves count = alpha + (z+1)*beta + residue
// with an integer unknown z >= z_min; the terminal mode marks the final,
// forever-iterated cycle.
struct CycleMode {
  enum class Kind { explicit_count, parametric, terminal };
  Kind kind = Kind::explicit_count;
  Int count = 1;              // explicit_count
  std::uint64_t residue = 0;  // parametric, in [0, beta)
  Int z_min = 1;              // parametric

  static CycleMode exact(Int c) { return {Kind::explicit_count, std::move(c), 0, 1}; }
  static CycleMode open(std::uint64_t r, Int zmin = 1) {
    return {Kind::parametric, 1, r, std::move(zmin)};
  }
  static CycleMode last() { return {Kind::terminal, 1, 0, 1}; }
};

struct RunWitness {
  PathSchema schema;
  std::vector<Int> counts;  // one per nonterminal element; rule elements count 1
  Configuration reached;    // entry configuration of the terminal cycle
  Int certificate;          // proven bound: max count <= certificate
};

namespace solverdetail {

struct CycleData {
  CycleUpdate cu;
  MonoidInfo mono;
  TranslationVectors tv;
};

inline CycleData analyze_cycle(const CounterSystem& s, const std::vector<std::size_t>& rules) {
  CycleData d;
  d.cu = compose_cycle(s, rules);
  MonoidResult mr = monoid_of(d.cu.a);
  if (!mr.finite())
    throw std::domain_error("cycle update matrix does not generate a finite monoid");
  d.mono = std::move(mr.info);
  d.tv = translation_vectors(s, d.cu, d.mono);
  return d;
}

// Rotation-specific cache; the same cycle entered at different states
// composes to different updates.
using CycleCache = std::map<std::vector<std::size_t>, CycleData>;

inline const CycleData& analyzed(const CounterSystem& s, const std::vector<std::size_t>& rules,
                                 CycleCache& cache) {
  auto it = cache.find(rules);
  if (it == cache.end()) it = cache.emplace(rules, analyze_cycle(s, rules)).first;
  return it->second;
}

// Counter values as affine forms over the z variables, plus the guard rows
// collected so far. Rows with no variable left are resolved on the spot.
struct Assembly {
  AffineForm state;
  std::vector<LinRow> rows;
  Vec z_min;
  bool dead = false;

  static Assembly start(const Vec& init, std::size_t width) {
    Assembly a;
    a.state.coef = Matrix(init.size(), width);
    a.state.cst = init;
    a.z_min = Vec(width, Int(1));
    return a;
  }
};

inline void push_row(Assembly& a, LinRow row) {
  for (const Int& c : row.coef) {
    if (c == 0) continue;
    a.rows.push_back(std::move(row));
    return;
  }
  if (row.rhs < 0) a.dead = true;
}

inline void add_rule(const CounterSystem& s, std::size_t ri, Assembly& a) {
  for (const auto& g : s.rules[ri].guard.rows) push_row(a, guard_row_on(g, a.state));
  apply_update(s.rules[ri].update, a.state);
}

inline void add_turn(const CounterSystem& s, const std::vector<std::size_t>& rules,
                     Assembly& a) {
  for (std::size_t ri : rules) add_rule(s, ri, a);
}

// Rewrites a window row over [entry_0..entry_{n-1}, z_local] onto the global
// variables: entry becomes the current symbolic state, z_local becomes column
// zcol. Pass zcol == width for fragments that never mention z.
inline LinRow substitute_row(const LinRow& local, const AffineForm& state, std::size_t zcol) {
  const std::size_t n = state.coef.rows;
  const std::size_t width = state.coef.cols;
  LinRow out;
  out.coef = Vec(width);
  for (std::size_t k = 0; k < width; ++k) {
    Int sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += local.coef[i] * state.coef.at(i, k);
    out.coef[k] = std::move(sum);
  }
  if (local.coef[n] != 0) {
    if (zcol >= width) throw std::logic_error("substitute_row: no column for z");
    out.coef[zcol] += local.coef[n];
  }
  out.rhs = local.rhs;
  for (std::size_t i = 0; i < n; ++i) out.rhs -= local.coef[i] * state.cst[i];
  return out;
}

inline AffineForm substitute_form(const AffineForm& local, const AffineForm& state,
                                  std::size_t zcol) {
  const std::size_t n = state.coef.rows;
  const std::size_t width = state.coef.cols;
  AffineForm out;
  out.coef = Matrix(n, width);
  out.cst = Vec(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < width; ++k) {
      Int sum = 0;
      for (std::size_t j = 0; j < n; ++j) sum += local.coef.at(i, j) * state.coef.at(j, k);
      out.coef.at(i, k) = std::move(sum);
    }
    if (local.coef.at(i, n) != 0) {
      if (zcol >= width) throw std::logic_error("substitute_form: no column for z");
      out.coef.at(i, zcol) += local.coef.at(i, n);
    }
    Int c = local.cst[i];
    for (std::size_t j = 0; j < n; ++j) c += local.coef.at(i, j) * state.cst[j];
    out.cst[i] = std::move(c);
  }
  return out;
}

inline void add_parametric(const CounterSystem& s, const CycleData& cd, std::uint64_t residue,
                           const Int& z_min, std::size_t zcol, Assembly& a) {
  ConstraintFragment frag =
      window_constraints(s, cd.cu, cd.mono, cd.tv, WindowMode{false, residue});
  for (const auto& r : frag.rows) push_row(a, substitute_row(r, a.state, zcol));
  a.state = substitute_form(frag.exit, a.state, zcol);
  if (z_min > a.z_min[zcol]) a.z_min[zcol] = z_min;
}

// Terminal cycle: head rows only; the symbolic state stays at the entry.
inline void add_terminal(const CounterSystem& s, const CycleData& cd, Assembly& a) {
  ConstraintFragment frag = window_constraints(s, cd.cu, cd.mono, cd.tv, WindowMode{true, 0});
  if (frag.infeasible) {
    a.dead = true;
    return;
  }
  const std::size_t width = a.state.coef.cols;
  for (const auto& r : frag.rows) push_row(a, substitute_row(r, a.state, width));
}

inline Vec eval_form(const AffineForm& f, const Vec& z) {
  return vec_add(mat_vec(f.coef, z), f.cst);
}

// Chosen mode of one nonterminal cycle, for folding z back into a count.
struct Choice {
  bool parametric = false;
  Int count = 1;            // explicit
  std::uint64_t residue = 0;
  const CycleData* data = nullptr;
};

inline std::optional<RunWitness> finish(const CounterSystem& s, const PathSchema& schema,
                                        const std::vector<Choice>& choice,
                                        const std::vector<std::size_t>& ordinal,
                                        const Assembly& a) {
  if (a.dead) return std::nullopt;
  LinSys sys(a.z_min.size());
  sys.rows = a.rows;
  sys.lower = a.z_min;
  auto z = ilp_solve(sys);
  if (!z) return std::nullopt;

  RunWitness w;
  w.schema = schema;
  Int box = ilp_box_bound(sys);
  w.certificate = 1;
  for (std::size_t e = 0; e + 1 < schema.elements.size(); ++e) {
    if (!schema.elements[e].is_cycle) {
      w.counts.push_back(1);
      continue;
    }
    const Choice& c = choice[ordinal[e]];
    if (!c.parametric) {
      w.counts.push_back(c.count);
      if (c.count > w.certificate) w.certificate = c.count;
      continue;
    }
    Int alpha = c.data->mono.alpha, beta = c.data->mono.beta;
    w.counts.push_back(alpha + ((*z)[ordinal[e]] + 1) * beta + Int(c.residue));
    Int cap = alpha + (box + 1) * beta + Int(c.residue);
    if (cap > w.certificate) w.certificate = cap;
  }
  for (const Int& m : w.counts)
    if (m > w.certificate) throw std::logic_error("witness count exceeds its certificate");

  const auto& last = schema.elements.back();
  w.reached.state = s.states[element_source(s, last)].id;
  w.reached.values = eval_form(a.state, *z);
  return w;
}

}  // namespace solverdetail

// Decides whether some run follows the schema under the given cycle modes
// (one mode per cycle element, the last one terminal) and returns the counts
// of a run that does.
inline std::optional<RunWitness> run_exists(const CounterSystem& s, const Configuration& init,
                                            const PathSchema& schema,
                                            const std::vector<CycleMode>& modes) {
  using namespace solverdetail;
  IteratedPathSchema probe{schema, std::vector<Int>(
                                       schema.elements.empty() ? 0 : schema.elements.size() - 1,
                                       Int(1))};
  check_ips_shape(s, probe);
  if (init.values.size() != s.dimension)
    throw std::invalid_argument("run_exists: initial dimension mismatch");
  if (s.state_index(init.state) != element_source(s, schema.elements.front()))
    throw std::invalid_argument("run_exists: initial state does not start the schema");

  std::vector<std::size_t> ordinal(schema.elements.size(), 0);
  std::size_t cycles = 0;
  for (std::size_t e = 0; e < schema.elements.size(); ++e)
    if (schema.elements[e].is_cycle) ordinal[e] = cycles++;
  if (modes.size() != cycles)
    throw std::invalid_argument("run_exists: expected one mode per cycle element");
  if (modes.back().kind != CycleMode::Kind::terminal)
    throw std::invalid_argument("run_exists: last cycle must use the terminal mode");

  const std::size_t width = cycles - 1;
  CycleCache cache;
  std::vector<Choice> choice(width);
  Assembly a = Assembly::start(init.values, width);

  for (std::size_t e = 0; e < schema.elements.size() && !a.dead; ++e) {
    const auto& el = schema.elements[e];
    if (!el.is_cycle) {
      add_rule(s, el.rules.front(), a);
      continue;
    }
    const CycleData& cd = analyzed(s, el.rules, cache);
    const CycleMode& m = modes[ordinal[e]];
    if (e + 1 == schema.elements.size()) {
      add_terminal(s, cd, a);
      break;
    }
    switch (m.kind) {
      case CycleMode::Kind::terminal:
        throw std::invalid_argument("run_exists: terminal mode on a nonterminal cycle");
      case CycleMode::Kind::explicit_count: {
        if (m.count < 1) throw std::invalid_argument("run_exists: explicit count must be >= 1");
        if (m.count > 1000000)
          throw std::length_error("run_exists: explicit count too large to unfold");
        choice[ordinal[e]] = Choice{false, m.count, 0, &cd};
        for (Int t = 0; t < m.count && !a.dead; ++t) add_turn(s, el.rules, a);
        break;
      }
      case CycleMode::Kind::parametric: {
        if (m.residue >= cd.mono.beta)
          throw std::invalid_argument("run_exists: residue out of range");
        if (m.z_min < 1) throw std::invalid_argument("run_exists: z_min must be >= 1");
        choice[ordinal[e]] = Choice{true, 1, m.residue, &cd};
        add_parametric(s, cd, m.residue, m.z_min, ordinal[e], a);
        break;
      }
    }
  }
  return finish(s, schema, choice, ordinal, a);
}

struct ReachResult {
  bool reachable = false;
  std::optional<RunWitness> witness;
  std::uint64_t schemas_tried = 0;
  std::uint64_t assignments_tried = 0;
};

namespace solverdetail {

inline std::optional<RunWitness> try_schema(const CounterSystem& s, const Configuration& init,
                                            const PathSchema& schema, CycleCache& cache,
                                            std::uint64_t& assignments) {
  std::vector<std::size_t> ordinal(schema.elements.size(), 0);
  std::size_t cycles = 0;
  for (std::size_t e = 0; e < schema.elements.size(); ++e)
    if (schema.elements[e].is_cycle) ordinal[e] = cycles++;
  const std::size_t width = cycles - 1;
  std::vector<Choice> choice(width);

  auto walk = [&](auto&& self, std::size_t e, Assembly a) -> std::optional<RunWitness> {
    if (a.dead) return std::nullopt;
    const auto& el = schema.elements[e];
    if (e + 1 == schema.elements.size()) {
      add_terminal(s, analyzed(s, el.rules, cache), a);
      ++assignments;
      return finish(s, schema, choice, ordinal, a);
    }
    if (!el.is_cycle) {
      add_rule(s, el.rules.front(), a);
      return self(self, e + 1, std::move(a));
    }
    const CycleData& cd = analyzed(s, el.rules, cache);
    choice[ordinal[e]].data = &cd;

    // Explicit counts 1 .. alpha+2beta+1, ascending. Rows only accumulate
    // with the count, so a resolved contradiction kills every later count.
    Assembly cur = a;
    const std::uint64_t cap = cd.mono.alpha + 2 * cd.mono.beta + 1;
    for (std::uint64_t ell = 1; ell <= cap; ++ell) {
      add_turn(s, el.rules, cur);
      if (cur.dead) break;
      choice[ordinal[e]].parametric = false;
      choice[ordinal[e]].count = Int(ell);
      if (auto w = self(self, e + 1, cur)) return w;
    }
    // Parametric tail, one branch per residue; covers every count >= alpha+2beta.
    for (std::uint64_t r = 0; r < cd.mono.beta; ++r) {
      Assembly par = a;
      add_parametric(s, cd, r, Int(1), ordinal[e], par);
      if (par.dead) continue;
      choice[ordinal[e]].parametric = true;
      choice[ordinal[e]].residue = r;
      if (auto w = self(self, e + 1, std::move(par))) return w;
    }
    return std::nullopt;
  };
  return walk(walk, 0, Assembly::start(init.values, width));
}

}  // namespace solverdetail

// Decides whether some run from init visits the target state. Requires a
// flat system whose cycles all have finite monoids; meaningful as plain state
// reachability only on deadlock-free systems, where every finite path
// extends to a run.
inline ReachResult reach(const CounterSystem& s, const Configuration& init,
                         const std::string& target) {
  if (!s.has_state(target)) throw std::invalid_argument("reach: unknown target " + target);
  if (!s.has_state(init.state)) throw std::invalid_argument("reach: unknown state " + init.state);
  if (init.values.size() != s.dimension)
    throw std::invalid_argument("reach: initial dimension mismatch");
  auto flat = check_flat(s);
  if (!flat.flat)
    throw std::domain_error("reach: system is not flat at state " + flat.shared_state);

  const std::size_t target_idx = s.state_index(target);
  solverdetail::CycleCache cache;
  ReachResult res;
  enumerate_schemas(s, init.state, [&](const PathSchema& p) {
    ++res.schemas_tried;
    if (touched_states(s, p).count(target_idx) == 0) return true;
    if (auto w = solverdetail::try_schema(s, init, p, cache, res.assignments_tried)) {
      res.reachable = true;
      res.witness = std::move(w);
      return false;
    }
    return true;
  });
  return res;
}

struct ValidationResult {
  bool valid = true;
  Int failed_step = 0;        // first refused guard, counting rule applications from 0
  std::string failed_rule;
  Vec failure_values;         // counter values the guard refused
  std::optional<Configuration> terminal_entry;  // set on success

  explicit operator bool() const { return valid; }
};

// Checks an iterated path schema against the system step by step, but never
// simulates a cycle beyond its alpha+beta+1 window: later turns are resolved
// through the translation-vector form value(p) = base + p*slope.
inline ValidationResult validate_ips(const CounterSystem& s, const Configuration& init,
                                     const IteratedPathSchema& ips) {
  using namespace solverdetail;
  check_ips_shape(s, ips);
  if (init.values.size() != s.dimension)
    throw std::invalid_argument("validate_ips: initial dimension mismatch");
  if (s.state_index(init.state) != element_source(s, ips.schema.elements.front()))
    throw std::invalid_argument("validate_ips: initial state does not start the schema");

  ValidationResult res;
  Vec v = init.values;
  Int step = 0;

  auto refuse = [&](Int at, std::size_t ri, Vec values) {
    res.valid = false;
    res.failed_step = std::move(at);
    res.failed_rule = s.rules[ri].id;
    res.failure_values = std::move(values);
  };

  const auto& el = ips.schema.elements;
  for (std::size_t e = 0; e < el.size(); ++e) {
    const bool terminal = e + 1 == el.size();
    if (!el[e].is_cycle) {
      std::size_t ri = el[e].rules.front();
      if (!s.rules[ri].guard.satisfied(v)) {
        refuse(step, ri, v);
        return res;
      }
      v = s.rules[ri].update.apply(v);
      ++step;
      continue;
    }

    const auto& rules = el[e].rules;
    const std::size_t k = rules.size();
    CycleData cd = analyze_cycle(s, rules);
    const std::uint64_t alpha = cd.mono.alpha, beta = cd.mono.beta;
    const Int window = Int(alpha) + Int(beta) + 1;
    const Int ell = terminal ? Int(-1) : ips.counts[e];
    const Vec entry = v;

    // Explicit simulation of the first min(ell, alpha+beta+1) turns.
    Int expl = (!terminal && ell < window) ? ell : window;
    Vec cur = entry;
    for (Int t = 0; t < expl; ++t) {
      for (std::size_t q = 0; q < k; ++q) {
        std::size_t ri = rules[q];
        if (!s.rules[ri].guard.satisfied(cur)) {
          refuse(step, ri, cur);
          return res;
        }
        cur = s.rules[ri].update.apply(cur);
        ++step;
      }
    }
    if (!terminal && ell <= window) {
      v = std::move(cur);
      continue;
    }

    if (terminal && infinitely_iterable(s, cd.cu, cd.tv)) {
      res.terminal_entry = Configuration{s.rules[rules.front()].source, entry};
      return res;
    }

    // Turn alpha+p*beta+r checks rule q against base(r,q) + p*slope(q); scan
    // all (r, q, row) for the earliest violated turn.
    const Int cycle_base = step - expl * Int(k);
    std::optional<Int> worst_turn;  // encoded as turn * k + q for ordering
    std::size_t worst_q = 0;
    for (std::uint64_t r = 0; r < beta; ++r) {
      const Int p_min = ceil_div(Int(beta) + 1 - Int(r), Int(beta));
      const Int p_max = terminal ? Int(-1) : floor_div(ell - 1 - Int(alpha) - Int(r), Int(beta));
      if (!terminal && p_max < p_min) continue;
      const Vec at_ar = iterate_update(cd.cu, cd.mono, entry, Int(alpha) + Int(r));
      for (std::size_t q = 0; q < k; ++q) {
        const Vec base = cd.cu.prefixes[q].apply(at_ar);
        for (const auto& g : s.rules[rules[q]].guard.rows) {
          const Int a0 = dot(g.coeffs, base);
          const Int slope = dot(g.coeffs, cd.tv.w[q]);
          Int p;
          if (slope <= 0) {
            if (a0 + p_min * slope <= g.bound) continue;
            p = p_min;
          } else {
            p = floor_div(g.bound - a0, slope) + 1;
            if (p < p_min) p = p_min;
          }
          if (!terminal && p > p_max) continue;
          Int turn = Int(alpha) + p * Int(beta) + Int(r);
          Int key = turn * Int(k) + Int(q);
          if (!worst_turn || key < *worst_turn) {
            worst_turn = key;
            worst_q = q;
          }
        }
      }
    }
    if (worst_turn) {
      Int turn = floor_div(*worst_turn, Int(k));
      Vec at_turn = iterate_update(cd.cu, cd.mono, entry, turn);
      refuse(cycle_base + *worst_turn, rules[worst_q],
             cd.cu.prefixes[worst_q].apply(at_turn));
      return res;
    }
    if (terminal) {
      // Not infinitely iterable, so some positive-slope row must have fired.
      throw std::logic_error("validate_ips: terminal cycle without a violated turn");
    }
    v = iterate_update(cd.cu, cd.mono, entry, ell);
    step = cycle_base + ell * Int(k);
  }
  throw std::logic_error("validate_ips: schema without a terminal cycle");
}

}  // namespace facs
