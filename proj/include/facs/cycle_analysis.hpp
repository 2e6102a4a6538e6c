#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "facs/linear_system.hpp"
#include "facs/system.hpp"

namespace facs {

// Composed affine update of one simple cycle, with the partial compositions
// of its first q steps for q in [0, k-1].
struct CycleUpdate {
  std::vector<std::size_t> rules;  // traversal order, rotated to the entry state
  Matrix a;
  Vec b;
  std::vector<AffineUpdate> prefixes;
};

inline CycleUpdate compose_cycle(const CounterSystem& s,
                                 const std::vector<std::size_t>& rules) {
  if (rules.empty()) throw std::invalid_argument("compose_cycle: empty cycle");
  CycleUpdate cu;
  cu.rules = rules;
  AffineUpdate acc{Matrix::identity(s.dimension), Vec(s.dimension)};
  for (std::size_t ri : rules) {
    cu.prefixes.push_back(acc);
    const AffineUpdate& u = s.rules[ri].update;
    acc.a = mat_mul(u.a, acc.a);
    acc.b = vec_add(mat_vec(u.a, acc.b), u.b);
  }
  cu.a = acc.a;
  cu.b = acc.b;
  return cu;
}

// f^j(0) = sum_{i<j} A^i b for j < alpha + beta, read off the power list.
inline Vec iterated_offset(const CycleUpdate& cu, const MonoidInfo& mono,
                           std::uint64_t j) {
  if (j > mono.powers.size())
    throw std::invalid_argument("iterated_offset: exponent beyond power list");
  Vec r(cu.b.size());
  for (std::uint64_t i = 0; i < j; ++i)
    r = vec_add(r, mat_vec(mono.powers[i], cu.b));
  return r;
}

// f^ell(v) in time independent of ell: below alpha+beta directly from the
// power list, above it through f^(alpha+pbeta+r)(v) = f^(alpha+r)(v) + p*w0.
inline Vec iterate_update(const CycleUpdate& cu, const MonoidInfo& mono, const Vec& v,
                          const Int& ell) {
  if (ell < 0) throw std::invalid_argument("iterate_update: negative exponent");
  const Int ab = Int(mono.alpha) + Int(mono.beta);
  if (ell < ab) {
    std::uint64_t e = ell.convert_to<std::uint64_t>();
    return vec_add(mat_vec(mono.powers[e], v), iterated_offset(cu, mono, e));
  }
  Int t = ell - mono.alpha;
  Int p = t / mono.beta;
  std::uint64_t r = (t % mono.beta).convert_to<std::uint64_t>();
  std::uint64_t ar = mono.alpha + r;
  Vec base = vec_add(mat_vec(mono.powers[ar], v), iterated_offset(cu, mono, ar));
  Vec w0 = mat_vec(mono.powers[mono.alpha], iterated_offset(cu, mono, mono.beta));
  return vec_add(base, vec_scale(p, w0));
}

// Per-step displacement of one extra period: w[0] = A^alpha f^beta(0) and
// w[i+1] = A_i w[i] along the cycle.
struct TranslationVectors {
  std::vector<Vec> w;
};

inline TranslationVectors translation_vectors(const CounterSystem& s,
                                              const CycleUpdate& cu,
                                              const MonoidInfo& mono) {
  TranslationVectors tv;
  Vec w = mat_vec(mono.powers[mono.alpha], iterated_offset(cu, mono, mono.beta));
  for (std::size_t i = 0; i < cu.rules.size(); ++i) {
    tv.w.push_back(w);
    w = mat_vec(s.rules[cu.rules[i]].update.a, w);
  }
  return tv;
}

// A cycle enabled on one more period stays enabled forever iff no guard row
// gains value along the translation.
inline bool infinitely_iterable(const CounterSystem& s, const CycleUpdate& cu,
                                const TranslationVectors& tv) {
  for (std::size_t i = 0; i < cu.rules.size(); ++i)
    for (const auto& row : s.rules[cu.rules[i]].guard.rows)
      if (dot(row.coeffs, tv.w[i]) > 0) return false;
  return true;
}

// Value affine in a symbol vector y: coef * y + cst.
struct AffineForm {
  Matrix coef;
  Vec cst;

  static AffineForm symbols(std::size_t n, std::size_t width, std::size_t offset) {
    AffineForm f;
    f.coef = Matrix(n, width);
    for (std::size_t i = 0; i < n; ++i) f.coef.at(i, offset + i) = 1;
    f.cst = Vec(n);
    return f;
  }
};

inline void apply_update(const AffineUpdate& u, AffineForm& f) {
  f.coef = mat_mul(u.a, f.coef);
  f.cst = vec_add(mat_vec(u.a, f.cst), u.b);
}

// Guard row against a symbolic value: c.(coef y + cst) <= bound.
inline LinRow guard_row_on(const GuardRow& g, const AffineForm& f) {
  LinRow row;
  row.coef.resize(f.coef.cols);
  for (std::size_t j = 0; j < f.coef.cols; ++j) {
    Int s = 0;
    for (std::size_t i = 0; i < g.coeffs.size(); ++i) s += g.coeffs[i] * f.coef.at(i, j);
    row.coef[j] = std::move(s);
  }
  row.rhs = g.bound - dot(g.coeffs, f.cst);
  return row;
}

// Unfolds `iterations` full turns of the cycle from the symbolic state,
// collecting every guard row; the state is advanced in place.
inline void unfold_cycle(const CounterSystem& s, const CycleUpdate& cu,
                         std::uint64_t iterations, AffineForm& state,
                         std::vector<LinRow>& rows) {
  for (std::uint64_t it = 0; it < iterations; ++it) {
    for (std::size_t ri : cu.rules) {
      for (const auto& g : s.rules[ri].guard.rows) rows.push_back(guard_row_on(g, state));
      apply_update(s.rules[ri].update, state);
    }
  }
}

struct WindowMode {
  bool terminal = false;
  std::uint64_t residue = 0;  // r in [0, beta) for the nonterminal case
};

// Guard constraints of an accelerated cycle over the symbols
// [entry_0 .. entry_{n-1}, z]. Nonterminal: the cycle runs
// alpha + (z+1)*beta + residue times; the rows cover the first
// alpha+beta+1 turns plus the final beta turns, whose entry value is
// A^(alpha+r) entry + b^(alpha+r) + z*w0, and `exit` is the symbolic value
// after the full count. Terminal: rows cover the first alpha+beta+1 turns and
// `infeasible` flags a cycle that cannot run forever.
struct ConstraintFragment {
  std::vector<LinRow> rows;
  bool infeasible = false;
  AffineForm exit;
};

inline ConstraintFragment window_constraints(const CounterSystem& s,
                                             const CycleUpdate& cu,
                                             const MonoidInfo& mono,
                                             const TranslationVectors& tv,
                                             const WindowMode& mode) {
  if (!mode.terminal && mode.residue >= mono.beta)
    throw std::invalid_argument("window_constraints: residue out of range");
  const std::size_t n = s.dimension;
  ConstraintFragment frag;

  AffineForm head = AffineForm::symbols(n, n + 1, 0);
  unfold_cycle(s, cu, mono.alpha + mono.beta + 1, head, frag.rows);

  if (mode.terminal) {
    frag.infeasible = !infinitely_iterable(s, cu, tv);
    return frag;
  }

  std::uint64_t ar = mono.alpha + mode.residue;
  AffineForm tail;
  tail.coef = Matrix(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) tail.coef.at(i, j) = mono.powers[ar].at(i, j);
    tail.coef.at(i, n) = tv.w[0][i];
  }
  tail.cst = iterated_offset(cu, mono, ar);
  unfold_cycle(s, cu, mono.beta, tail, frag.rows);
  frag.exit = tail;
  return frag;
}

}  // namespace facs
