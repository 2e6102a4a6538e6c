#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "facs/logic.hpp"
#include "facs/system.hpp"

namespace facs {

// Seeded generator with platform-independent draws (std distributions are
// not portable across standard libraries).
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::uint64_t raw() { return eng(); }

  // Uniform-ish draw in [lo, hi]; modulo bias is irrelevant at these ranges.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("Rng::range: empty interval");
    return lo + static_cast<std::int64_t>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool coin(std::uint64_t num = 1, std::uint64_t den = 2) { return raw() % den < num; }
};

// Entries in {-1,0,1}, at most one nonzero per row and per column. The class
// is closed under products and every member generates a finite monoid of
// powers (all power entries stay in {-1,0,1}).
inline Matrix random_signed_partial_permutation(Rng& rng, std::size_t n) {
  Matrix m(n, n);
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  for (std::size_t i = n; i > 1; --i)
    std::swap(cols[i - 1], cols[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(i) - 1))]);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.coin(1, 4)) continue;  // dead row and column
    m.at(i, cols[i]) = rng.coin(1, 4) ? Int(-1) : Int(1);
  }
  return m;
}

// Block-diagonal combination of identity, rotation, nilpotent-shift and zero
// blocks, optionally conjugated by a small unimodular matrix. The result
// always generates a finite monoid of powers.
inline Matrix random_finite_monoid_matrix(Rng& rng, std::size_t n, int conjugations = -1) {
  Matrix b(n, n);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t len = static_cast<std::size_t>(
        rng.range(1, static_cast<std::int64_t>(n - pos)));
    switch (rng.range(0, 3)) {
      case 0:  // identity block
        for (std::size_t i = 0; i < len; ++i) b.at(pos + i, pos + i) = 1;
        break;
      case 1:  // rotation block
        for (std::size_t i = 0; i + 1 < len; ++i) b.at(pos + i, pos + i + 1) = 1;
        b.at(pos + len - 1, pos) = 1;
        break;
      case 2:  // nilpotent shift block
        for (std::size_t i = 0; i + 1 < len; ++i) b.at(pos + i, pos + i + 1) = 1;
        break;
      default:  // zero block
        break;
    }
    pos += len;
  }
  if (conjugations < 0) conjugations = static_cast<int>(rng.range(0, 2));
  Matrix u = Matrix::identity(n);
  Matrix uinv = Matrix::identity(n);
  for (int t = 0; t < conjugations && n >= 2; ++t) {
    std::size_t i = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(n) - 1));
    std::size_t j = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(n) - 1));
    if (i == j) continue;
    Int c = rng.coin() ? Int(1) : Int(-1);
    for (std::size_t k = 0; k < n; ++k) u.at(i, k) += c * u.at(j, k);      // E * U
    for (std::size_t k = 0; k < n; ++k) uinv.at(k, j) -= c * uinv.at(k, i);  // Uinv * E^-1
  }
  return mat_mul(mat_mul(u, b), uinv);
}

struct SystemGenOptions {
  std::size_t max_states = 5;
  std::size_t dimension = 3;
  std::int64_t coeff_lo = -2, coeff_hi = 2;
  std::int64_t bound_lo = -3, bound_hi = 3;
  std::vector<std::string> atoms{"a", "b", "c"};
};

// Random flat counter system whose cycle updates generate finite monoids by
// construction: states form a chain of segments (plain state, self-loop state
// or a two-state ring) and updates are drawn from the signed partial
// permutation pool.
inline CounterSystem random_flat_system(Rng& rng, const SystemGenOptions& opt) {
  CounterSystem s;
  s.dimension = opt.dimension;

  auto new_state = [&]() {
    State st;
    st.id = "q" + std::to_string(s.states.size());
    for (const auto& a : opt.atoms)
      if (rng.coin(1, 3)) st.labels.push_back(a);
    s.states.push_back(st);
    return s.states.size() - 1;
  };
  auto random_guard = [&]() {
    Guard g;
    std::int64_t rows = rng.range(0, 2);
    for (std::int64_t r = 0; r < rows; ++r) {
      GuardRow row;
      for (std::size_t i = 0; i < s.dimension; ++i)
        row.coeffs.push_back(rng.range(opt.coeff_lo, opt.coeff_hi));
      row.bound = rng.range(opt.bound_lo, opt.bound_hi);
      g.rows.push_back(std::move(row));
    }
    return g;
  };
  auto random_update = [&]() {
    AffineUpdate u;
    u.a = rng.coin() ? Matrix::identity(s.dimension)
                     : random_signed_partial_permutation(rng, s.dimension);
    for (std::size_t i = 0; i < s.dimension; ++i)
      u.b.push_back(rng.range(opt.coeff_lo, opt.coeff_hi));
    return u;
  };
  auto add_rule = [&](std::size_t from, std::size_t to) {
    TransitionRule r;
    r.id = "d" + std::to_string(s.rules.size());
    r.source = s.states[from].id;
    r.target = s.states[to].id;
    r.guard = random_guard();
    r.update = random_update();
    s.rules.push_back(std::move(r));
  };

  std::size_t prev_exit = new_state();
  if (rng.coin()) add_rule(prev_exit, prev_exit);
  while (s.states.size() < opt.max_states && rng.coin(2, 3)) {
    switch (rng.range(0, 2)) {
      case 0: {  // plain state
        std::size_t q = new_state();
        add_rule(prev_exit, q);
        prev_exit = q;
        break;
      }
      case 1: {  // self-loop state
        std::size_t q = new_state();
        add_rule(prev_exit, q);
        add_rule(q, q);
        prev_exit = q;
        break;
      }
      default: {  // two-state ring, if it still fits
        if (s.states.size() + 2 > opt.max_states) break;
        std::size_t q1 = new_state();
        std::size_t q2 = new_state();
        add_rule(prev_exit, q1);
        add_rule(q1, q2);
        add_rule(q2, q1);
        prev_exit = rng.coin() ? q1 : q2;
        break;
      }
    }
  }
  return s;
}

namespace gendetail {

inline std::size_t gen_pltl(Rng& rng, PltlFormula& f, const std::vector<std::string>& atoms,
                            std::size_t td, std::size_t height) {
  auto atom = [&]() {
    std::size_t a = static_cast<std::size_t>(
        rng.range(0, static_cast<std::int64_t>(atoms.size()) - 1));
    f.nodes.push_back(PltlNode{PltlOp::atom, atoms[a], 0, 0});
    return f.nodes.size() - 1;
  };
  if (height == 0) return atom();
  std::int64_t pick = rng.range(0, td > 0 ? 9 : 5);
  switch (pick) {
    case 0:
    case 1: return atom();
    case 2:
    case 3: {
      std::size_t l = gen_pltl(rng, f, atoms, td, height - 1);
      f.nodes.push_back(PltlNode{PltlOp::neg, "", l, 0});
      break;
    }
    case 4:
    case 5: {
      std::size_t l = gen_pltl(rng, f, atoms, td, height - 1);
      std::size_t r = gen_pltl(rng, f, atoms, td, height - 1);
      f.nodes.push_back(PltlNode{PltlOp::conj, "", l, r});
      break;
    }
    case 6:
    case 7: {
      std::size_t l = gen_pltl(rng, f, atoms, td - 1, height - 1);
      f.nodes.push_back(PltlNode{pick == 6 ? PltlOp::next : PltlOp::prev, "", l, 0});
      break;
    }
    default: {
      std::size_t l = gen_pltl(rng, f, atoms, td - 1, height - 1);
      std::size_t r = gen_pltl(rng, f, atoms, td - 1, height - 1);
      f.nodes.push_back(PltlNode{pick == 8 ? PltlOp::until : PltlOp::since, "", l, r});
      break;
    }
  }
  return f.nodes.size() - 1;
}

inline std::size_t gen_fo(Rng& rng, FoFormula& f, const std::vector<std::string>& preds,
                          std::vector<std::size_t>& scope, std::size_t qh,
                          std::size_t height) {
  auto quantify = [&]() {
    std::size_t slot = f.slots++;
    scope.push_back(slot);
    std::size_t body = gen_fo(rng, f, preds, scope, qh - 1, height == 0 ? 0 : height - 1);
    scope.pop_back();
    f.nodes.push_back(FoNode{FoOp::exists, "", slot, 0, body, 0});
    return f.nodes.size() - 1;
  };
  if (scope.empty()) return quantify();  // leaves need a variable in scope

  auto leaf = [&]() {
    auto var = [&]() {
      return scope[static_cast<std::size_t>(
          rng.range(0, static_cast<std::int64_t>(scope.size()) - 1))];
    };
    if (rng.coin()) {
      std::size_t p = static_cast<std::size_t>(
          rng.range(0, static_cast<std::int64_t>(preds.size()) - 1));
      f.nodes.push_back(FoNode{FoOp::atom, preds[p], var(), 0, 0, 0});
    } else {
      f.nodes.push_back(FoNode{FoOp::less, "", var(), var(), 0, 0});
    }
    return f.nodes.size() - 1;
  };
  if (height == 0) return leaf();
  std::int64_t pick = rng.range(0, qh > 0 ? 7 : 5);
  switch (pick) {
    case 0:
    case 1: return leaf();
    case 2:
    case 3: {
      std::size_t l = gen_fo(rng, f, preds, scope, qh, height - 1);
      f.nodes.push_back(FoNode{FoOp::neg, "", 0, 0, l, 0});
      break;
    }
    case 4:
    case 5: {
      std::size_t l = gen_fo(rng, f, preds, scope, qh, height - 1);
      std::size_t r = gen_fo(rng, f, preds, scope, qh, height - 1);
      f.nodes.push_back(FoNode{FoOp::conj, "", 0, 0, l, r});
      break;
    }
    default: return quantify();
  }
  return f.nodes.size() - 1;
}

}  // namespace gendetail

// Random formula with temporal depth at most td.
inline PltlFormula random_pltl(Rng& rng, const std::vector<std::string>& atoms, std::size_t td,
                               std::size_t height = 4) {
  PltlFormula f;
  f.root = gendetail::gen_pltl(rng, f, atoms, td, height);
  return f;
}

// Random closed formula with quantifier height at most qh (and at least 1).
inline FoFormula random_fo(Rng& rng, const std::vector<std::string>& preds, std::size_t qh,
                           std::size_t height = 4) {
  if (qh == 0) throw std::invalid_argument("random_fo: need at least one quantifier");
  FoFormula f;
  std::vector<std::size_t> scope;
  f.root = gendetail::gen_fo(rng, f, preds, scope, qh, height);
  return f;
}

}  // namespace facs
