#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "facs/schema.hpp"

namespace facs {

// ---------------------------------------------------------------------------
// Linear temporal logic with past. The stored tree uses only the core
// connectives; |, ->, F and G are rewritten away by the parser.
// ---------------------------------------------------------------------------

enum class PltlOp { top, atom, neg, conj, next, until, prev, since };

struct PltlNode {
  PltlOp op = PltlOp::top;
  std::string atom;               // op == atom
  std::size_t lhs = 0, rhs = 0;   // children precede parents in the arena
};

struct PltlFormula {
  std::vector<PltlNode> nodes;
  std::size_t root = 0;
};

inline std::size_t temporal_depth(const PltlFormula& f) {
  std::vector<std::size_t> d(f.nodes.size(), 0);
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const PltlNode& n = f.nodes[i];
    switch (n.op) {
      case PltlOp::top:
      case PltlOp::atom: d[i] = 0; break;
      case PltlOp::neg: d[i] = d[n.lhs]; break;
      case PltlOp::conj: d[i] = std::max(d[n.lhs], d[n.rhs]); break;
      case PltlOp::next:
      case PltlOp::prev: d[i] = d[n.lhs] + 1; break;
      case PltlOp::until:
      case PltlOp::since: d[i] = std::max(d[n.lhs], d[n.rhs]) + 1; break;
    }
  }
  return d[f.root];
}

// Existential check of the negation decides the universal question.
inline PltlFormula pltl_negate(PltlFormula f) {
  f.nodes.push_back(PltlNode{PltlOp::neg, "", f.root, 0});
  f.root = f.nodes.size() - 1;
  return f;
}

// ---------------------------------------------------------------------------
// First-order logic over positions. Core connectives only; forall, | and ->
// are rewritten by the parser. Each quantifier occurrence owns a slot.
// ---------------------------------------------------------------------------

enum class FoOp { atom, less, neg, conj, exists };

struct FoNode {
  FoOp op = FoOp::atom;
  std::string pred;               // op == atom
  std::size_t var = 0, var2 = 0;  // atom: var; less: var < var2; exists: bound slot
  std::size_t lhs = 0, rhs = 0;   // children precede parents
};

struct FoFormula {
  std::vector<FoNode> nodes;
  std::size_t root = 0;
  std::size_t slots = 0;
};

inline std::size_t quantifier_height(const FoFormula& f) {
  std::vector<std::size_t> d(f.nodes.size(), 0);
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const FoNode& n = f.nodes[i];
    switch (n.op) {
      case FoOp::atom:
      case FoOp::less: d[i] = 0; break;
      case FoOp::neg: d[i] = d[n.lhs]; break;
      case FoOp::conj: d[i] = std::max(d[n.lhs], d[n.rhs]); break;
      case FoOp::exists: d[i] = d[n.lhs] + 1; break;
    }
  }
  return d[f.root];
}

inline FoFormula fo_negate(FoFormula f) {
  f.nodes.push_back(FoNode{FoOp::neg, "", 0, 0, f.root, 0});
  f.root = f.nodes.size() - 1;
  return f;
}

// ---------------------------------------------------------------------------
// Shared lexer. Identifiers are [A-Za-z_][A-Za-z0-9_]*; keyword status is
// decided by the parsers.
// ---------------------------------------------------------------------------

namespace logicdetail {

struct Token {
  enum Kind { ident, lparen, rparen, bang, amp, pipe, arrow, less, dot, end };
  Kind kind = end;
  std::string text;
  std::size_t pos = 0;
};

inline std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_ident = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_';
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    switch (c) {
      case '(': t.kind = Token::lparen; ++i; break;
      case ')': t.kind = Token::rparen; ++i; break;
      case '!': t.kind = Token::bang; ++i; break;
      case '&': t.kind = Token::amp; ++i; break;
      case '|': t.kind = Token::pipe; ++i; break;
      case '<': t.kind = Token::less; ++i; break;
      case '.': t.kind = Token::dot; ++i; break;
      case '-':
        if (i + 1 >= s.size() || s[i + 1] != '>')
          throw std::invalid_argument("formula: stray '-' at position " + std::to_string(i));
        t.kind = Token::arrow;
        i += 2;
        break;
      default: {
        if (!is_ident(c) || (c >= '0' && c <= '9'))
          throw std::invalid_argument("formula: unexpected character '" + std::string(1, c) +
                                      "' at position " + std::to_string(i));
        std::size_t j = i;
        while (j < s.size() && is_ident(s[j])) ++j;
        t.kind = Token::ident;
        t.text = s.substr(i, j - i);
        i = j;
        break;
      }
    }
    out.push_back(std::move(t));
  }
  out.push_back(Token{Token::end, "", s.size()});
  return out;
}

struct PltlParser {
  const std::vector<Token>& ts;
  std::size_t i = 0;
  PltlFormula f;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("pltl: " + what + " at position " + std::to_string(ts[i].pos));
  }
  bool eat(Token::Kind k) {
    if (ts[i].kind != k) return false;
    ++i;
    return true;
  }
  bool word(const char* w) {
    if (ts[i].kind != Token::ident || ts[i].text != w) return false;
    ++i;
    return true;
  }
  static bool reserved(const std::string& t) {
    return t == "X" || t == "U" || t == "S" || t == "Y" || t == "F" || t == "G" ||
           t == "true" || t == "false";
  }

  std::size_t push(PltlNode n) {
    f.nodes.push_back(std::move(n));
    return f.nodes.size() - 1;
  }
  std::size_t mk(PltlOp op, std::size_t l = 0, std::size_t r = 0) {
    return push(PltlNode{op, "", l, r});
  }

  std::size_t impl() {
    std::size_t l = disj();
    if (!eat(Token::arrow)) return l;
    std::size_t r = impl();
    return mk(PltlOp::neg, mk(PltlOp::conj, l, mk(PltlOp::neg, r)));
  }
  std::size_t disj() {
    std::size_t l = conj();
    while (eat(Token::pipe)) {
      std::size_t r = conj();
      l = mk(PltlOp::neg, mk(PltlOp::conj, mk(PltlOp::neg, l), mk(PltlOp::neg, r)));
    }
    return l;
  }
  std::size_t conj() {
    std::size_t l = until();
    while (eat(Token::amp)) l = mk(PltlOp::conj, l, until());
    return l;
  }
  std::size_t until() {
    std::size_t l = unary();
    if (word("U")) return mk(PltlOp::until, l, until());
    if (word("S")) return mk(PltlOp::since, l, until());
    return l;
  }
  std::size_t unary() {
    if (eat(Token::bang)) return mk(PltlOp::neg, unary());
    if (word("X")) return mk(PltlOp::next, unary());
    if (word("Y")) return mk(PltlOp::prev, unary());
    if (word("F")) return mk(PltlOp::until, mk(PltlOp::top), unary());
    if (word("G")) {
      std::size_t body = unary();
      return mk(PltlOp::neg, mk(PltlOp::until, mk(PltlOp::top), mk(PltlOp::neg, body)));
    }
    return primary();
  }
  std::size_t primary() {
    if (eat(Token::lparen)) {
      std::size_t l = impl();
      if (!eat(Token::rparen)) fail("expected ')'");
      return l;
    }
    if (ts[i].kind != Token::ident) fail("expected an atom");
    if (word("true")) return mk(PltlOp::top);
    if (word("false")) return mk(PltlOp::neg, mk(PltlOp::top));
    if (reserved(ts[i].text)) fail("operator '" + ts[i].text + "' needs an operand");
    std::size_t n = push(PltlNode{PltlOp::atom, ts[i].text, 0, 0});
    ++i;
    return n;
  }
};

struct FoParser {
  const std::vector<Token>& ts;
  std::size_t i = 0;
  FoFormula f;
  std::vector<std::pair<std::string, std::size_t>> scope;  // name -> slot, innermost last

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("fo: " + what + " at position " + std::to_string(ts[i].pos));
  }
  bool eat(Token::Kind k) {
    if (ts[i].kind != k) return false;
    ++i;
    return true;
  }
  bool word(const char* w) {
    if (ts[i].kind != Token::ident || ts[i].text != w) return false;
    ++i;
    return true;
  }
  static bool reserved(const std::string& t) { return t == "exists" || t == "forall"; }

  std::size_t push(FoNode n) {
    f.nodes.push_back(std::move(n));
    return f.nodes.size() - 1;
  }
  std::size_t mk(FoOp op, std::size_t l = 0, std::size_t r = 0) {
    return push(FoNode{op, "", 0, 0, l, r});
  }

  std::string ident(const char* what) {
    if (ts[i].kind != Token::ident || reserved(ts[i].text)) fail(std::string("expected ") + what);
    std::string t = ts[i].text;
    ++i;
    return t;
  }
  std::size_t slot_of(const std::string& name) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == name) return it->second;
    throw std::invalid_argument("fo: unbound variable " + name);
  }

  std::size_t impl() {
    std::size_t l = disj();
    if (!eat(Token::arrow)) return l;
    std::size_t r = impl();
    return mk(FoOp::neg, mk(FoOp::conj, l, mk(FoOp::neg, r)));
  }
  std::size_t disj() {
    std::size_t l = conj();
    while (eat(Token::pipe)) {
      std::size_t r = conj();
      l = mk(FoOp::neg, mk(FoOp::conj, mk(FoOp::neg, l), mk(FoOp::neg, r)));
    }
    return l;
  }
  std::size_t conj() {
    std::size_t l = unary();
    while (eat(Token::amp)) l = mk(FoOp::conj, l, unary());
    return l;
  }
  // The body of a quantifier extends as far to the right as possible.
  std::size_t unary() {
    if (eat(Token::bang)) return mk(FoOp::neg, unary());
    if (word("exists")) return quantified(false);
    if (word("forall")) return quantified(true);
    return primary();
  }
  std::size_t quantified(bool universal) {
    std::string name = ident("a variable after the quantifier");
    if (!eat(Token::dot)) fail("expected '.' after the quantified variable");
    std::size_t slot = f.slots++;
    scope.push_back({name, slot});
    std::size_t body = impl();
    scope.pop_back();
    if (universal) body = mk(FoOp::neg, body);
    std::size_t ex = push(FoNode{FoOp::exists, "", slot, 0, body, 0});
    return universal ? mk(FoOp::neg, ex) : ex;
  }
  std::size_t primary() {
    if (eat(Token::lparen)) {
      std::size_t l = impl();
      if (!eat(Token::rparen)) fail("expected ')'");
      return l;
    }
    std::string first = ident("a predicate or variable");
    if (eat(Token::lparen)) {
      std::string v = ident("a variable");
      if (!eat(Token::rparen)) fail("expected ')'");
      return push(FoNode{FoOp::atom, first, slot_of(v), 0, 0, 0});
    }
    if (eat(Token::less)) {
      std::string v = ident("a variable");
      return push(FoNode{FoOp::less, "", slot_of(first), slot_of(v), 0, 0});
    }
    fail("expected '(' or '<' after '" + first + "'");
  }
};

inline bool letter_has(const Letter& l, const std::string& a) {
  return std::binary_search(l.begin(), l.end(), a);
}

}  // namespace logicdetail

inline PltlFormula parse_pltl(const std::string& text) {
  auto ts = logicdetail::lex(text);
  logicdetail::PltlParser p{ts};
  std::size_t root = p.impl();
  if (ts[p.i].kind != logicdetail::Token::end) p.fail("trailing input");
  p.f.root = root;
  return std::move(p.f);
}

inline FoFormula parse_fo(const std::string& text) {
  auto ts = logicdetail::lex(text);
  logicdetail::FoParser p{ts};
  std::size_t root = p.impl();
  if (ts[p.i].kind != logicdetail::Token::end) p.fail("trailing input");
  p.f.root = root;
  return std::move(p.f);
}

// ---------------------------------------------------------------------------
// PLTL evaluation over u.v^omega: dynamic programming on the expansion
// u.v^(2 td + 6), where the last loop copy stands for all later copies and
// its successor wraps to the copy's own start. Past operators run forward on
// absolute positions.
// ---------------------------------------------------------------------------

inline bool eval_pltl(const LassoWord& w, const PltlFormula& f, std::size_t position = 0) {
  if (w.loop.empty()) throw std::invalid_argument("eval_pltl: empty loop");
  if (f.nodes.empty()) throw std::invalid_argument("eval_pltl: empty formula");
  const std::size_t m = w.loop.size();
  const std::size_t copies = 2 * temporal_depth(f) + 6;
  const std::size_t L = w.prefix.size() + copies * m;
  if (position >= L)
    throw std::invalid_argument("eval_pltl: position beyond the evaluation horizon");
  const std::size_t cycle_start = L - m;
  auto succ = [&](std::size_t i) { return i + 1 < L ? i + 1 : cycle_start; };

  std::vector<std::vector<char>> val(f.nodes.size(), std::vector<char>(L, 0));
  for (std::size_t x = 0; x < f.nodes.size(); ++x) {
    const PltlNode& nd = f.nodes[x];
    auto& out = val[x];
    switch (nd.op) {
      case PltlOp::top:
        for (std::size_t i = 0; i < L; ++i) out[i] = 1;
        break;
      case PltlOp::atom:
        for (std::size_t i = 0; i < L; ++i)
          out[i] = logicdetail::letter_has(w.at(i), nd.atom) ? 1 : 0;
        break;
      case PltlOp::neg:
        for (std::size_t i = 0; i < L; ++i) out[i] = !val[nd.lhs][i];
        break;
      case PltlOp::conj:
        for (std::size_t i = 0; i < L; ++i) out[i] = val[nd.lhs][i] && val[nd.rhs][i];
        break;
      case PltlOp::next:
        for (std::size_t i = 0; i < L; ++i) out[i] = val[nd.lhs][succ(i)];
        break;
      case PltlOp::prev:
        for (std::size_t i = 0; i < L; ++i) out[i] = i > 0 && val[nd.lhs][i - 1];
        break;
      case PltlOp::since:
        for (std::size_t i = 0; i < L; ++i)
          out[i] = val[nd.rhs][i] || (val[nd.lhs][i] && i > 0 && out[i - 1]);
        break;
      case PltlOp::until: {
        // On the final copy the successor structure is a cycle; one period
        // of scanning settles each position exactly.
        for (std::size_t c = 0; c < m; ++c) {
          std::size_t i = cycle_start + c, j = i;
          char r = 0;
          for (std::size_t n = 0; n < m; ++n) {
            if (val[nd.rhs][j]) {
              r = 1;
              break;
            }
            if (!val[nd.lhs][j]) break;
            j = succ(j);
          }
          out[i] = r;
        }
        for (std::size_t i = cycle_start; i-- > 0;)
          out[i] = val[nd.rhs][i] || (val[nd.lhs][i] && out[i + 1]);
        break;
      }
    }
  }
  return val[f.root][position];
}

// ---------------------------------------------------------------------------
// FO evaluation over u.v^omega with quantifiers relativized to a finite
// domain. Subformula values are memoized on the values of their own free
// variables, so closed subformulas are computed once per word.
// ---------------------------------------------------------------------------

namespace logicdetail {

inline std::vector<std::vector<std::size_t>> fo_free_slots(const FoFormula& f) {
  std::vector<std::vector<std::size_t>> fs(f.nodes.size());
  auto merge = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
  };
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const FoNode& n = f.nodes[i];
    switch (n.op) {
      case FoOp::atom: fs[i] = {n.var}; break;
      case FoOp::less:
        fs[i] = {n.var, n.var2};
        std::sort(fs[i].begin(), fs[i].end());
        fs[i].erase(std::unique(fs[i].begin(), fs[i].end()), fs[i].end());
        break;
      case FoOp::neg: fs[i] = fs[n.lhs]; break;
      case FoOp::conj: fs[i] = merge(fs[n.lhs], fs[n.rhs]); break;
      case FoOp::exists: {
        fs[i] = fs[n.lhs];
        auto it = std::lower_bound(fs[i].begin(), fs[i].end(), n.var);
        if (it != fs[i].end() && *it == n.var) fs[i].erase(it);
        break;
      }
    }
  }
  return fs;
}

// Shared machinery of one evaluation: predicate bitsets over the domain,
// per-quantifier memo tables, and a semi-symbolic evaluator. A quantifier
// whose body mentions its variable only in atoms and order constraints is
// decided by one bitset sweep (64 positions per word operation); only bodies
// where the variable stays free below another quantifier fall back to a
// per-position scan.
struct FoEval {
  using Bits = std::vector<std::uint64_t>;

  const FoFormula& f;
  const std::vector<std::vector<std::size_t>>& fs;
  std::uint64_t domain;
  std::size_t nw;            // 64-bit words per bitset
  std::uint64_t tail;        // mask clearing bits at positions >= domain
  std::vector<const Bits*> atab;      // per atom node, its predicate table
  std::vector<char> scan_body;        // per exists node, per-position fallback
  std::vector<std::vector<signed char>> flat;
  std::vector<std::map<std::vector<std::uint64_t>, bool>> memo;
  std::vector<std::uint64_t> env;
  std::vector<Bits> pool;    // per node scratch bitset
  std::map<std::string, Bits> preds;

  FoEval(const LassoWord& w, const FoFormula& formula,
         const std::vector<std::vector<std::size_t>>& free_slots, std::uint64_t dom)
      : f(formula), fs(free_slots), domain(dom) {
    nw = static_cast<std::size_t>((domain + 63) / 64);
    tail = (domain % 64) ? ((std::uint64_t{1} << (domain % 64)) - 1) : ~std::uint64_t{0};
    for (const FoNode& n : f.nodes) {
      if (n.op != FoOp::atom) continue;
      auto [it, fresh] = preds.try_emplace(n.pred);
      if (!fresh) continue;
      it->second.assign(nw, 0);
      for (std::uint64_t p = 0; p < domain; ++p)
        if (letter_has(w.at(static_cast<std::size_t>(p)), n.pred))
          it->second[static_cast<std::size_t>(p >> 6)] |= std::uint64_t{1} << (p & 63);
    }
    atab.assign(f.nodes.size(), nullptr);
    for (std::size_t i = 0; i < f.nodes.size(); ++i)
      if (f.nodes[i].op == FoOp::atom) atab[i] = &preds[f.nodes[i].pred];

    // A variable is free in a subtree exactly when it is free at its root,
    // so one lookup per quantifier detects dependent inner quantifiers.
    auto has_dep = [&](auto&& self, std::size_t x, std::size_t var) -> bool {
      const FoNode& n = f.nodes[x];
      switch (n.op) {
        case FoOp::atom:
        case FoOp::less: return false;
        case FoOp::neg: return self(self, n.lhs, var);
        case FoOp::conj: return self(self, n.lhs, var) || self(self, n.rhs, var);
        case FoOp::exists: return std::binary_search(fs[x].begin(), fs[x].end(), var);
      }
      return false;
    };
    scan_body.assign(f.nodes.size(), 0);
    for (std::size_t i = 0; i < f.nodes.size(); ++i)
      if (f.nodes[i].op == FoOp::exists)
        scan_body[i] = has_dep(has_dep, f.nodes[i].lhs, f.nodes[i].var);

    // Quantifier results are memoized on the values of their free variables:
    // a flat tri-state table indexed in mixed radix when domain^arity is
    // small, an ordered map otherwise.
    constexpr std::uint64_t kFlatCap = std::uint64_t{1} << 22;
    flat.resize(f.nodes.size());
    memo.resize(f.nodes.size());
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
      if (f.nodes[i].op != FoOp::exists) continue;
      std::uint64_t size = 1;
      bool small = true;
      for (std::size_t k = 0; k < fs[i].size(); ++k) {
        if (domain == 0 || size > kFlatCap / domain) {
          small = false;
          break;
        }
        size *= domain;
      }
      if (small) flat[i].assign(static_cast<std::size_t>(size), -1);
    }
    env.assign(f.slots, 0);
    pool.resize(f.nodes.size());
  }

  static bool any(const Bits& b) {
    for (std::uint64_t word : b)
      if (word) return true;
    return false;
  }

  // Writes the positions p < k into out.
  void prefix_mask(std::uint64_t k, Bits& out) const {
    out.assign(nw, 0);
    if (k > domain) k = domain;
    const std::size_t full = static_cast<std::size_t>(k >> 6);
    for (std::size_t i = 0; i < full; ++i) out[i] = ~std::uint64_t{0};
    if ((k & 63) != 0) out[full] = (std::uint64_t{1} << (k & 63)) - 1;
  }

  bool scalar(std::size_t x) {
    const FoNode& nd = f.nodes[x];
    switch (nd.op) {
      case FoOp::atom: {
        const std::uint64_t p = env[nd.var];
        return ((*atab[x])[static_cast<std::size_t>(p >> 6)] >> (p & 63)) & 1;
      }
      case FoOp::less: return env[nd.var] < env[nd.var2];
      case FoOp::neg: return !scalar(nd.lhs);
      case FoOp::conj: return scalar(nd.lhs) && scalar(nd.rhs);
      case FoOp::exists: {
        signed char* slot = nullptr;
        std::vector<std::uint64_t> key;
        if (!flat[x].empty()) {
          std::uint64_t idx = 0;
          for (std::size_t s : fs[x]) idx = idx * domain + env[s];
          slot = &flat[x][static_cast<std::size_t>(idx)];
          if (*slot >= 0) return *slot != 0;
        } else {
          key.reserve(fs[x].size());
          for (std::size_t s : fs[x]) key.push_back(env[s]);
          auto it = memo[x].find(key);
          if (it != memo[x].end()) return it->second;
        }
        bool r = false;
        const std::uint64_t saved = env[nd.var];
        if (scan_body[x]) {
          for (std::uint64_t pos = 0; pos < domain && !r; ++pos) {
            env[nd.var] = pos;
            r = scalar(nd.lhs);
          }
        } else {
          bool sc = false;
          const Bits* b = bits(nd.lhs, nd.var, sc);
          r = b ? any(*b) : (sc && domain > 0);
        }
        env[nd.var] = saved;
        if (slot)
          *slot = r ? 1 : 0;
        else
          memo[x].emplace(std::move(key), r);
        return r;
      }
    }
    throw std::logic_error("eval_fo: bad node");
  }

  // Truth of subformula x for every value of variable v at once. Returns
  // nullptr with the constant verdict in sc when x does not depend on v.
  // Results live in per-node scratch; nodes are tree-unique, so a child's
  // bitset stays valid while its parent combines it.
  const Bits* bits(std::size_t x, std::size_t v, bool& sc) {
    if (!std::binary_search(fs[x].begin(), fs[x].end(), v)) {
      sc = scalar(x);
      return nullptr;
    }
    const FoNode& nd = f.nodes[x];
    switch (nd.op) {
      case FoOp::atom: return atab[x];
      case FoOp::less: {
        if (nd.var == v && nd.var2 == v) {
          sc = false;
          return nullptr;
        }
        Bits& out = pool[x];
        if (nd.var == v) {
          prefix_mask(env[nd.var2], out);
        } else {
          prefix_mask(env[nd.var] + 1, out);
          for (std::size_t i = 0; i < nw; ++i) out[i] = ~out[i];
          if (nw > 0) out[nw - 1] &= tail;
        }
        return &out;
      }
      case FoOp::neg: {
        bool isc = false;
        const Bits* in = bits(nd.lhs, v, isc);
        if (!in) {
          sc = !isc;
          return nullptr;
        }
        Bits& out = pool[x];
        out.resize(nw);
        for (std::size_t i = 0; i < nw; ++i) out[i] = ~(*in)[i];
        if (nw > 0) out[nw - 1] &= tail;
        return &out;
      }
      case FoOp::conj: {
        bool ls = false;
        const Bits* lb = bits(nd.lhs, v, ls);
        if (!lb && !ls) {
          sc = false;
          return nullptr;
        }
        bool rs = false;
        const Bits* rb = bits(nd.rhs, v, rs);
        if (!rb && !rs) {
          sc = false;
          return nullptr;
        }
        if (!lb && !rb) {
          sc = true;
          return nullptr;
        }
        if (!lb) return rb;
        if (!rb) return lb;
        Bits& out = pool[x];
        out.resize(nw);
        for (std::size_t i = 0; i < nw; ++i) out[i] = (*lb)[i] & (*rb)[i];
        return &out;
      }
      case FoOp::exists: {
        // v stays free under this quantifier: evaluate per position.
        Bits& out = pool[x];
        out.assign(nw, 0);
        const std::uint64_t saved = env[v];
        for (std::uint64_t p = 0; p < domain; ++p) {
          env[v] = p;
          if (scalar(x)) out[static_cast<std::size_t>(p >> 6)] |= std::uint64_t{1} << (p & 63);
        }
        env[v] = saved;
        return &out;
      }
    }
    throw std::logic_error("eval_fo: bad node");
  }
};

inline bool fo_eval_on_domain(const LassoWord& w, const FoFormula& f, std::uint64_t domain) {
  if (w.loop.empty()) throw std::invalid_argument("eval_fo: empty loop");
  if (f.nodes.empty()) throw std::invalid_argument("eval_fo: empty formula");
  auto fs = fo_free_slots(f);
  if (!fs[f.root].empty())
    throw std::invalid_argument("eval_fo: formula has a free variable");
  FoEval ev(w, f, fs, domain);
  return ev.scalar(f.root);
}

}  // namespace logicdetail

// Quantifiers range over [0, |u| + (2^(qh+2) + 1)|v|): one threshold block of
// loop copies plus a representative copy, enough to decide the formula on
// the infinite word.
inline bool eval_fo(const LassoWord& w, const FoFormula& f) {
  const std::size_t qh = quantifier_height(f);
  if (qh + 2 >= 63) throw std::length_error("eval_fo: quantifier height out of budget");
  const std::uint64_t copies = (std::uint64_t{1} << (qh + 2)) + 1;
  const std::uint64_t domain = w.prefix.size() + copies * w.loop.size();
  return logicdetail::fo_eval_on_domain(w, f, domain);
}

}  // namespace facs
