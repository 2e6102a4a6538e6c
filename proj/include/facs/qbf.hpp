#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "facs/system.hpp"

namespace facs {

// Prenex exists-forall boolean formula with a CNF matrix. Variables follow
// the QDIMACS convention: 1..p are existential, p+1..p+q universal, and a
// clause holds a nonzero literal +v or -v per entry.
struct Sigma2Qbf {
  std::size_t p = 0, q = 0;
  std::vector<std::vector<int>> clauses;
};

inline void check_qbf(const Sigma2Qbf& f) {
  if (f.p == 0) throw std::invalid_argument("qbf: need an existential variable");
  if (f.q == 0) throw std::invalid_argument("qbf: need a universal variable");
  for (const auto& cl : f.clauses)
    for (int lit : cl) {
      std::size_t v = static_cast<std::size_t>(lit < 0 ? -lit : lit);
      if (lit == 0 || v > f.p + f.q)
        throw std::invalid_argument("qbf: literal out of range");
    }
}

// Reference decision procedure by enumeration of both assignment blocks.
inline bool qbf_valid(const Sigma2Qbf& f) {
  check_qbf(f);
  if (f.p + f.q > 16) throw std::length_error("qbf_valid: too many variables");
  const std::uint32_t ys = std::uint32_t{1} << f.p;
  const std::uint32_t zs = std::uint32_t{1} << f.q;
  for (std::uint32_t y = 0; y < ys; ++y) {
    bool all = true;
    for (std::uint32_t z = 0; z < zs && all; ++z) {
      auto truth = [&](int lit) {
        std::size_t v = static_cast<std::size_t>(lit < 0 ? -lit : lit);
        bool val = v <= f.p ? ((y >> (v - 1)) & 1) != 0
                            : ((z >> (v - f.p - 1)) & 1) != 0;
        return lit > 0 ? val : !val;
      };
      for (const auto& cl : f.clauses) {
        bool sat = false;
        for (int lit : cl)
          if (truth(lit)) {
            sat = true;
            break;
          }
        if (!sat) {
          all = false;
          break;
        }
      }
    }
    if (all) return true;
  }
  return false;
}

inline std::vector<std::size_t> first_primes(std::size_t k) {
  std::vector<std::size_t> ps;
  for (std::size_t n = 2; ps.size() < k; ++n) {
    bool prime = true;
    for (std::size_t d : ps) {
      if (d * d > n) break;
      if (n % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) ps.push_back(n);
  }
  return ps;
}

// QDIMACS-like input: optional comments and "p cnf <vars> <clauses>" header,
// one "e ... 0" line, one "a ... 0" line, then clause lines. Variables in
// the prefix must be consecutive from 1.
inline Sigma2Qbf parse_qdimacs(const std::string& text) {
  Sigma2Qbf f;
  std::istringstream in(text);
  std::string line;
  bool saw_e = false, saw_a = false;
  long long declared = 0, nclauses = -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "c") continue;
    if (head == "p") {
      std::string kind;
      if (!(ls >> kind >> declared >> nclauses) || kind != "cnf" || declared < 0 || nclauses < 0)
        throw std::invalid_argument("qdimacs: malformed problem line");
      continue;
    }
    if (head == "e" || head == "a") {
      if (head == "e" && (saw_e || saw_a))
        throw std::invalid_argument("qdimacs: the existential block must come first, once");
      if (head == "a" && (!saw_e || saw_a))
        throw std::invalid_argument("qdimacs: one universal block must follow the existential");
      std::vector<long long> vars;
      long long v = 0;
      bool closed = false;
      while (ls >> v) {
        if (v == 0) {
          closed = true;
          break;
        }
        vars.push_back(v);
      }
      if (!closed) throw std::invalid_argument("qdimacs: unterminated quantifier line");
      if (vars.empty()) throw std::invalid_argument("qdimacs: empty quantifier block");
      const long long start = head == "e" ? 1 : static_cast<long long>(f.p) + 1;
      for (std::size_t k = 0; k < vars.size(); ++k)
        if (vars[k] != start + static_cast<long long>(k))
          throw std::invalid_argument("qdimacs: prefix variables must be consecutive");
      if (head == "e") {
        f.p = vars.size();
        saw_e = true;
      } else {
        f.q = vars.size();
        saw_a = true;
      }
      continue;
    }
    if (!saw_a) throw std::invalid_argument("qdimacs: clause before the quantifier prefix");
    long long lit = 0;
    {
      std::istringstream first(head);
      if (!(first >> lit) || !first.eof())
        throw std::invalid_argument("qdimacs: unexpected token " + head);
    }
    std::vector<int> clause;
    bool closed = lit == 0;
    if (!closed) clause.push_back(static_cast<int>(lit));
    while (!closed && ls >> lit) {
      if (lit == 0) {
        closed = true;
        break;
      }
      clause.push_back(static_cast<int>(lit));
    }
    if (!closed) throw std::invalid_argument("qdimacs: unterminated clause");
    f.clauses.push_back(std::move(clause));
  }
  if (!saw_e || !saw_a) throw std::invalid_argument("qdimacs: expected e and a lines");
  if (declared != 0 && static_cast<std::size_t>(declared) != f.p + f.q)
    throw std::invalid_argument("qdimacs: variable count mismatch");
  if (nclauses >= 0 && static_cast<std::size_t>(nclauses) != f.clauses.size())
    throw std::invalid_argument("qdimacs: clause count mismatch");
  check_qbf(f);
  return f;
}

// Counter system whose accepting state is reachable exactly when the formula
// is valid. One counter per existential variable is set to 0 or 1 along a
// chain of parallel rules. Each universal variable owns a block of
// prime-many counters holding a single 1 that a rotation update cycles; the
// variable reads as true when the 1 rests on the block's last slot. The spin
// state's guard re-checks every clause once per rotation, and since the
// primes are coprime, consecutive rotations pass through every combination
// of truth values before the blocks return home, which is what the exit
// guard demands.
struct QbfReduction {
  CounterSystem system;
  Configuration init;
  std::string target;
};

inline QbfReduction build_reduction(const Sigma2Qbf& f) {
  check_qbf(f);
  const auto primes = first_primes(f.q);
  std::size_t n = f.p;
  std::vector<std::size_t> slot(f.q);  // coordinate that makes z_j true
  for (std::size_t j = 0; j < f.q; ++j) {
    n += primes[j];
    slot[j] = n - 1;
  }

  CounterSystem s;
  s.dimension = n;
  for (std::size_t i = 0; i <= f.p; ++i)
    s.states.push_back(State{"pick" + std::to_string(i), {}});
  s.states.push_back(State{"spin", {}});
  s.states.push_back(State{"accept", {}});

  const Matrix id = Matrix::identity(n);
  const Vec zero(n, Int(0));

  for (std::size_t i = 1; i <= f.p; ++i) {
    Vec e = zero;
    e[i - 1] = 1;
    const std::string from = "pick" + std::to_string(i - 1);
    const std::string to = "pick" + std::to_string(i);
    s.rules.push_back(
        TransitionRule{"set" + std::to_string(i), from, to, Guard{}, AffineUpdate{id, e}});
    s.rules.push_back(
        TransitionRule{"skip" + std::to_string(i), from, to, Guard{}, AffineUpdate{id, zero}});
  }

  // A clause asks for at least one true literal among 0/1 counters.
  Guard clauses;
  for (const auto& cl : f.clauses) {
    GuardRow row{Vec(n, Int(0)), Int(-1)};
    for (int lit : cl) {
      std::size_t v = static_cast<std::size_t>(lit < 0 ? -lit : lit);
      std::size_t c = v <= f.p ? v - 1 : slot[v - f.p - 1];
      if (lit > 0) {
        row.coeffs[c] -= 1;
      } else {
        row.coeffs[c] += 1;
        row.bound += 1;
      }
    }
    clauses.rows.push_back(std::move(row));
  }

  Matrix rot(n, n);
  for (std::size_t i = 0; i < f.p; ++i) rot.at(i, i) = 1;
  std::size_t base = f.p;
  for (std::size_t j = 0; j < f.q; ++j) {
    for (std::size_t k = 0; k < primes[j]; ++k)
      rot.at(base + k, base + (k + 1) % primes[j]) = 1;
    base += primes[j];
  }

  const std::string last_pick = "pick" + std::to_string(f.p);
  s.rules.push_back(
      TransitionRule{"enter", last_pick, "spin", clauses, AffineUpdate{rot, zero}});
  s.rules.push_back(TransitionRule{"turn", "spin", "spin", clauses, AffineUpdate{rot, zero}});

  Guard home;  // every rotation block back on its resting slot
  for (std::size_t j = 0; j < f.q; ++j) {
    GuardRow le{Vec(n, Int(0)), Int(1)};
    GuardRow ge{Vec(n, Int(0)), Int(-1)};
    le.coeffs[slot[j]] = 1;
    ge.coeffs[slot[j]] = -1;
    home.rows.push_back(std::move(le));
    home.rows.push_back(std::move(ge));
  }
  s.rules.push_back(TransitionRule{"exit", "spin", "accept", home, AffineUpdate{id, zero}});

  Vec v0(n, Int(0));
  for (std::size_t j = 0; j < f.q; ++j) v0[slot[j]] = 1;
  return QbfReduction{std::move(s), Configuration{"pick0", std::move(v0)}, "accept"};
}

}  // namespace facs
