#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "facs/linear_system.hpp"
#include "facs/numeric.hpp"

namespace facs {

// If an integer solution exists at all, one exists with every coordinate
// bounded by rows^(2n) * anorm^n * bnorm in absolute value, n padded up to 2.
inline Int small_solution_bound(std::size_t rows, std::size_t vars, const Int& anorm,
                                const Int& bnorm) {
  std::size_t n = std::max<std::size_t>(vars, 2);
  return ipow(Int(static_cast<std::uint64_t>(rows)), 2 * n) * ipow(anorm, n) * bnorm;
}

namespace ilpdetail {

inline bool constant_row(const LinRow& r) {
  for (const Int& c : r.coef)
    if (c != 0) return false;
  return true;
}

// Divide by the gcd of the coefficients, rounding the bound down. Integer
// points are preserved exactly; rationals may be cut, which only sharpens the
// relaxation.
inline void tighten(LinRow& r) {
  Int g = 0;
  for (const Int& c : r.coef) g = boost::multiprecision::gcd(g, c);
  if (g > 1) {
    for (Int& c : r.coef) c /= g;
    r.rhs = floor_div(r.rhs, g);
  }
}

// Rows with identical coefficients keep only the sharpest bound.
inline void dedup(std::vector<LinRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const LinRow& a, const LinRow& b) {
    if (a.coef != b.coef) return a.coef < b.coef;
    return a.rhs < b.rhs;
  });
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const LinRow& a, const LinRow& b) { return a.coef == b.coef; }),
             rows.end());
}

// Drops satisfied constant rows; false on a violated one.
inline bool sweep_constants(std::vector<LinRow>& rows) {
  std::vector<LinRow> kept;
  for (auto& r : rows) {
    if (constant_row(r)) {
      if (r.rhs < 0) return false;
    } else {
      kept.push_back(std::move(r));
    }
  }
  rows = std::move(kept);
  return true;
}

// Fourier-Motzkin elimination with gcd tightening, then back-substitution of
// a sample that takes an integer coordinate whenever the interval allows one.
// Pruned branches contain no integer point; a returned sample satisfies every
// row over the rationals.
inline std::optional<std::vector<Rat>> fm_sample(std::vector<LinRow> work,
                                                 std::size_t vars) {
  for (auto& r : work) tighten(r);
  if (!sweep_constants(work)) return std::nullopt;
  dedup(work);

  std::vector<char> done(vars, 0);
  std::vector<std::size_t> order;
  std::vector<std::vector<LinRow>> bounding;

  for (std::size_t stage = 0; stage < vars; ++stage) {
    // Next victim: fewest pos*neg pairings, to keep the row count flat.
    std::size_t best = vars;
    std::uint64_t best_cost = 0;
    for (std::size_t v = 0; v < vars; ++v) {
      if (done[v]) continue;
      std::uint64_t pos = 0, neg = 0;
      for (const auto& r : work) {
        if (r.coef[v] > 0) ++pos;
        if (r.coef[v] < 0) ++neg;
      }
      std::uint64_t cost = pos * neg;
      if (best == vars || cost < best_cost) {
        best = v;
        best_cost = cost;
      }
    }
    done[best] = 1;
    order.push_back(best);

    std::vector<LinRow> pos, neg, rest;
    for (auto& r : work) {
      if (r.coef[best] > 0)
        pos.push_back(std::move(r));
      else if (r.coef[best] < 0)
        neg.push_back(std::move(r));
      else
        rest.push_back(std::move(r));
    }
    std::vector<LinRow> combined = std::move(rest);
    for (const auto& p : pos)
      for (const auto& q : neg) {
        const Int a = p.coef[best];       // > 0
        const Int b = -q.coef[best];      // > 0
        LinRow row;
        row.coef.resize(vars);
        for (std::size_t j = 0; j < vars; ++j) row.coef[j] = b * p.coef[j] + a * q.coef[j];
        row.rhs = b * p.rhs + a * q.rhs;
        tighten(row);
        combined.push_back(std::move(row));
      }
    if (!sweep_constants(combined)) return std::nullopt;
    dedup(combined);

    std::vector<LinRow> bound = std::move(pos);
    bound.insert(bound.end(), std::make_move_iterator(neg.begin()),
                 std::make_move_iterator(neg.end()));
    bounding.push_back(std::move(bound));
    work = std::move(combined);
  }

  std::vector<Rat> x(vars, Rat(0));
  for (std::size_t s = order.size(); s-- > 0;) {
    std::size_t v = order[s];
    std::optional<Rat> lo, hi;
    for (const LinRow& r : bounding[s]) {
      Rat rest(r.rhs);
      for (std::size_t j = 0; j < vars; ++j)
        if (j != v && r.coef[j] != 0) rest -= Rat(r.coef[j]) * x[j];
      Rat q = rest / Rat(r.coef[v]);
      if (r.coef[v] > 0)
        hi = hi ? std::min(*hi, q) : q;
      else
        lo = lo ? std::max(*lo, q) : q;
    }
    if (lo && hi && *lo > *hi) return std::nullopt;  // cannot happen, FM is exact
    if (lo) {
      Int c = rat_ceil(*lo);
      x[v] = (!hi || Rat(c) <= *hi) ? Rat(c) : *lo;
    } else if (hi) {
      x[v] = (*hi >= 0) ? Rat(0) : Rat(rat_floor(*hi));
    }
  }
  return x;
}

inline std::optional<Vec> branch(const std::vector<LinRow>& rows, std::size_t vars) {
  auto sample = fm_sample(rows, vars);
  if (!sample) return std::nullopt;
  std::size_t frac = vars;
  for (std::size_t i = 0; i < vars; ++i)
    if (!rat_is_integer((*sample)[i])) {
      frac = i;
      break;
    }
  if (frac == vars) {
    Vec x;
    for (const Rat& q : *sample) x.push_back(Int(boost::multiprecision::numerator(q)));
    return x;
  }
  const Rat& f = (*sample)[frac];
  for (int side = 0; side < 2; ++side) {
    std::vector<LinRow> cut_rows = rows;
    LinRow cut;
    cut.coef = Vec(vars);
    if (side == 0) {
      cut.coef[frac] = 1;
      cut.rhs = rat_floor(f);
    } else {
      cut.coef[frac] = -1;
      cut.rhs = -rat_ceil(f);
    }
    cut_rows.push_back(std::move(cut));
    if (auto r = branch(cut_rows, vars)) return r;
  }
  return std::nullopt;
}

// The system in pure row form: declared rows plus one lower-bound row per
// variable.
inline std::vector<LinRow> assembled_rows(const LinSys& sys) {
  if (sys.lower.size() != sys.vars)
    throw std::invalid_argument("ilp: lower bound vector width mismatch");
  std::vector<LinRow> rows;
  for (const auto& r : sys.rows) {
    if (r.coef.size() != sys.vars) throw std::invalid_argument("ilp: row width mismatch");
    rows.push_back(r);
  }
  for (std::size_t i = 0; i < sys.vars; ++i) {
    LinRow r;
    r.coef = Vec(sys.vars);
    r.coef[i] = -1;
    r.rhs = -sys.lower[i];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace ilpdetail

// Box edge within which a solution must exist if any does.
inline Int ilp_box_bound(const LinSys& sys) {
  auto rows = ilpdetail::assembled_rows(sys);
  Int anorm = 0, bnorm = 0;
  for (const auto& r : rows) {
    for (const Int& c : r.coef) anorm = std::max(anorm, Int(abs(c)));
    bnorm = std::max(bnorm, Int(abs(r.rhs)));
  }
  return small_solution_bound(rows.size(), sys.vars, anorm, bnorm);
}

// Integer solution of the system, or nothing. Branch and bound over the
// tightened rational relaxation; the small-solution box caps every branch, so
// the search always terminates.
inline std::optional<Vec> ilp_solve(const LinSys& sys) {
  auto rows = ilpdetail::assembled_rows(sys);
  if (sys.vars == 0) {
    for (const auto& r : rows)
      if (r.rhs < 0) return std::nullopt;
    return Vec{};
  }
  Int box = ilp_box_bound(sys);
  for (std::size_t i = 0; i < sys.vars; ++i) {
    if (sys.lower[i] > box) return std::nullopt;  // no room left inside the box
    LinRow r;
    r.coef = Vec(sys.vars);
    r.coef[i] = 1;
    r.rhs = box;
    rows.push_back(std::move(r));
  }
  return ilpdetail::branch(rows, sys.vars);
}

inline bool ilp_feasible(const LinSys& sys) { return ilp_solve(sys).has_value(); }

// Whether x satisfies every row and lower bound.
inline bool ilp_satisfies(const LinSys& sys, const Vec& x) {
  if (x.size() != sys.vars) return false;
  for (std::size_t i = 0; i < sys.vars; ++i)
    if (x[i] < sys.lower[i]) return false;
  for (const auto& r : sys.rows)
    if (dot(r.coef, x) > r.rhs) return false;
  return true;
}

}  // namespace facs
