#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "facs/numeric.hpp"

namespace facs {

using Vec = std::vector<Int>;

// Dense row-major integer matrix with explicit dimensions.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Int> a;  // rows * cols entries

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  Int& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  bool operator==(const Matrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline Matrix mat_mul(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mat_mul: dimension mismatch");
  Matrix r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const Int& v = x.at(i, k);
      if (v == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
    }
  return r;
}

inline Vec mat_vec(const Matrix& x, const Vec& v) {
  if (x.cols != v.size()) throw std::invalid_argument("mat_vec: dimension mismatch");
  Vec r(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    Int s = 0;
    for (std::size_t j = 0; j < x.cols; ++j) s += x.at(i, j) * v[j];
    r[i] = std::move(s);
  }
  return r;
}

inline Vec vec_add(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec_add: dimension mismatch");
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

inline Vec vec_sub(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec_sub: dimension mismatch");
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline Vec vec_scale(const Int& c, const Vec& x) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = c * x[i];
  return r;
}

inline Int dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// Exponent >= 0, binary exponentiation; square matrices only.
inline Matrix mat_pow(const Matrix& x, Int e) {
  if (x.rows != x.cols) throw std::invalid_argument("mat_pow: not square");
  if (e < 0) throw std::invalid_argument("mat_pow: negative exponent");
  Matrix r = Matrix::identity(x.rows);
  Matrix b = x;
  while (e > 0) {
    if ((e & 1) != 0) r = mat_mul(r, b);
    b = mat_mul(b, b);
    e >>= 1;
  }
  return r;
}

struct Norms {
  Int max_entry;  // max |a_ij|
  Int inf;        // max row sum of |a_ij|
};

inline Norms norms(const Matrix& x) {
  Norms n{0, 0};
  for (std::size_t i = 0; i < x.rows; ++i) {
    Int row = 0;
    for (std::size_t j = 0; j < x.cols; ++j) {
      Int v = abs(x.at(i, j));
      if (v > n.max_entry) n.max_entry = v;
      row += v;
    }
    if (row > n.inf) n.inf = row;
  }
  return n;
}

inline Int max_norm(const Matrix& x) { return norms(x).max_entry; }

// Largest entry any power of a finite-monoid matrix can reach:
// (n * max_norm)^(2 n^2); dimensions below 2 are padded with n = 2.
inline Int power_entry_bound(std::size_t n, const Int& mnorm) {
  std::uint64_t nn = n < 2 ? 2 : static_cast<std::uint64_t>(n);
  return ipow(Int(nn) * mnorm, 2 * nn * nn);
}

// A matrix generates a finite monoid of powers iff it has at most 2^(n^3)
// distinct ones.
inline Int monoid_cardinality_cap(std::size_t n) {
  std::uint64_t nn = static_cast<std::uint64_t>(n);
  Int r = 1;
  return r << (nn * nn * nn);
}

enum class MonoidKind { finite, infinite, capped };

// Powers A^0 .. A^(alpha+beta-1) are pairwise distinct and
// A^alpha == A^(alpha+beta).
struct MonoidInfo {
  std::uint64_t alpha = 0;
  std::uint64_t beta = 1;
  std::vector<Matrix> powers;
};

struct MonoidResult {
  MonoidKind kind = MonoidKind::finite;
  MonoidInfo info;           // meaningful only when kind == finite
  std::uint64_t iterations = 0;

  bool finite() const { return kind == MonoidKind::finite; }
};

// Iterates powers of a square matrix until the first repeat (finite monoid),
// an entry exceeding the theoretical bound or more than 2^(n^3) distinct
// powers (infinite monoid), or the iteration cap (capped verdict).
inline MonoidResult monoid_of(const Matrix& m, std::uint64_t cap = 1000000) {
  if (m.rows != m.cols) throw std::invalid_argument("monoid_of: not square");
  const std::size_t n = m.rows;
  const Int entry_bound = power_entry_bound(n, max_norm(m));
  const Int card_cap = monoid_cardinality_cap(n);

  MonoidResult res;
  std::map<std::vector<Int>, std::uint64_t> seen;
  std::vector<Matrix> powers;
  Matrix cur = Matrix::identity(n);
  for (std::uint64_t k = 0;; ++k) {
    auto [it, fresh] = seen.emplace(cur.a, k);
    if (!fresh) {
      res.kind = MonoidKind::finite;
      res.info.alpha = it->second;
      res.info.beta = k - it->second;
      powers.resize(k);
      res.info.powers = std::move(powers);
      res.iterations = k;
      return res;
    }
    powers.push_back(cur);
    if (Int(k) >= card_cap) {
      // More distinct powers than a finite monoid can have.
      res.kind = MonoidKind::infinite;
      res.iterations = k;
      return res;
    }
    if (k >= cap) {
      res.kind = MonoidKind::capped;
      res.iterations = k;
      return res;
    }
    cur = mat_mul(cur, m);
    if (max_norm(cur) > entry_bound) {
      // Powers of a finite-monoid matrix never exceed the entry bound.
      res.kind = MonoidKind::infinite;
      res.iterations = k + 1;
      return res;
    }
  }
}

}  // namespace facs
