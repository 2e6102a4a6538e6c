#pragma once

#include <cstddef>
#include <vector>

#include "facs/matrix.hpp"

namespace facs {

// One inequality coef . x <= rhs.
struct LinRow {
  Vec coef;
  Int rhs;

  bool operator==(const LinRow& o) const { return coef == o.coef && rhs == o.rhs; }
};

// Conjunction of inequalities over integer variables x with x[i] >= lower[i]
// (zero by default).
struct LinSys {
  std::size_t vars = 0;
  std::vector<LinRow> rows;
  Vec lower;

  LinSys() = default;
  explicit LinSys(std::size_t n) : vars(n), lower(n) {}
};

}  // namespace facs
