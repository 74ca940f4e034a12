#pragma once

#include <cmath>

#include "csls/matrix.hpp"
#include "csls/random.hpp"

namespace csls::testing {

inline SymMatrix random_sym(int n, Rng& rng, double scale = 1.0) {
  SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s(i, j) = scale * rng.normal();
  return s;
}

inline SquareMatrix random_square(int n, Rng& rng) {
  SquareMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a;
}

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  double d = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

}  // namespace csls::testing
