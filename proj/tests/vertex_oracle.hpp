#pragma once

// Test-only independent oracle: exhaustive vertex enumeration for small LPs
// in the form max c'x, Ax <= b, x >= 0. Enumerates every basis of [A | I],
// solves by Gaussian elimination over exact rationals, keeps basic feasible
// solutions. Completely independent of the simplex implementation.

#include <optional>
#include <vector>

#include "abcert/simplex.hpp"

namespace abcert::testing {

struct VertexScan {
  bool feasible = false;
  bool bounded_hint = true;  // enumeration alone cannot prove boundedness
  Rational best;             // max objective over vertices (when feasible)
  Point argbest;
  long vertices = 0;
};

inline std::optional<std::vector<Rational>> solve_square(
    std::vector<std::vector<Rational>> M, std::vector<Rational> rhs) {
  const int n = static_cast<int>(M.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!M[r][col].is_zero()) { piv = r; break; }
    if (piv < 0) return std::nullopt;  // singular
    std::swap(M[col], M[piv]);
    std::swap(rhs[col], rhs[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == col || M[r][col].is_zero()) continue;
      Rational f = M[r][col] / M[col][col];
      for (int k = col; k < n; ++k) M[r][k] -= f * M[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rational> x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[i] / M[i][i];
  return x;
}

inline void scan_bases(const StandardLp& lp, std::vector<int>& pick, int from,
                       VertexScan& out, long budget) {
  const int m = lp.m(), n = lp.n;
  if (static_cast<int>(pick.size()) == m) {
    if (out.vertices > budget) throw std::runtime_error("vertex oracle budget exceeded");
    std::vector<std::vector<Rational>> M(m, std::vector<Rational>(m));
    for (int r = 0; r < m; ++r)
      for (int k = 0; k < m; ++k) {
        int col = pick[k];
        M[r][k] = col < n ? lp.A[r][col] : Rational(col - n == r ? 1 : 0);
      }
    auto z = solve_square(M, lp.b);
    if (!z) return;
    for (const auto& v : *z)
      if (v < Rational(0)) return;
    ++out.vertices;
    Point x(n, Rational(0));
    for (int k = 0; k < m; ++k)
      if (pick[k] < n) x[pick[k]] = (*z)[k];
    Rational val;
    for (int j = 0; j < n; ++j)
      if (!lp.c[j].is_zero()) val += lp.c[j] * x[j];
    if (!out.feasible || val > out.best) {
      out.best = val;
      out.argbest = x;
    }
    out.feasible = true;
    return;
  }
  for (int col = from; col < n + m; ++col) {
    pick.push_back(col);
    scan_bases(lp, pick, col + 1, out, budget);
    pick.pop_back();
  }
}

/// Exhaustive scan of all C(n+m, m) bases. Only for small systems.
inline VertexScan enumerate_vertices(const StandardLp& lp, long budget = 2000000) {
  VertexScan out;
  std::vector<int> pick;
  pick.reserve(lp.m());
  scan_bases(lp, pick, 0, out, budget);
  return out;
}

}  // namespace abcert::testing
