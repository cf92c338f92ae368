#pragma once

#include <atomic>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abcert/linear.hpp"
#include "abcert/rational.hpp"

namespace abcert {

/// max c'x subject to Ax <= b, x >= 0. Every solved instance carries enough
/// to re-check the answer by plain arithmetic.
struct StandardLp {
  int n = 0;
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  std::vector<Rational> c;
  std::vector<std::string> row_labels;
  std::vector<int> src_row;  // polytope row this standard row came from
  std::vector<int> src_dir;  // +1: lhs <= 0 as-is, -1: negated side of an equality

  int m() const { return static_cast<int>(A.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational value;                 // optimal objective (Optimal only)
  std::vector<Rational> x;        // primal witness (Optimal) / empty
  std::vector<Rational> y;        // duals (Optimal) or Farkas multipliers (Infeasible)
  std::vector<Rational> ray;      // improving ray (Unbounded)
  long pivots = 0;
};

struct LpStats {
  std::atomic<long> solves{0};
  std::atomic<long> pivots{0};
  std::atomic<long> farkas_checks{0};
  std::atomic<long> farkas_failures{0};

  void reset() { solves = 0; pivots = 0; farkas_checks = 0; farkas_failures = 0; }
};

inline LpStats& lp_stats() {
  static LpStats s;
  return s;
}

inline StandardLp make_standard(const RatPolytope& p, const RatForm& objective) {
  StandardLp lp;
  lp.n = p.nvars;
  lp.c.assign(lp.n, Rational(0));
  for (int j = 0; j < objective.size() && j < lp.n; ++j) lp.c[j] = objective.coef[j];
  int idx = 0;
  for (const auto& row : p.rows) {
    std::vector<Rational> a(lp.n);
    for (int j = 0; j < row.lhs.size() && j < lp.n; ++j) a[j] = row.lhs.coef[j];
    lp.A.push_back(a);
    lp.b.push_back(-row.lhs.cst);
    lp.row_labels.push_back(row.label);
    lp.src_row.push_back(idx);
    lp.src_dir.push_back(+1);
    if (row.rel == Relation::Eq) {
      for (auto& v : a) v = -v;
      lp.A.push_back(std::move(a));
      lp.b.push_back(row.lhs.cst);
      lp.row_labels.push_back(row.label + " (eq-)");
      lp.src_row.push_back(idx);
      lp.src_dir.push_back(-1);
    }
    ++idx;
  }
  return lp;
}

namespace detail {

struct Tableau {
  // columns: [0, n) structural, [n, n+m) slacks, [n+m, n+m+k) artificials,
  // last column rhs.
  int n = 0, m = 0, nart = 0;
  std::vector<std::vector<Rational>> T;
  std::vector<Rational> obj;
  std::vector<int> basis;
  long pivots = 0;

  int ncols() const { return n + m + nart; }

  void pivot(int r, int s) {
    Rational piv = T[r][s];
    for (auto& v : T[r]) v /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == r || T[i][s].is_zero()) continue;
      Rational f = T[i][s];
      for (int j = 0; j <= ncols(); ++j)
        if (!T[r][j].is_zero()) T[i][j] -= f * T[r][j];
      T[i][s] = Rational(0);  // keep exact zeros exact
    }
    if (!obj[s].is_zero()) {
      Rational f = obj[s];
      for (int j = 0; j <= ncols(); ++j)
        if (!T[r][j].is_zero()) obj[j] -= f * T[r][j];
      obj[s] = Rational(0);
    }
    basis[r] = s;
    ++pivots;
  }

  // Bland's least-index rule; returns Optimal on no entering column,
  // Unbounded when an entering column has no blocking row.
  LpStatus run(const std::vector<bool>& allowed) {
    for (;;) {
      int s = -1;
      for (int j = 0; j < ncols(); ++j)
        if (allowed[j] && obj[j] > Rational(0)) { s = j; break; }
      if (s < 0) return LpStatus::Optimal;
      int r = -1;
      Rational best;
      for (int i = 0; i < m; ++i) {
        if (T[i][s] <= Rational(0)) continue;
        Rational ratio = T[i][ncols()] / T[i][s];
        if (r < 0 || ratio < best || (ratio == best && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return LpStatus::Unbounded;
      pivot(r, s);
    }
  }

  void price_out(const std::vector<Rational>& cost) {
    obj.assign(ncols() + 1, Rational(0));
    for (int j = 0; j < static_cast<int>(cost.size()) && j < ncols(); ++j) obj[j] = cost[j];
    for (int i = 0; i < m; ++i) {
      if (basis[i] >= static_cast<int>(cost.size()) || cost[basis[i]].is_zero()) continue;
      Rational f = cost[basis[i]];
      for (int j = 0; j <= ncols(); ++j)
        if (!T[i][j].is_zero()) obj[j] -= f * T[i][j];
      obj[basis[i]] = Rational(0);
    }
  }
};

}  // namespace detail

struct FarkasCheck {
  bool ok = true;
  std::string detail;
};

/**
 * Re-derives the claimed bound or refutation by plain rational matrix-vector
 * arithmetic. No pivoting; independent of the solve path.
 */
inline FarkasCheck verify_farkas(const StandardLp& lp, const LpSolution& sol) {
  auto fail = [](std::string d) { return FarkasCheck{false, std::move(d)}; };
  const int m = lp.m(), n = lp.n;
  if (sol.status == LpStatus::Optimal) {
    if (static_cast<int>(sol.x.size()) != n || static_cast<int>(sol.y.size()) != m)
      return fail("certificate size mismatch");
    for (int j = 0; j < n; ++j)
      if (sol.x[j] < Rational(0)) return fail("primal witness negative at x" + std::to_string(j));
    for (int i = 0; i < m; ++i) {
      Rational ax;
      for (int j = 0; j < n; ++j)
        if (!lp.A[i][j].is_zero()) ax += lp.A[i][j] * sol.x[j];
      if (ax > lp.b[i]) return fail("primal witness violates row '" + lp.row_labels[i] + "'");
      if (sol.y[i] < Rational(0)) return fail("negative multiplier on row '" + lp.row_labels[i] + "'");
    }
    // dual feasibility: A'y >= c componentwise (covers x >= 0 rows exactly)
    for (int j = 0; j < n; ++j) {
      Rational aty;
      for (int i = 0; i < m; ++i)
        if (!lp.A[i][j].is_zero()) aty += lp.A[i][j] * sol.y[i];
      if (aty < lp.c[j]) return fail("dual infeasible at column " + std::to_string(j));
    }
    Rational cx, by;
    for (int j = 0; j < n; ++j) cx += lp.c[j] * sol.x[j];
    for (int i = 0; i < m; ++i) by += lp.b[i] * sol.y[i];
    if (cx != sol.value) return fail("objective value mismatch with witness");
    if (cx != by) return fail("strong duality gap");
    return {};
  }
  if (sol.status == LpStatus::Infeasible) {
    if (static_cast<int>(sol.y.size()) != m) return fail("Farkas size mismatch");
    for (int i = 0; i < m; ++i)
      if (sol.y[i] < Rational(0)) return fail("negative Farkas multiplier on row '" + lp.row_labels[i] + "'");
    for (int j = 0; j < n; ++j) {
      Rational aty;
      for (int i = 0; i < m; ++i)
        if (!lp.A[i][j].is_zero()) aty += lp.A[i][j] * sol.y[i];
      if (aty < Rational(0)) return fail("Farkas combination negative at column " + std::to_string(j));
    }
    Rational by;
    for (int i = 0; i < m; ++i) by += lp.b[i] * sol.y[i];
    if (by >= Rational(0)) return fail("Farkas right-hand side not negative");
    return {};
  }
  // Unbounded: ray d >= 0 with Ad <= 0 and c'd > 0.
  if (static_cast<int>(sol.ray.size()) != n) return fail("ray size mismatch");
  for (int j = 0; j < n; ++j)
    if (sol.ray[j] < Rational(0)) return fail("ray negative component");
  for (int i = 0; i < m; ++i) {
    Rational ad;
    for (int j = 0; j < n; ++j)
      if (!lp.A[i][j].is_zero()) ad += lp.A[i][j] * sol.ray[j];
    if (ad > Rational(0)) return fail("ray escapes row '" + lp.row_labels[i] + "'");
  }
  Rational cd;
  for (int j = 0; j < n; ++j) cd += lp.c[j] * sol.ray[j];
  if (cd <= Rational(0)) return fail("ray does not improve objective");
  return {};
}

/**
 * Exact two-phase dense simplex with Bland's least-index anti-cycling rule.
 * Deterministic: identical inputs produce identical witnesses. Every solve is
 * re-verified through verify_farkas before it is returned.
 */
inline LpSolution solve_lp(const StandardLp& lp) {
  const int n = lp.n, m = lp.m();
  detail::Tableau tab;
  tab.n = n;
  tab.m = m;

  std::vector<bool> flip(m, false);
  int nart = 0;
  for (int i = 0; i < m; ++i)
    if (lp.b[i] < Rational(0)) {
      flip[i] = true;
      ++nart;
    }
  tab.nart = nart;
  const int ncols = n + m + nart;

  tab.T.assign(m, std::vector<Rational>(ncols + 1));
  tab.basis.assign(m, -1);
  int art = n + m;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab.T[i][j] = flip[i] ? -lp.A[i][j] : lp.A[i][j];
    tab.T[i][n + i] = Rational(flip[i] ? -1 : 1);
    tab.T[i][ncols] = flip[i] ? -lp.b[i] : lp.b[i];
    if (flip[i]) {
      tab.T[i][art] = Rational(1);
      tab.basis[i] = art++;
    } else {
      tab.basis[i] = n + i;
    }
  }

  LpSolution sol;
  std::vector<bool> allow_all(ncols, true);

  if (nart > 0) {
    std::vector<Rational> cost1(ncols, Rational(0));
    for (int j = n + m; j < ncols; ++j) cost1[j] = Rational(-1);
    tab.price_out(cost1);
    LpStatus st = tab.run(allow_all);
    if (st != LpStatus::Optimal) throw std::logic_error("phase-1 LP unbounded");
    Rational infeas;
    for (int i = 0; i < m; ++i)
      if (tab.basis[i] >= n + m) infeas += tab.T[i][ncols];
    if (!infeas.is_zero()) {
      sol.status = LpStatus::Infeasible;
      sol.y.resize(m);
      for (int i = 0; i < m; ++i) sol.y[i] = -tab.obj[n + i];
      sol.pivots = tab.pivots;
      lp_stats().solves++;
      lp_stats().pivots += tab.pivots;
      lp_stats().farkas_checks++;
      FarkasCheck chk = verify_farkas(lp, sol);
      if (!chk.ok) {
        lp_stats().farkas_failures++;
        throw std::logic_error("LP infeasibility certificate rejected: " + chk.detail);
      }
      return sol;
    }
    // drive leftover artificials out of the basis (degenerate pivots)
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < n + m) continue;
      int s = -1;
      for (int j = 0; j < n + m; ++j)
        if (!tab.T[i][j].is_zero()) { s = j; break; }
      if (s >= 0) tab.pivot(i, s);
      // all-zero row: redundant constraint, artificial stays basic at zero
    }
  }

  std::vector<bool> allowed(ncols, true);
  for (int j = n + m; j < ncols; ++j) allowed[j] = false;

  std::vector<Rational> cost2(ncols, Rational(0));
  for (int j = 0; j < n; ++j) cost2[j] = lp.c[j];
  tab.price_out(cost2);
  LpStatus st = tab.run(allowed);
  sol.pivots = tab.pivots;

  if (st == LpStatus::Unbounded) {
    // rebuild the escaping direction for the entering column found last
    int s = -1;
    for (int j = 0; j < ncols; ++j)
      if (allowed[j] && tab.obj[j] > Rational(0)) { s = j; break; }
    sol.status = LpStatus::Unbounded;
    std::vector<Rational> d(n + m, Rational(0));
    if (s >= 0 && s < n + m) d[s] = Rational(1);
    for (int i = 0; i < m; ++i)
      if (tab.basis[i] < n + m && s >= 0) d[tab.basis[i]] = -tab.T[i][s];
    sol.ray.assign(d.begin(), d.begin() + n);
  } else {
    sol.status = LpStatus::Optimal;
    sol.x.assign(n, Rational(0));
    for (int i = 0; i < m; ++i)
      if (tab.basis[i] < n) sol.x[tab.basis[i]] = tab.T[i][ncols];
    sol.y.resize(m);
    for (int i = 0; i < m; ++i) sol.y[i] = -tab.obj[n + i];
    Rational cx;
    for (int j = 0; j < n; ++j)
      if (!lp.c[j].is_zero()) cx += lp.c[j] * sol.x[j];
    sol.value = cx;
  }

  lp_stats().solves++;
  lp_stats().pivots += tab.pivots;
  lp_stats().farkas_checks++;
  FarkasCheck chk = verify_farkas(lp, sol);
  if (!chk.ok) {
    lp_stats().farkas_failures++;
    throw std::logic_error("LP certificate rejected: " + chk.detail);
  }
  return sol;
}

// ---- spec-level operations over polytopes ----

struct LpOutcome {
  LpStatus status;
  Rational value;
  Point witness;
  std::vector<Rational> multipliers;  // duals or Farkas, per standard row
  StandardLp standard;                // the system the certificate refers to
  long pivots = 0;
};

inline LpOutcome lp_maximize(const Polytope& p, const AffineForm& objective,
                             const Rational& theta) {
  RatPolytope rp = instantiate(p, theta);
  RatForm obj = instantiate(objective, theta);
  if (obj.size() < rp.nvars) obj.coef.resize(rp.nvars);
  StandardLp lp = make_standard(rp, obj);
  LpSolution s = solve_lp(lp);
  // the standard form carries only the linear part; restore the constant
  Rational value = s.status == LpStatus::Optimal ? s.value + obj.cst : s.value;
  LpOutcome out{s.status, value, s.x, s.y, std::move(lp), s.pivots};
  return out;
}

struct Feasibility {
  bool feasible;
  Point witness;                      // when feasible
  std::vector<Rational> farkas;       // when infeasible
  StandardLp standard;
};

inline Feasibility lp_feasible(const Polytope& p, const Rational& theta) {
  RatPolytope rp = instantiate(p, theta);
  StandardLp lp = make_standard(rp, RatForm(rp.nvars));
  LpSolution s = solve_lp(lp);
  if (s.status == LpStatus::Optimal) return {true, s.x, {}, std::move(lp)};
  return {false, {}, s.y, std::move(lp)};
}

/**
 * Interior feasibility with respect to the strictness metadata: maximizes a
 * slack t >= 0 added to every strict-flagged row (t capped at 1 to keep the
 * LP bounded). Returns the optimal slack; 0 means the region is boundary-only.
 */
struct StrictFeasibility {
  bool feasible = false;     // closed region nonempty
  Rational slack;            // max common slack on strict rows (0 if none strict)
  Point witness;             // attaining point (closed-feasible case)
  std::vector<Rational> farkas;
};

inline StrictFeasibility lp_strict_feasible(const Polytope& p, const Rational& theta) {
  RatPolytope rp = instantiate(p, theta);
  bool any_strict = false;
  for (const auto& r : rp.rows) any_strict |= r.strict_hint;
  const int tcol = rp.nvars;
  RatPolytope ext;
  ext.nvars = rp.nvars + 1;
  for (auto row : rp.rows) {
    row.lhs.coef.resize(ext.nvars);
    if (row.strict_hint) row.lhs.coef[tcol] = Rational(1);
    ext.rows.push_back(std::move(row));
  }
  {
    RatConstraint cap;
    cap.lhs = RatForm(ext.nvars);
    cap.lhs.coef[tcol] = Rational(1);
    cap.lhs.cst = Rational(-1);
    cap.label = "slack cap";
    ext.rows.push_back(std::move(cap));
  }
  RatForm obj(ext.nvars);
  obj.coef[tcol] = Rational(1);
  StandardLp lp = make_standard(ext, obj);
  LpSolution s = solve_lp(lp);
  StrictFeasibility out;
  if (s.status != LpStatus::Optimal) {
    out.feasible = false;
    out.farkas = s.y;
    return out;
  }
  out.feasible = true;
  // with no strict rows the interior is the region itself
  out.slack = any_strict ? s.value : Rational(1);
  out.witness.assign(s.x.begin(), s.x.begin() + rp.nvars);
  return out;
}

}  // namespace abcert
