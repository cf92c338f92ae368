#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcert/rational.hpp"

namespace abcert {

// Fixed truncated exponent space: per-letter block sizes a1..a6, b1..b6,
// c1..c6, tail masses Ta, Tb, Tc (sums over indices >= 7) and weighted tails
// Wa, Wb, Wc (sums of i * x_i over i >= 7, relaxed to W >= 7T).
inline constexpr int kNumVars = 24;
inline constexpr int kTruncation = 6;

enum class Letter : int { A = 0, B = 1, C = 2 };

inline constexpr std::array<Letter, 3> kLetters{Letter::A, Letter::B, Letter::C};

inline int var_index(Letter l, int i) {
  if (i < 1 || i > kTruncation) throw std::out_of_range("var_index: index out of 1..6");
  return static_cast<int>(l) * kTruncation + (i - 1);
}
inline int tail_mass_index(Letter l) { return 18 + static_cast<int>(l); }
inline int tail_weight_index(Letter l) { return 21 + static_cast<int>(l); }

inline const std::array<std::string, kNumVars>& var_names() {
  static const std::array<std::string, kNumVars> names = {
      "a1", "a2", "a3", "a4", "a5", "a6", "b1", "b2", "b3", "b4", "b5", "b6",
      "c1", "c2", "c3", "c4", "c5", "c6", "Ta", "Tb", "Tc", "Wa", "Wb", "Wc"};
  return names;
}

inline int var_by_name(const std::string& name) {
  const auto& names = var_names();
  for (int i = 0; i < kNumVars; ++i)
    if (names[i] == name) return i;
  throw std::invalid_argument("unknown variable '" + name + "'");
}

inline char letter_name(Letter l) { return l == Letter::A ? 'a' : l == Letter::B ? 'b' : 'c'; }

using Point = std::vector<Rational>;

/**
 * Affine functional over the variable space (optionally extended by leaf-local
 * auxiliaries at indices >= kNumVars), with coefficients affine in theta.
 */
struct AffineForm {
  std::vector<ThetaAffine> coef;
  ThetaAffine cst;

  explicit AffineForm(int nvars = kNumVars) : coef(nvars) {}

  int size() const { return static_cast<int>(coef.size()); }

  AffineForm& add(int var, ThetaAffine v) {
    if (var >= size()) coef.resize(var + 1);
    coef[var] += v;
    return *this;
  }
  AffineForm& add_const(ThetaAffine v) { cst += v; return *this; }

  AffineForm& operator+=(const AffineForm& o) {
    if (o.size() > size()) coef.resize(o.size());
    for (int j = 0; j < o.size(); ++j) coef[j] += o.coef[j];
    cst += o.cst;
    return *this;
  }
  AffineForm& operator-=(const AffineForm& o) {
    if (o.size() > size()) coef.resize(o.size());
    for (int j = 0; j < o.size(); ++j) coef[j] -= o.coef[j];
    cst -= o.cst;
    return *this;
  }
  AffineForm& operator*=(const Rational& s) {
    for (auto& c : coef) c *= s;
    cst *= s;
    return *this;
  }
  friend AffineForm operator+(AffineForm a, const AffineForm& b) { a += b; return a; }
  friend AffineForm operator-(AffineForm a, const AffineForm& b) { a -= b; return a; }
  friend AffineForm operator-(const AffineForm& a) {
    AffineForm r(a.size());
    for (int j = 0; j < a.size(); ++j) r.coef[j] = -a.coef[j];
    r.cst = -a.cst;
    return r;
  }
  friend bool operator==(const AffineForm& a, const AffineForm& b) {
    int n = std::max(a.size(), b.size());
    for (int j = 0; j < n; ++j) {
      ThetaAffine ca = j < a.size() ? a.coef[j] : ThetaAffine{};
      ThetaAffine cb = j < b.size() ? b.coef[j] : ThetaAffine{};
      if (!(ca == cb)) return false;
    }
    return a.cst == b.cst;
  }

  ThetaAffine coeff(int var) const { return var < size() ? coef[var] : ThetaAffine{}; }

  /// Exact evaluation at a point and a rational theta.
  Rational eval(const Point& x, const Rational& theta) const {
    Rational acc = cst.at(theta);
    for (int j = 0; j < size() && j < static_cast<int>(x.size()); ++j)
      if (!coef[j].is_zero()) acc += coef[j].at(theta) * x[j];
    return acc;
  }
};

/// Concrete (theta-instantiated) affine functional.
struct RatForm {
  std::vector<Rational> coef;
  Rational cst;

  explicit RatForm(int nvars = kNumVars) : coef(nvars) {}

  int size() const { return static_cast<int>(coef.size()); }

  Rational eval(const Point& x) const {
    Rational acc = cst;
    for (int j = 0; j < size() && j < static_cast<int>(x.size()); ++j)
      if (!coef[j].is_zero()) acc += coef[j] * x[j];
    return acc;
  }
};

inline RatForm instantiate(const AffineForm& f, const Rational& theta) {
  RatForm r(f.size());
  for (int j = 0; j < f.size(); ++j) r.coef[j] = f.coef[j].at(theta);
  r.cst = f.cst.at(theta);
  return r;
}

enum class Relation { LessEq, Eq };  // lhs <= 0 or lhs = 0

/**
 * One linear condition. `strict_hint` records that the source argument used a
 * strict inequality; the solver always works on the closure and the hint is
 * consumed only by interior-feasibility (cover / contradiction) checks.
 */
struct Constraint {
  AffineForm lhs;
  Relation rel = Relation::LessEq;
  bool strict_hint = false;
  std::string label;

  Constraint() = default;
  Constraint(AffineForm f, Relation r, std::string lab, bool strict = false)
      : lhs(std::move(f)), rel(r), strict_hint(strict), label(std::move(lab)) {}
};

struct RatConstraint {
  RatForm lhs;
  Relation rel = Relation::LessEq;
  bool strict_hint = false;
  std::string label;
};

/// Finite system of linear conditions over the (possibly extended) variable
/// space. All variables are implicitly >= 0; that is structural and never
/// appears as an explicit row.
struct Polytope {
  int nvars = kNumVars;
  std::vector<Constraint> rows;

  void add(Constraint c) {
    nvars = std::max(nvars, c.lhs.size());
    rows.push_back(std::move(c));
  }
  void add(AffineForm f, Relation r, std::string label, bool strict = false) {
    add(Constraint(std::move(f), r, std::move(label), strict));
  }
  void append(const Polytope& o) {
    for (const auto& c : o.rows) add(c);
  }
};

struct RatPolytope {
  int nvars = kNumVars;
  std::vector<RatConstraint> rows;
};

inline RatPolytope instantiate(const Polytope& p, const Rational& theta) {
  RatPolytope r;
  r.nvars = p.nvars;
  r.rows.reserve(p.rows.size());
  for (const auto& c : p.rows) {
    RatConstraint rc;
    rc.lhs = instantiate(c.lhs, theta);
    if (rc.lhs.size() < p.nvars) rc.lhs.coef.resize(p.nvars);
    rc.rel = c.rel;
    rc.strict_hint = c.strict_hint;
    rc.label = c.label;
    r.rows.push_back(std::move(rc));
  }
  return r;
}

/// True when the point satisfies every row of the instantiated system (and is
/// componentwise nonnegative).
inline bool satisfies(const RatPolytope& p, const Point& x,
                      std::string* violated = nullptr) {
  for (const auto& v : x)
    if (v < Rational(0)) {
      if (violated) *violated = "nonnegativity";
      return false;
    }
  for (const auto& row : p.rows) {
    Rational v = row.lhs.eval(x);
    bool ok = row.rel == Relation::Eq ? v == Rational(0) : v <= Rational(0);
    if (!ok) {
      if (violated) *violated = row.label;
      return false;
    }
  }
  return true;
}

// ---- convenience builders over the fixed space ----

inline AffineForm form_var(int var) {
  AffineForm f;
  f.add(var, ThetaAffine(Rational(1)));
  return f;
}

/// Full letter mass: sum of x_1..x_6 plus the tail mass.
inline AffineForm letter_sum(Letter l) {
  AffineForm f;
  for (int i = 1; i <= kTruncation; ++i) f.add(var_index(l, i), ThetaAffine(Rational(1)));
  f.add(tail_mass_index(l), ThetaAffine(Rational(1)));
  return f;
}

/// Full letter weight: sum of i * x_i plus the weighted tail.
inline AffineForm letter_weight(Letter l) {
  AffineForm f;
  for (int i = 1; i <= kTruncation; ++i) f.add(var_index(l, i), ThetaAffine(Rational(i)));
  f.add(tail_weight_index(l), ThetaAffine(Rational(1)));
  return f;
}

/// s_i = a_i + b_i + c_i at one index (no tails).
inline AffineForm index_sum(int i) {
  AffineForm f;
  for (Letter l : kLetters) f.add(var_index(l, i), ThetaAffine(Rational(1)));
  return f;
}

inline ThetaAffine theta_term(long num = 1, long den = 1) {
  return ThetaAffine(Rational(0), Rational(num, den));
}

}  // namespace abcert
