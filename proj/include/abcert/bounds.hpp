#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcert/linear.hpp"
#include "abcert/rational.hpp"

namespace abcert {

/**
 * Baseline feasible region of the exponent variables, with the epsilon/delta
 * slack of the underlying counting argument collapsed to zero:
 *   - letter weights: sum i*a_i + Wa <= 1, same for b; equal to 1 for c
 *   - pairwise letter sums >= theta
 *   - total mass <= 1
 *   - each letter sum in [2 theta - 1, 1 - theta]
 *   - tail structure W >= 7 T (nonnegativity is implicit everywhere)
 */
inline Polytope baseline_polytope() {
  Polytope p;
  const ThetaAffine one(Rational(1));
  const ThetaAffine theta = theta_term();

  for (Letter l : kLetters) {
    AffineForm w = letter_weight(l);
    w.add_const(-one);
    p.add(std::move(w), l == Letter::C ? Relation::Eq : Relation::LessEq,
          std::string("weight-") + letter_name(l));
  }
  const std::array<std::pair<Letter, Letter>, 3> pairs{
      std::pair{Letter::A, Letter::B}, {Letter::A, Letter::C}, {Letter::B, Letter::C}};
  for (auto [x, y] : pairs) {
    AffineForm f(kNumVars);
    f.add_const(theta);
    f -= letter_sum(x);
    f -= letter_sum(y);
    p.add(std::move(f), Relation::LessEq,
          std::string("pair-") + letter_name(x) + letter_name(y));
  }
  {
    AffineForm f(kNumVars);
    for (Letter l : kLetters) f += letter_sum(l);
    f.add_const(-one);
    p.add(std::move(f), Relation::LessEq, "mass");
  }
  for (Letter l : kLetters) {
    AffineForm lo(kNumVars);
    lo.add_const(ThetaAffine(Rational(-1), Rational(2)));  // 2 theta - 1
    lo -= letter_sum(l);
    p.add(std::move(lo), Relation::LessEq, std::string("sum-") + letter_name(l) + "-min");
    AffineForm hi = letter_sum(l);
    hi.add_const(ThetaAffine(Rational(-1), Rational(1)));  // -(1 - theta)
    p.add(std::move(hi), Relation::LessEq, std::string("sum-") + letter_name(l) + "-max");
  }
  for (Letter l : kLetters) {
    AffineForm f(kNumVars);
    f.add(tail_mass_index(l), ThetaAffine(Rational(7)));
    f.add(tail_weight_index(l), ThetaAffine(Rational(-1)));
    p.add(std::move(f), Relation::LessEq, std::string("tail-") + letter_name(l));
  }
  return p;
}

/// Named alias expansion: s_i, the delta family, and the split constant k.
inline AffineForm derived_form(const std::string& name) {
  auto third = ThetaAffine(Rational(1, 3));
  if (name.size() == 2 && name[0] == 's' && name[1] >= '1' && name[1] <= '6')
    return index_sum(name[1] - '0');
  auto delta = [&](Letter l) {
    AffineForm f(kNumVars);
    f.add_const(third);
    f -= letter_sum(l);
    return f;
  };
  if (name == "delta_a") return delta(Letter::A);
  if (name == "delta_b") return delta(Letter::B);
  if (name == "delta_c") return delta(Letter::C);
  if (name == "delta_ab") return delta(Letter::A) + delta(Letter::B);
  if (name == "delta_ac") return delta(Letter::A) + delta(Letter::C);
  if (name == "delta_bc") return delta(Letter::B) + delta(Letter::C);
  if (name == "delta_s") return delta(Letter::A) + delta(Letter::B) + delta(Letter::C);
  if (name == "k") {
    AffineForm f(kNumVars);
    f.add_const(ThetaAffine(Rational(49, 12), Rational(-23, 4)));
    return f;
  }
  throw std::invalid_argument("derived_form: unknown name '" + name + "'");
}

enum class BoundKind { Fourier, GeometryV1, GeometryV2, Determinant, Thue, Contradiction };

inline std::string bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::Fourier: return "fourier";
    case BoundKind::GeometryV1: return "geometry1";
    case BoundKind::GeometryV2: return "geometry2";
    case BoundKind::Determinant: return "determinant";
    case BoundKind::Thue: return "thue";
    case BoundKind::Contradiction: return "contradiction";
  }
  return "?";
}

struct LetterPair {
  Letter x = Letter::A;
  Letter y = Letter::B;

  std::string name() const { return std::string() + letter_name(x) + letter_name(y); }
};

inline LetterPair letter_pair(const std::string& s) {
  auto of = [](char c) {
    return c == 'a' ? Letter::A : c == 'b' ? Letter::B : Letter::C;
  };
  if (s.size() != 2 || s[0] >= s[1] || s.find_first_not_of("abc") != std::string::npos)
    throw std::invalid_argument("bad letter pair '" + s + "'");
  return {of(s[0]), of(s[1])};
}

/// Geometry selections: per index 1..6, which letters participate (at weight i).
using SelectMap = std::array<std::array<bool, 3>, kTruncation + 1>;

/// Geometry second form: per letter, the indices kept OUT of the weighted part
/// (contributing their plain sum), plus whether the tail is out.
struct OutSet {
  std::array<bool, kTruncation + 1> idx{};
  bool tail = false;
};

/**
 * One instantiation of a combinatorial bound on nu: a list of side
 * conditions plus linear forms whose maximum dominates nu on the region.
 * Fourier instances expand into one branch per dominance orientation.
 */
struct BoundInstance {
  BoundKind kind = BoundKind::Contradiction;

  LetterPair pair;                 // fourier, thue, determinant (x-letter, y-letter role)
  int fourier_m = 2;               // excluded index, 2..6
  int thue_p = 2;                  // modulus, 2..6
  int det_p = 3;                   // determinant x-index
  int det_q = 4;                   // determinant y-index (ignored when aux)
  bool det_y_aux = false;          // y is a declared leaf auxiliary
  std::string det_aux_name;
  int det_relax = 2;               // 1: keep x_p/q, 2: keep y_q/p
  SelectMap select{};              // geometry v1
  std::array<OutSet, 3> out{};     // geometry v2

  struct Branch {
    std::string tag;
    std::vector<Constraint> side;
    std::vector<AffineForm> forms;
  };

  /// Expands to orientation branches; aux names resolve to extended columns.
  std::vector<Branch> expand(
      const std::function<int(const std::string&)>& aux_col) const {
    std::vector<Branch> branches;
    switch (kind) {
      case BoundKind::Contradiction:
        branches.push_back({"", {}, {}});
        break;
      case BoundKind::Thue: {
        if (thue_p < 2 || thue_p > kTruncation)
          throw std::invalid_argument("thue: modulus out of 2..6");
        AffineForm f(kNumVars);
        f.add_const(ThetaAffine(Rational(1)));
        for (int i = thue_p; i <= kTruncation; i += thue_p) {
          f.add(var_index(pair.x, i), ThetaAffine(Rational(-1)));
          f.add(var_index(pair.y, i), ThetaAffine(Rational(-1)));
        }
        branches.push_back({"", {}, {std::move(f)}});
        break;
      }
      case BoundKind::GeometryV1: {
        AffineForm l0(kNumVars), l1(kNumVars);
        bool any = false;
        for (int i = 1; i <= kTruncation; ++i)
          for (Letter l : kLetters)
            if (select[i][static_cast<int>(l)]) {
              any = true;
              l0.add(var_index(l, i), ThetaAffine(Rational(1)));
              l1.add(var_index(l, i), ThetaAffine(Rational(i)));
            }
        if (!any) throw std::invalid_argument("geometry1: empty selection");
        AffineForm f1(kNumVars);
        f1.add_const(ThetaAffine(Rational(1)));
        f1 -= l0;
        AffineForm f2 = l1 - l0;
        branches.push_back({"", {}, {std::move(f1), std::move(f2)}});
        break;
      }
      case BoundKind::GeometryV2: {
        AffineForm lout(kNumVars), linw(kNumVars);
        for (Letter l : kLetters) {
          const OutSet& o = out[static_cast<int>(l)];
          for (int i = 1; i <= kTruncation; ++i) {
            if (o.idx[i])
              lout.add(var_index(l, i), ThetaAffine(Rational(1)));
            else
              linw.add(var_index(l, i), ThetaAffine(Rational(i)));
          }
          if (o.tail)
            lout.add(tail_mass_index(l), ThetaAffine(Rational(1)));
          else
            linw.add(tail_weight_index(l), ThetaAffine(Rational(1)));
        }
        AffineForm hi = lout + linw;
        hi.add_const(ThetaAffine(Rational(-1)));
        branches.push_back({"", {}, {std::move(lout), std::move(hi)}});
        break;
      }
      case BoundKind::Determinant: {
        AffineForm f(kNumVars);
        f.add_const(ThetaAffine(Rational(1)));
        int xcol = var_index(pair.x, det_p);
        int ycol = det_y_aux ? aux_col(det_aux_name) : var_index(pair.y, det_q);
        if (det_relax == 2) {
          // keep min <= y_q / p:   1 - x_p - (1 - 1/p) y
          f.add(xcol, ThetaAffine(Rational(-1)));
          f.add(ycol, ThetaAffine(Rational(-1) + Rational(1, det_p)));
        } else {
          // keep min <= x_p / q:   1 - (1 - 1/q) x_p - y
          if (det_y_aux) throw std::invalid_argument("determinant: first-arg relax needs a concrete q");
          f.add(xcol, ThetaAffine(Rational(-1) + Rational(1, det_q)));
          f.add(ycol, ThetaAffine(Rational(-1)));
        }
        branches.push_back({"", {}, {std::move(f)}});
        break;
      }
      case BoundKind::Fourier: {
        if (fourier_m < 2 || fourier_m > kTruncation)
          throw std::invalid_argument("fourier: excluded index out of 2..6");
        const Rational half(1, 2);
        for (int mask = 0; mask < (1 << kTruncation); ++mask) {
          Branch br;
          br.tag = "orient-";
          AffineForm f(kNumVars);
          f.add_const(ThetaAffine(half));
          f.add(tail_mass_index(pair.x), ThetaAffine(half));
          f.add(tail_mass_index(pair.y), ThetaAffine(half));
          for (int i = 1; i <= kTruncation; ++i) {
            bool xdom = (mask >> (i - 1)) & 1;
            Letter sel = xdom ? pair.x : pair.y;
            Letter oth = xdom ? pair.y : pair.x;
            br.tag += xdom ? letter_name(pair.x) : letter_name(pair.y);
            AffineForm side(kNumVars);
            side.add(var_index(oth, i), ThetaAffine(Rational(1)));
            side.add(var_index(sel, i), ThetaAffine(Rational(-1)));
            br.side.emplace_back(std::move(side), Relation::LessEq,
                                 "dominance-" + std::string(1, letter_name(sel)) +
                                     std::to_string(i));
            if (i != fourier_m) f.add(var_index(sel, i), ThetaAffine(half));
          }
          br.forms.push_back(std::move(f));
          branches.push_back(std::move(br));
        }
        break;
      }
    }
    return branches;
  }
};

inline BoundInstance fourier_instance(LetterPair pair, int excluded_m) {
  BoundInstance b;
  b.kind = BoundKind::Fourier;
  b.pair = pair;
  b.fourier_m = excluded_m;
  return b;
}

inline BoundInstance thue_instance(int p, LetterPair pair) {
  BoundInstance b;
  b.kind = BoundKind::Thue;
  b.pair = pair;
  b.thue_p = p;
  return b;
}

inline BoundInstance geometry_v1_instance(const SelectMap& select) {
  BoundInstance b;
  b.kind = BoundKind::GeometryV1;
  b.select = select;
  return b;
}

inline BoundInstance geometry_v2_instance(const std::array<OutSet, 3>& out) {
  BoundInstance b;
  b.kind = BoundKind::GeometryV2;
  b.out = out;
  return b;
}

inline BoundInstance determinant_aux_instance(Letter x, int p, const std::string& aux) {
  BoundInstance b;
  b.kind = BoundKind::Determinant;
  b.pair.x = x;
  b.det_p = p;
  b.det_y_aux = true;
  b.det_aux_name = aux;
  b.det_relax = 2;
  return b;
}

inline BoundInstance contradiction_instance() { return BoundInstance{}; }

// geometry v1 selection helpers
inline SelectMap select_none() { return SelectMap{}; }
inline void select_full(SelectMap& m, int i) {
  m[i][0] = m[i][1] = m[i][2] = true;
}
inline void select_letter(SelectMap& m, int i, Letter l) { m[i][static_cast<int>(l)] = true; }

}  // namespace abcert
