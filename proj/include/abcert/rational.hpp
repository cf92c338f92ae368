#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace abcert {

using Int = boost::multiprecision::mpz_int;

/**
 * Canonical exact rational: denominator > 0, gcd(|num|, den) = 1, zero is 0/1.
 * Backed by GMP; every arithmetic path keeps the canonical form.
 */
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}
  Rational(const Int& n) : v_(n) {}
  Rational(long n, long d) { assign(Int(n), Int(d)); }
  Rational(const Int& n, const Int& d) { assign(n, d); }

  static Rational normalized(const Int& n, const Int& d) { return Rational(n, d); }

  Int num() const { return boost::multiprecision::numerator(v_); }
  Int den() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  int sign() const { return v_.sign(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
  friend Rational operator-(const Rational& a) { Rational r; r.v_ = -a.v_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = a.v_.compare(b.v_);
    return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
  }

  /// Exact serialization, always "num/den" (e.g. "56/85", "0/1").
  std::string str() const { return num().str() + "/" + den().str(); }

  /// Advisory decimal rendering with the given number of fractional digits.
  /// Rounds half away from zero; never used in any decision path.
  std::string decimal(int digits = 6) const {
    Int n = num(), d = den();
    bool neg = n < 0;
    if (neg) n = -n;
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Int scaled = (n * scale * 2 + d) / (d * 2);
    Int ip = scaled / scale, fp = scaled % scale;
    std::string f = fp.str();
    f.insert(f.begin(), digits - static_cast<int>(f.size()), '0');
    return (neg && (ip != 0 || fp != 0) ? "-" : "") + ip.str() + "." + f;
  }

  double to_double() const { return v_.convert_to<double>(); }

  /// Parses "p/q" or "p" with optional sign. Decimal notation is rejected so
  /// no silent rounding can reach an exact code path.
  static Rational parse(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("rational: empty string");
    if (s.find('.') != std::string_view::npos)
      throw std::invalid_argument("rational: decimal notation not accepted, use an exact fraction p/q");
    auto slash = s.find('/');
    try {
      if (slash == std::string_view::npos) return Rational(Int(std::string(s)), Int(1));
      Int n{std::string(s.substr(0, slash))};
      Int d{std::string(s.substr(slash + 1))};
      return Rational(n, d);
    } catch (const std::runtime_error&) {
      throw std::invalid_argument("rational: malformed fraction '" + std::string(s) + "'");
    }
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  boost::multiprecision::mpq_rational v_;

  void assign(const Int& n, const Int& d) {
    if (d.is_zero()) throw std::domain_error("rational: zero denominator");
    v_ = boost::multiprecision::mpq_rational(n);
    v_ /= boost::multiprecision::mpq_rational(d);
  }
};

inline Rational rational_normalize(const Int& num, const Int& den) {
  return Rational::normalized(num, den);
}

inline std::strong_ordering rational_compare(const Rational& a, const Rational& b) {
  return a <=> b;
}

/**
 * Exact ordering of a^p vs b^q for a, b >= 1, p, q >= 1.
 *
 * Fast path: disjoint bit-length ranges decide without computing the powers
 * (value v has bit length L => v in [2^(L-1), 2^L - 1], so v^e has bit length
 * in [e(L-1)+1, eL]). Overlapping ranges fall back to exact exponentiation.
 */
inline std::strong_ordering power_compare(const Int& a, unsigned p, const Int& b, unsigned q) {
  if (a < 1 || b < 1 || p < 1 || q < 1)
    throw std::invalid_argument("power_compare: arguments must be >= 1");
  if (a == 1 && b == 1) return std::strong_ordering::equal;
  if (a == 1) return std::strong_ordering::less;
  if (b == 1) return std::strong_ordering::greater;
  unsigned long la = boost::multiprecision::msb(a) + 1;
  unsigned long lb = boost::multiprecision::msb(b) + 1;
  unsigned long lo_a = p * (la - 1) + 1, hi_a = p * la;
  unsigned long lo_b = q * (lb - 1) + 1, hi_b = q * lb;
  if (lo_a > hi_b) return std::strong_ordering::greater;
  if (lo_b > hi_a) return std::strong_ordering::less;
  Int pa = boost::multiprecision::pow(a, p);
  Int pb = boost::multiprecision::pow(b, q);
  int c = pa.compare(pb);
  return c < 0 ? std::strong_ordering::less
       : c > 0 ? std::strong_ordering::greater
               : std::strong_ordering::equal;
}

/**
 * Affine function of the target exponent: const_part + theta_coeff * theta.
 * Houses every theta-dependent constant of the case analysis.
 */
struct ThetaAffine {
  Rational c;  // constant part
  Rational t;  // coefficient of theta

  ThetaAffine() = default;
  ThetaAffine(Rational cc) : c(std::move(cc)) {}
  ThetaAffine(Rational cc, Rational tt) : c(std::move(cc)), t(std::move(tt)) {}

  bool is_zero() const { return c.is_zero() && t.is_zero(); }
  bool theta_free() const { return t.is_zero(); }

  Rational at(const Rational& theta) const { return c + t * theta; }

  ThetaAffine& operator+=(const ThetaAffine& o) { c += o.c; t += o.t; return *this; }
  ThetaAffine& operator-=(const ThetaAffine& o) { c -= o.c; t -= o.t; return *this; }
  ThetaAffine& operator*=(const Rational& s) { c *= s; t *= s; return *this; }

  friend ThetaAffine operator+(ThetaAffine a, const ThetaAffine& b) { a += b; return a; }
  friend ThetaAffine operator-(ThetaAffine a, const ThetaAffine& b) { a -= b; return a; }
  friend ThetaAffine operator*(ThetaAffine a, const Rational& s) { a *= s; return a; }
  friend ThetaAffine operator-(const ThetaAffine& a) { return ThetaAffine(-a.c, -a.t); }
  friend bool operator==(const ThetaAffine& a, const ThetaAffine& b) = default;
};

}  // namespace abcert
