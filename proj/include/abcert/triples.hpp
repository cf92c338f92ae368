#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "abcert/radical.hpp"
#include "abcert/rational.hpp"

namespace abcert {

using uint128 = unsigned __int128;

inline std::string u128_str(uint128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s += static_cast<char>('0' + static_cast<int>(v % 10));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

/// One triple a + b = c with a <= b and gcd(a, b) = 1 (which forces pairwise
/// coprimality). The quality field is an advisory decimal only.
struct TripleRecord {
  uint32_t a, b, c;
  uint128 rad_abc;
  double quality;

  friend bool operator==(const TripleRecord& x, const TripleRecord& y) {
    return x.a == y.a && x.c == y.c;
  }
  friend bool operator<(const TripleRecord& x, const TripleRecord& y) {
    return x.c != y.c ? x.c < y.c : x.a < y.a;
  }
};

/// Exponent lambda = p/q as exact integers.
struct Lambda {
  unsigned p = 1, q = 1;

  static Lambda parse(const std::string& s) {
    Rational r = Rational::parse(s);
    if (r.sign() <= 0) throw std::invalid_argument("lambda must be positive");
    Lambda l;
    l.p = static_cast<unsigned>(r.num().convert_to<unsigned long>());
    l.q = static_cast<unsigned>(r.den().convert_to<unsigned long>());
    return l;
  }
  std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }
};

/// Membership test: rad(abc)^q < c^p, decided in integers.
inline bool radical_condition(uint128 radprod, uint32_t c, const Lambda& lam) {
  if (lam.p == lam.q) return radprod < c;  // lambda = 1 fast path
  Int r = 0;
  // assemble the 128-bit product into an Int
  uint64_t hi = static_cast<uint64_t>(radprod >> 64);
  uint64_t lo = static_cast<uint64_t>(radprod);
  r = Int(hi);
  r <<= 64;
  r += lo;
  return power_compare(r, lam.q, Int(c), lam.p) == std::strong_ordering::less;
}

inline bool is_abc_triple(uint32_t a, uint32_t b, uint32_t c, const Lambda& lam,
                          const RadTable& rad) {
  if (a + b != c) throw std::invalid_argument("is_abc_triple: a + b != c");
  if (c > rad.limit) throw std::invalid_argument("is_abc_triple: c beyond table limit");
  if (std::gcd(a, b) != 1) throw std::invalid_argument("is_abc_triple: gcd(a, b) != 1");
  uint128 radprod = static_cast<uint128>(rad(a)) * rad(b) * rad(c);
  return radical_condition(radprod, c, lam);
}

inline double advisory_quality(uint128 radprod, uint32_t c) {
  long double r = 0;
  // log of a 128-bit value via its halves
  uint64_t hi = static_cast<uint64_t>(radprod >> 64);
  uint64_t lo = static_cast<uint64_t>(radprod);
  if (hi)
    r = std::log(static_cast<long double>(hi) * 18446744073709551616.0L +
                 static_cast<long double>(lo));
  else
    r = std::log(static_cast<long double>(lo));
  return static_cast<double>(std::log(static_cast<long double>(c)) / r);
}

enum class EnumStrategy { Exhaustive, Filtered };

inline constexpr uint32_t kExhaustiveCap = 100000;

namespace triples_detail {

inline TripleRecord make_record(uint32_t a, uint32_t b, uint32_t c, const RadTable& rad) {
  uint128 rp = static_cast<uint128>(rad(a)) * rad(b) * rad(c);
  return TripleRecord{a, b, c, rp, advisory_quality(rp, c)};
}

inline void scan_exhaustive(uint32_t X, const Lambda& lam, const RadTable& rad,
                            std::vector<TripleRecord>& out) {
  for (uint32_t c = 2; c <= X; ++c) {
    uint64_t rc = rad(c);
    for (uint32_t a = 1; 2 * a <= c; ++a) {
      uint32_t b = c - a;
      uint64_t ra = rad(a);
      if (lam.p <= lam.q && static_cast<uint128>(ra) * rc >= c) continue;  // prune
      if (std::gcd(a, b) != 1) continue;
      uint128 rp = static_cast<uint128>(ra) * rad(b) * rc;
      if (radical_condition(rp, c, lam)) out.push_back(make_record(a, b, c, rad));
    }
  }
}

// Largest T with T^(3q) < X^p, by exact bisection.
inline uint64_t deficiency_threshold(uint32_t X, const Lambda& lam) {
  uint64_t lo = 1, hi = X;
  while (lo < hi) {
    uint64_t mid = lo + (hi - lo + 1) / 2;
    if (power_compare(Int(mid), 3 * lam.q, Int(X), lam.p) == std::strong_ordering::less)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

inline void scan_filtered(uint32_t X, const Lambda& lam, const RadTable& rad,
                          std::vector<TripleRecord>& out, int jobs) {
  // any triple has min(rad(a), rad(b), rad(c))^3q < X^p; enumerate the
  // radical-deficient candidates once per role
  uint64_t thresh = deficiency_threshold(X, lam);
  std::vector<uint32_t> deficient;
  for (uint32_t n = 1; n <= X; ++n)
    if (rad(n) <= thresh) deficient.push_back(n);

  const bool can_prune = lam.p <= lam.q;
  std::atomic<size_t> cursor{0};
  std::vector<std::vector<TripleRecord>> parts(std::max(jobs, 1));

  auto worker = [&](int w) {
    auto& hits = parts[w];
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= deficient.size()) return;
      uint32_t n = deficient[i];
      uint64_t rn = rad(n);
      // role c: c = n
      for (uint32_t a = 1; 2 * a <= n; ++a) {
        uint32_t b = n - a;
        if (can_prune && static_cast<uint128>(rad(a)) * rn >= n) continue;
        if (std::gcd(a, b) != 1) continue;
        uint128 rp = static_cast<uint128>(rad(a)) * rad(b) * rn;
        if (radical_condition(rp, n, lam)) hits.push_back(make_record(a, b, n, rad));
      }
      // role a: a = n, b in [n, X - n]
      for (uint32_t b = n; b <= X - n && n <= X - n; ++b) {
        uint32_t c = n + b;
        if (can_prune && static_cast<uint128>(rn) * rad(b) >= c) continue;
        if (std::gcd(n, b) != 1) continue;
        uint128 rp = static_cast<uint128>(rn) * rad(b) * rad(c);
        if (radical_condition(rp, c, lam)) hits.push_back(make_record(n, b, c, rad));
      }
      // role b: b = n, a in [1, min(n, X - n)]
      for (uint32_t a = 1; a <= n && a + n <= X; ++a) {
        uint32_t c = a + n;
        if (can_prune && static_cast<uint128>(rn) * rad(a) >= c) continue;
        if (std::gcd(a, n) != 1) continue;
        uint128 rp = static_cast<uint128>(rad(a)) * rn * rad(c);
        if (radical_condition(rp, c, lam)) hits.push_back(make_record(a, n, c, rad));
      }
    }
  };

  if (jobs <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace triples_detail

/// Exactly the triples { (a,b,c) : a <= b, a+b = c <= X, gcd(a,b) = 1,
/// rad(abc)^q < c^p }, each once, sorted by (c, a).
inline std::vector<TripleRecord> enumerate_triples(uint32_t X, const Lambda& lam,
                                                   EnumStrategy strategy,
                                                   const RadTable& rad, int jobs = 1) {
  if (rad.limit < X) throw std::invalid_argument("enumerate_triples: table too small");
  if (strategy == EnumStrategy::Exhaustive && X > kExhaustiveCap)
    throw std::length_error("enumerate_triples: exhaustive strategy capped at 100000");
  std::vector<TripleRecord> out;
  if (strategy == EnumStrategy::Exhaustive)
    triples_detail::scan_exhaustive(X, lam, rad, out);
  else
    triples_detail::scan_filtered(X, lam, rad, out, jobs);
  return out;
}

struct CountReport {
  uint32_t X = 0;
  Lambda lambda;
  std::string strategy;
  uint64_t N = 0;
  std::map<int, uint64_t> quality_histogram;  // floor(quality * 100) buckets
  std::map<std::tuple<int, int, int>, uint64_t> dyadic_grid;
  double grid_width = 0;
  long millis = 0;
};

/// alpha = log rad(a) / log a, with alpha := 1 at a = 1 (the boundary
/// convention is advisory and documented in the CSV header).
inline double dyadic_exponent(uint32_t n, uint32_t radn) {
  if (n == 1) return 1.0;
  return std::log(static_cast<double>(radn)) / std::log(static_cast<double>(n));
}

inline std::map<std::tuple<int, int, int>, uint64_t> dyadic_stats(
    const std::vector<TripleRecord>& records, double grid_width, const RadTable& rad) {
  std::map<std::tuple<int, int, int>, uint64_t> grid;
  for (const auto& t : records) {
    int ia = static_cast<int>(std::floor(dyadic_exponent(t.a, rad(t.a)) / grid_width));
    int ib = static_cast<int>(std::floor(dyadic_exponent(t.b, rad(t.b)) / grid_width));
    int ic = static_cast<int>(std::floor(dyadic_exponent(t.c, rad(t.c)) / grid_width));
    grid[{ia, ib, ic}]++;
  }
  return grid;
}

inline CountReport count_N(uint32_t X, const Lambda& lam, EnumStrategy strategy,
                           const RadTable& rad, int jobs = 1, double grid_width = 0.1) {
  auto t0 = std::chrono::steady_clock::now();
  CountReport rep;
  rep.X = X;
  rep.lambda = lam;
  rep.strategy = strategy == EnumStrategy::Exhaustive ? "exhaustive" : "filtered";
  rep.grid_width = grid_width;
  auto records = enumerate_triples(X, lam, strategy, rad, jobs);
  rep.N = records.size();
  for (const auto& t : records)
    rep.quality_histogram[static_cast<int>(t.quality * 100)]++;
  rep.dyadic_grid = dyadic_stats(records, grid_width, rad);
  rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  return rep;
}

/// CSV columns a,b,c,rad_abc,quality (6-decimal advisory), rows sorted.
inline std::string triples_csv(const std::vector<TripleRecord>& records) {
  std::ostringstream os;
  os << "a,b,c,rad_abc,quality\n";
  char buf[32];
  for (const auto& t : records) {
    std::snprintf(buf, sizeof buf, "%.6f", t.quality);
    os << t.a << ',' << t.b << ',' << t.c << ',' << u128_str(t.rad_abc) << ',' << buf << '\n';
  }
  return os.str();
}

inline nlohmann::ordered_json count_report_json(const CountReport& rep) {
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [bucket, n] : rep.quality_histogram)
    hist[std::to_string(bucket / 100.0)] = n;
  nlohmann::ordered_json grid = nlohmann::ordered_json::array();
  uint64_t total = 0;
  for (const auto& [cell, n] : rep.dyadic_grid) {
    auto [ia, ib, ic] = cell;
    grid.push_back(nlohmann::ordered_json{
        {"alpha", ia * rep.grid_width}, {"beta", ib * rep.grid_width},
        {"gamma", ic * rep.grid_width}, {"count", n}});
    total += n;
  }
  return nlohmann::ordered_json{{"X", rep.X},
                                {"lambda", rep.lambda.str()},
                                {"strategy", rep.strategy},
                                {"N", rep.N},
                                {"grid_width", rep.grid_width},
                                {"grid_total", total},
                                {"quality_histogram", std::move(hist)},
                                {"dyadic_grid", std::move(grid)},
                                {"millis", rep.millis}};
}

/// Least-squares slope of log N against log X. Advisory floating point,
/// never part of an exact decision.
inline double fit_exponent(const std::vector<std::pair<uint64_t, uint64_t>>& series) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (auto [X, N] : series) {
    if (N == 0) continue;
    double x = std::log(static_cast<double>(X)), y = std::log(static_cast<double>(N));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fit_exponent: need at least two nonzero counts");
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_exponent: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace abcert
