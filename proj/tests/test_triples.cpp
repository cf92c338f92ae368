#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "abcert/triples.hpp"

using namespace abcert;

namespace {

// independent oracle: double loop with trial-division radicals, no sieve
std::vector<std::tuple<uint32_t, uint32_t, uint32_t>> oracle_triples(uint32_t X,
                                                                     const Lambda& lam) {
  std::vector<std::tuple<uint32_t, uint32_t, uint32_t>> out;
  for (uint32_t c = 2; c <= X; ++c)
    for (uint32_t a = 1; 2 * a <= c; ++a) {
      uint32_t b = c - a;
      if (std::gcd(a, b) != 1) continue;
      uint128 rp = static_cast<uint128>(trial_division_rad(a)) * trial_division_rad(b) *
                   trial_division_rad(c);
      Int r(u128_str(rp));
      if (power_compare(r, lam.q, Int(c), lam.p) == std::strong_ordering::less)
        out.push_back({a, b, c});
    }
  return out;
}

const Lambda kOne{1, 1};

}  // namespace

TEST_CASE("sieve radicals") {
  RadTable rad = sieve_rad(2048);
  CHECK(rad(1) == 1);
  CHECK(rad(72) == 6);    // 2^3 * 3^2
  CHECK(rad(1024) == 2);  // prime power
  CHECK(rad(2) == 2);
  CHECK(rad(97) == 97);
  CHECK(rad(2047) == 2047);  // 23 * 89, squarefree
  CHECK_THROWS_AS(rad(0), std::out_of_range);
  CHECK_THROWS_AS(rad(4096), std::out_of_range);
  CHECK_THROWS_AS(sieve_rad(0), std::invalid_argument);
}

TEST_CASE("sieve agrees with trial division and stays multiplicative") {
  RadTable rad = sieve_rad(1000000);
  std::mt19937 rng(1);
  std::uniform_int_distribution<uint32_t> pick(1, 1000000);
  for (int i = 0; i < 10000; ++i) {
    uint32_t n = pick(rng);
    CHECK(rad(n) == trial_division_rad(n));
    CHECK(n % rad(n) == 0);
    // squarefree: no prime divides rad(n) twice
    uint32_t r = rad(n);
    CHECK(trial_division_rad(r) == r);
  }
  std::uniform_int_distribution<uint32_t> small(2, 999);
  for (int i = 0; i < 2000; ++i) {
    uint32_t m = small(rng), n = small(rng);
    if (std::gcd(m, n) != 1) continue;
    CHECK(static_cast<uint64_t>(rad(m)) * rad(n) == rad(m * n));
  }
}

TEST_CASE("segmented sieve matches the linear sieve") {
  RadTable lin = radical_detail::sieve_linear(300000);
  RadTable seg = radical_detail::sieve_segmented(300000, 1u << 14);
  for (uint32_t n = 1; n <= 300000; ++n) REQUIRE(lin.rad[n] == seg.rad[n]);
}

TEST_CASE("membership checks") {
  RadTable rad = sieve_rad(64);
  CHECK(is_abc_triple(1, 8, 9, kOne, rad));    // rad = 6 < 9
  CHECK_FALSE(is_abc_triple(1, 2, 3, kOne, rad));  // rad = 6 >= 3
  CHECK(is_abc_triple(5, 27, 32, kOne, rad));  // rad = 30 < 32
  CHECK_THROWS_AS(is_abc_triple(1, 3, 5, kOne, rad), std::invalid_argument);
  CHECK_THROWS_AS(is_abc_triple(2, 4, 6, kOne, rad), std::invalid_argument);
  CHECK_THROWS_AS(is_abc_triple(1, 127, 128, kOne, rad), std::invalid_argument);
}

TEST_CASE("enumeration at X = 100 equals the oracle and the known members") {
  RadTable rad = sieve_rad(100);
  auto records = enumerate_triples(100, kOne, EnumStrategy::Exhaustive, rad);
  auto oracle = oracle_triples(100, kOne);
  REQUIRE(records.size() == oracle.size());
  for (size_t i = 0; i < records.size(); ++i) {
    auto [a, b, c] = oracle[i];
    CHECK(records[i].a == a);
    CHECK(records[i].b == b);
    CHECK(records[i].c == c);
  }
  std::set<std::tuple<uint32_t, uint32_t, uint32_t>> got;
  for (const auto& t : records) got.insert({t.a, t.b, t.c});
  CHECK(got.count({1, 8, 9}));
  CHECK(got.count({5, 27, 32}));
  CHECK(got.count({1, 48, 49}));
  CHECK(got.count({1, 63, 64}));
  CHECK(got.count({1, 80, 81}));
  CHECK(got.count({32, 49, 81}));
  CHECK_FALSE(got.count({1, 2, 3}));
}

TEST_CASE("no triples below the first admissible c") {
  RadTable rad = sieve_rad(2);
  CHECK(enumerate_triples(2, kOne, EnumStrategy::Exhaustive, rad).empty());
}

TEST_CASE("counts match the oracle at the test scales") {
  for (uint32_t X : {100u, 1000u, 10000u}) {
    RadTable rad = sieve_rad(X);
    auto rep = count_N(X, kOne, EnumStrategy::Exhaustive, rad);
    CHECK(rep.N == oracle_triples(X, kOne).size());
    // grid totals preserve the count
    uint64_t total = 0;
    for (const auto& [cell, n] : rep.dyadic_grid) total += n;
    CHECK(total == rep.N);
  }
}

TEST_CASE("strategy equivalence and monotonicity in lambda") {
  for (uint32_t X : {100u, 1000u, 10000u}) {
    RadTable rad = sieve_rad(X);
    auto ex = enumerate_triples(X, kOne, EnumStrategy::Exhaustive, rad, 1);
    auto fi = enumerate_triples(X, kOne, EnumStrategy::Filtered, rad, 2);
    REQUIRE(ex.size() == fi.size());
    CHECK(ex == fi);
  }
  RadTable rad = sieve_rad(100);
  Lambda nine_tenths{9, 10};
  auto full = enumerate_triples(100, kOne, EnumStrategy::Exhaustive, rad);
  auto tight = enumerate_triples(100, nine_tenths, EnumStrategy::Exhaustive, rad);
  CHECK(tight.size() <= full.size());
  for (const auto& t : tight) CHECK(std::find(full.begin(), full.end(), t) != full.end());
}

TEST_CASE("lambda above one is supported by the exact comparison") {
  RadTable rad = sieve_rad(1000);
  Lambda eleven_tenths{11, 10};
  auto loose = enumerate_triples(1000, eleven_tenths, EnumStrategy::Exhaustive, rad);
  auto fi = enumerate_triples(1000, eleven_tenths, EnumStrategy::Filtered, rad);
  CHECK(loose == fi);
  auto exact = enumerate_triples(1000, kOne, EnumStrategy::Exhaustive, rad);
  CHECK(exact.size() <= loose.size());
}

TEST_CASE("coprimality closure on emitted records") {
  RadTable rad = sieve_rad(1000);
  for (const auto& t : enumerate_triples(1000, kOne, EnumStrategy::Exhaustive, rad)) {
    CHECK(std::gcd(t.a, t.b) == 1);
    CHECK(std::gcd(t.a, t.c) == 1);
    CHECK(std::gcd(t.b, t.c) == 1);
    CHECK(t.a + t.b == t.c);
    CHECK(t.a <= t.b);
  }
}

TEST_CASE("csv output is deterministic across parallelism") {
  RadTable rad = sieve_rad(5000);
  auto r1 = enumerate_triples(5000, kOne, EnumStrategy::Filtered, rad, 1);
  auto r2 = enumerate_triples(5000, kOne, EnumStrategy::Filtered, rad, 3);
  CHECK(triples_csv(r1) == triples_csv(r2));
}

TEST_CASE("dyadic exponents of the hand-checked triples") {
  RadTable rad = sieve_rad(100);
  // (1, 8, 9): beta = log 2 / log 8 = 1/3, gamma = log 3 / log 9 = 1/2
  CHECK(dyadic_exponent(1, rad(1)) == 1.0);
  CHECK(dyadic_exponent(8, rad(8)) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(dyadic_exponent(9, rad(9)) == doctest::Approx(0.5).epsilon(1e-12));
  // (5, 27, 32): alpha = 1, beta = 1/3, gamma = 1/5
  CHECK(dyadic_exponent(5, rad(5)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dyadic_exponent(27, rad(27)) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(dyadic_exponent(32, rad(32)) == doctest::Approx(0.2).epsilon(1e-12));

  std::vector<TripleRecord> empty;
  CHECK(dyadic_stats(empty, 0.1, rad).empty());
}

TEST_CASE("slope fitting") {
  CHECK(fit_exponent({{10, 1}, {100, 10}, {1000, 100}}) == doctest::Approx(1.0));
  CHECK(fit_exponent({{10, 1}, {100, 1}}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fit_exponent({{10, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_exponent({{10, 0}, {100, 0}}), std::invalid_argument);
}

TEST_CASE("capacity guards") {
  RadTable rad = sieve_rad(1000);
  CHECK_THROWS_AS(enumerate_triples(2000, kOne, EnumStrategy::Exhaustive, rad),
                  std::invalid_argument);  // table too small
  RadTable big = sieve_rad(200000);
  CHECK_THROWS_AS(enumerate_triples(200000, kOne, EnumStrategy::Exhaustive, big),
                  std::length_error);  // exhaustive cap
}
