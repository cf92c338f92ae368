#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace abcert {

/**
 * Radicals of 1..limit, 32-bit entries. Linear smallest-prime-factor sieve up
 * to a memory threshold, segmented trial sieve above it. The memory budget
 * (bytes) comes from the ABCERT_SIEVE_MEM environment variable when set.
 */
struct RadTable {
  uint32_t limit = 0;
  std::vector<uint32_t> rad;
  std::string method;

  uint32_t operator()(uint32_t n) const {
    if (n == 0 || n > limit) throw std::out_of_range("rad: argument outside table");
    return rad[n];
  }
};

inline uint64_t sieve_memory_budget() {
  if (const char* env = std::getenv("ABCERT_SIEVE_MEM")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1ull << 31;  // 2 GiB default address budget
}

namespace radical_detail {

// rad is multiplicative: for n = p * m with p = lpf(n), rad(n) is rad(m)
// when p still divides m and p * rad(m) otherwise.
inline RadTable sieve_linear(uint32_t limit) {
  RadTable t;
  t.limit = limit;
  t.method = "linear";
  t.rad.assign(static_cast<size_t>(limit) + 1, 0);
  std::vector<uint32_t> lpf(static_cast<size_t>(limit) + 1, 0);
  std::vector<uint32_t> primes;
  t.rad[1] = 1;
  for (uint32_t n = 2; n <= limit; ++n) {
    if (lpf[n] == 0) {
      lpf[n] = n;
      t.rad[n] = n;
      primes.push_back(n);
    }
    for (uint32_t p : primes) {
      if (p > lpf[n] || static_cast<uint64_t>(p) * n > limit) break;
      uint32_t m = p * n;
      lpf[m] = p;
      t.rad[m] = n % p == 0 ? t.rad[n] : t.rad[n] * p;
    }
  }
  return t;
}

inline RadTable sieve_segmented(uint32_t limit, uint32_t segment = 1u << 22) {
  RadTable t;
  t.limit = limit;
  t.method = "segmented";
  t.rad.assign(static_cast<size_t>(limit) + 1, 1);
  std::vector<uint64_t> cofactor(segment);

  // primes up to sqrt(limit)
  uint32_t root = 1;
  while (static_cast<uint64_t>(root + 1) * (root + 1) <= limit) ++root;
  std::vector<bool> composite(root + 1, false);
  std::vector<uint32_t> primes;
  for (uint32_t n = 2; n <= root; ++n) {
    if (composite[n]) continue;
    primes.push_back(n);
    for (uint64_t m = static_cast<uint64_t>(n) * n; m <= root; m += n) composite[m] = true;
  }

  for (uint64_t lo = 1; lo <= limit; lo += segment) {
    uint64_t hi = std::min<uint64_t>(lo + segment - 1, limit);
    size_t len = hi - lo + 1;
    for (size_t i = 0; i < len; ++i) cofactor[i] = lo + i;
    for (uint32_t p : primes) {
      uint64_t first = ((lo + p - 1) / p) * p;
      for (uint64_t n = first; n <= hi; n += p) {
        size_t i = n - lo;
        t.rad[n] *= p;
        while (cofactor[i] % p == 0) cofactor[i] /= p;
      }
    }
    for (size_t i = 0; i < len; ++i) {
      uint64_t n = lo + i;
      if (cofactor[i] > 1) t.rad[n] = static_cast<uint32_t>(t.rad[n] * cofactor[i]);
    }
  }
  t.rad[1] = 1;
  return t;
}

}  // namespace radical_detail

inline RadTable sieve_rad(uint32_t limit) {
  if (limit < 1) throw std::invalid_argument("sieve_rad: limit must be >= 1");
  uint64_t budget = sieve_memory_budget();
  // linear sieve needs rad + lpf, 8 bytes per entry; segmented needs 4
  if (8ull * (limit + 1) > budget) {
    if (4ull * (limit + 1) + 12ull * (1u << 22) > budget)
      throw std::length_error("sieve_rad: limit exceeds the sieve memory budget");
    return radical_detail::sieve_segmented(limit);
  }
  return radical_detail::sieve_linear(limit);
}

/// Independent reference used by tests and the self-check suite.
inline uint64_t trial_division_rad(uint64_t n) {
  uint64_t r = 1;
  for (uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      r *= p;
      while (n % p == 0) n /= p;
    }
  return n > 1 ? r * n : r;
}

}  // namespace abcert
