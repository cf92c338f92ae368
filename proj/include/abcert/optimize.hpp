#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcert/cert_builder.hpp"
#include "abcert/verify.hpp"

namespace abcert {

struct BisectionError : std::runtime_error {
  explicit BisectionError(const std::string& what) : std::runtime_error(what) {}
};

struct ProbeRecord {
  Rational theta;
  bool pass;
};

struct BisectionResult {
  Rational lo, hi;        // verify fails at lo, passes at hi, hi - lo <= tol
  std::string binding;    // binding leaf of the last failing probe
  std::vector<ProbeRecord> probes;
};

/**
 * Exact bisection for the critical exponent of a certificate. Arithmetic
 * midpoints; every probe is a full verification run; the fail-at-lo /
 * pass-at-hi invariant is maintained at every step by construction and both
 * endpoints are probed up front, so a non-monotone tree surfaces as a
 * precondition failure rather than a silently wrong bracket.
 */
inline BisectionResult critical_theta(const Certificate& cert, Rational lo, Rational hi,
                                      const Rational& tol, int jobs = 1) {
  if (!(lo < hi)) throw BisectionError("bisection: empty bracket (lo >= hi)");
  if (!(tol > Rational(0))) throw BisectionError("bisection: tolerance must be positive");
  BisectionResult res;
  VerificationReport rlo = verify_certificate(cert, lo, jobs);
  if (rlo.verified)
    throw BisectionError("bisection: verification already passes at lo = " + lo.str());
  VerificationReport rhi = verify_certificate(cert, hi, jobs);
  if (!rhi.verified)
    throw BisectionError("bisection: verification fails at hi = " + hi.str());
  res.probes.push_back({lo, false});
  res.probes.push_back({hi, true});
  res.binding = rlo.binding;
  while (hi - lo > tol) {
    Rational mid = (lo + hi) * Rational(1, 2);
    VerificationReport r = verify_certificate(cert, mid, jobs);
    res.probes.push_back({mid, r.verified});
    if (r.verified) {
      hi = mid;
    } else {
      lo = mid;
      res.binding = r.binding;
    }
  }
  res.lo = lo;
  res.hi = hi;
  return res;
}

struct LeafThreshold {
  std::string label;
  bool conditioned = false;  // status flips inside the bracket
  bool pass_low = false;     // status at the lo end (pass = not Failed)
  bool pass_high = false;
  Rational lo, hi;           // flip bracket when conditioned
};

/**
 * Per-leaf critical exponents with the tree held fixed: each leaf's
 * pass/fail flip is bisected against its own inherited region. A pseudo-leaf
 * "plane-cover" tracks the exhaustiveness check of the four final subcases.
 */
inline std::vector<LeafThreshold> leaf_critical_thetas(const Certificate& cert,
                                                       const Rational& lo_in,
                                                       const Rational& hi_in,
                                                       const Rational& tol, int jobs = 1) {
  if (!(lo_in < hi_in)) throw BisectionError("bisection: empty bracket (lo >= hi)");
  if (!(tol > Rational(0))) throw BisectionError("bisection: tolerance must be positive");

  std::vector<verify_detail::LeafTask> tasks;
  std::vector<Condition> path;
  std::vector<std::string> hyps;
  verify_detail::collect_leaves(cert, cert.root, path, tasks, hyps);
  const Polytope baseline = baseline_polytope();

  auto leaf_pass = [&](size_t i, const Rational& theta) {
    return verify_leaf(*tasks[i].leaf, tasks[i].path, baseline, theta).status !=
           LeafStatus::Failed;
  };
  auto cover_pass = [&](const Rational& theta) {
    auto [region, cases] = plane_cover_system();
    return check_cover(region, cases, theta).covered;
  };

  std::vector<LeafThreshold> out;
  auto bisect_one = [&](const std::string& label,
                        const std::function<bool(const Rational&)>& pass) {
    LeafThreshold t;
    t.label = label;
    t.pass_low = pass(lo_in);
    t.pass_high = pass(hi_in);
    if (t.pass_low == t.pass_high) {
      t.conditioned = false;
      out.push_back(std::move(t));
      return;
    }
    t.conditioned = true;
    Rational lo = lo_in, hi = hi_in;
    while (hi - lo > tol) {
      Rational mid = (lo + hi) * Rational(1, 2);
      if (pass(mid) == t.pass_high)
        hi = mid;
      else
        lo = mid;
    }
    t.lo = lo;
    t.hi = hi;
    out.push_back(std::move(t));
  };

  if (jobs <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i)
      bisect_one(tasks[i].leaf->label,
                 [&, i](const Rational& th) { return leaf_pass(i, th); });
  } else {
    std::vector<std::vector<LeafThreshold>> parts(tasks.size());
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          LeafThreshold t;
          t.label = tasks[i].leaf->label;
          t.pass_low = leaf_pass(i, lo_in);
          t.pass_high = leaf_pass(i, hi_in);
          if (t.pass_low != t.pass_high) {
            t.conditioned = true;
            Rational lo = lo_in, hi = hi_in;
            while (hi - lo > tol) {
              Rational mid = (lo + hi) * Rational(1, 2);
              if (leaf_pass(i, mid) == t.pass_high)
                hi = mid;
              else
                lo = mid;
            }
            t.lo = lo;
            t.hi = hi;
          }
          parts[i].push_back(std::move(t));
        }
      });
    for (auto& t : pool) t.join();
    for (auto& p : parts)
      for (auto& t : p) out.push_back(std::move(t));
  }
  bisect_one("plane-cover", cover_pass);
  return out;
}

inline ordered_json bisection_json(const BisectionResult& r) {
  ordered_json probes = ordered_json::array();
  for (const auto& p : r.probes)
    probes.push_back(ordered_json{{"theta", p.theta.str()}, {"pass", p.pass}});
  return ordered_json{{"lo", r.lo.str()},
                      {"hi", r.hi.str()},
                      {"lo_decimal", r.lo.decimal(9)},
                      {"hi_decimal", r.hi.decimal(9)},
                      {"binding_leaf", r.binding},
                      {"probes", std::move(probes)}};
}

inline ordered_json leaf_thresholds_json(const std::vector<LeafThreshold>& ts) {
  ordered_json arr = ordered_json::array();
  for (const auto& t : ts) {
    ordered_json j{{"leaf", t.label}};
    if (t.conditioned) {
      j["lo"] = t.lo.str();
      j["hi"] = t.hi.str();
      j["lo_decimal"] = t.lo.decimal(9);
      j["hi_decimal"] = t.hi.decimal(9);
      j["pass_above"] = t.pass_high;
    } else {
      j["unconditioned"] = true;
      j["pass"] = t.pass_high;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace abcert
