#pragma once

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "abcert/optimize.hpp"
#include "abcert/triples.hpp"
#include "abcert/verify.hpp"

namespace abcert::cli {

// Stable exit-code contract: 0 success / verified, 1 failed check,
// 2 usage or malformed certificate, 3 I/O.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
  std::string cert_path;
  std::string theta;
  std::string lambda = "1/1";
  uint32_t limit = 100;
  std::string strategy = "exhaustive";
  std::string out_path;
  std::string format = "text";  // text | json | csv
  int jobs = 1;
  bool quick = false;
  std::string lo = "13/20";
  std::string hi = "2/3";
  std::string tol = "1/1048576";
  bool per_leaf = false;
  double grid_width = 0.1;
};

inline int write_output(const RunConfig& cfg, const std::string& data) {
  if (cfg.out_path.empty()) {
    std::cout << data;
    return kExitOk;
  }
  std::ofstream out(cfg.out_path);
  if (!out) {
    std::cerr << "error: cannot open '" << cfg.out_path << "' for writing\n";
    return kExitIo;
  }
  out << data;
  return out ? kExitOk : kExitIo;
}

inline int load_certificate(const RunConfig& cfg, Certificate& cert) {
  std::ifstream in(cfg.cert_path);
  if (!in) {
    std::cerr << "error: cannot read certificate '" << cfg.cert_path << "'\n";
    return kExitIo;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    cert = parse_certificate_text(ss.str());
  } catch (const CertificateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

inline int cmd_verify(const RunConfig& cfg) {
  Rational theta;
  try {
    theta = Rational::parse(cfg.theta);
  } catch (const std::exception& e) {
    std::cerr << "error: --theta: " << e.what() << "\n";
    return kExitUsage;
  }
  Certificate cert;
  if (int rc = load_certificate(cfg, cert)) return rc;
  try {
    VerificationReport rep = verify_certificate(cert, theta, cfg.jobs);
    std::string body = cfg.format == "json" ? report_json(rep).dump(1) + "\n"
                                            : report_text(rep);
    if (int rc = write_output(cfg, body)) return rc;
    return rep.verified ? kExitOk : kExitFailed;
  } catch (const CertificateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

inline int cmd_optimize(const RunConfig& cfg) {
  Rational lo, hi, tol;
  try {
    lo = Rational::parse(cfg.lo);
    hi = Rational::parse(cfg.hi);
    tol = Rational::parse(cfg.tol);
    if (!(lo < hi)) throw std::invalid_argument("inverted bracket (lo >= hi)");
    if (!(tol > Rational(0))) throw std::invalid_argument("tolerance must be positive");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  Certificate cert;
  if (int rc = load_certificate(cfg, cert)) return rc;
  try {
    BisectionResult res = critical_theta(cert, lo, hi, tol, cfg.jobs);
    ordered_json out = bisection_json(res);
    if (cfg.per_leaf) {
      auto leaves = leaf_critical_thetas(cert, lo, hi, tol, cfg.jobs);
      out["leaves"] = leaf_thresholds_json(leaves);
    }
    return write_output(cfg, out.dump(1) + "\n");
  } catch (const BisectionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}

inline int cmd_cover(const RunConfig& cfg) {
  Rational theta;
  try {
    theta = Rational::parse(cfg.theta);
  } catch (const std::exception& e) {
    std::cerr << "error: --theta: " << e.what() << "\n";
    return kExitUsage;
  }
  auto [region, cases] = plane_cover_system();
  CoverResult res = check_cover(region, cases, theta);
  ordered_json wit = ordered_json::array();
  for (const auto& w : res.witnesses)
    wit.push_back(ordered_json{
        {"combo", w.combo}, {"s1", w.s1.str()}, {"s2", w.s2.str()}});
  ordered_json out{{"theta", theta.str()},
                   {"covered", res.covered},
                   {"combos", res.combos},
                   {"witnesses", std::move(wit)}};
  if (int rc = write_output(cfg, out.dump(1) + "\n")) return rc;
  return res.covered ? kExitOk : kExitFailed;
}

inline int cmd_count(const RunConfig& cfg, bool stats_only = false) {
  Lambda lam;
  try {
    lam = Lambda::parse(cfg.lambda);
  } catch (const std::exception& e) {
    std::cerr << "error: --lambda: " << e.what() << "\n";
    return kExitUsage;
  }
  EnumStrategy strat;
  if (cfg.strategy == "exhaustive")
    strat = EnumStrategy::Exhaustive;
  else if (cfg.strategy == "filtered")
    strat = EnumStrategy::Filtered;
  else {
    std::cerr << "error: --strategy must be exhaustive or filtered\n";
    return kExitUsage;
  }
  try {
    RadTable rad = sieve_rad(cfg.limit);
    if (stats_only || cfg.format == "json") {
      CountReport rep = count_N(cfg.limit, lam, strat, rad, cfg.jobs, cfg.grid_width);
      return write_output(cfg, count_report_json(rep).dump(1) + "\n");
    }
    auto records = enumerate_triples(cfg.limit, lam, strat, rad, cfg.jobs);
    std::cerr << "N_" << lam.str() << "(" << cfg.limit << ") = " << records.size() << "\n";
    return write_output(cfg, triples_csv(records));
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

/// Invariant suites: LP duality on random instances, sieve properties,
/// strategy equivalence, certificate round-trip determinism.
inline int cmd_selftest(const RunConfig& cfg) {
  std::ostringstream summary;
  bool ok = true;
  auto check = [&](const std::string& name, bool pass) {
    summary << (pass ? "pass  " : "FAIL  ") << name << "\n";
    ok &= pass;
  };

  {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<long> coef(-4, 4), rhs(-2, 5), cdist(-3, 3);
    bool lp_ok = true;
    for (int trial = 0; trial < 60 && lp_ok; ++trial) {
      int n = 2 + trial % 3, m = 2 + trial % 4;
      Polytope p;
      p.nvars = n;
      for (int i = 0; i < m; ++i) {
        AffineForm f(n);
        for (int j = 0; j < n; ++j) f.add(j, ThetaAffine(Rational(coef(rng))));
        f.add_const(ThetaAffine(Rational(-rhs(rng))));
        p.add(std::move(f), Relation::LessEq, "r" + std::to_string(i));
      }
      AffineForm obj(n);
      for (int j = 0; j < n; ++j) obj.add(j, ThetaAffine(Rational(cdist(rng))));
      try {
        lp_maximize(p, obj, Rational(0));  // certificate check is built in
      } catch (const std::logic_error&) {
        lp_ok = false;
      }
    }
    check("lp duality and farkas certificates on random instances", lp_ok);
  }

  {
    uint32_t X = cfg.quick ? 20000 : 100000;
    RadTable rad = sieve_rad(X);
    bool sieve_ok = rad(1) == 1;
    std::mt19937 rng(7);
    std::uniform_int_distribution<uint32_t> pick(1, X);
    for (int i = 0; i < (cfg.quick ? 500 : 2000) && sieve_ok; ++i) {
      uint32_t n = pick(rng);
      sieve_ok &= rad(n) == trial_division_rad(n);
      sieve_ok &= n % rad(n) == 0;
    }
    uint32_t root = static_cast<uint32_t>(std::sqrt(static_cast<double>(X)));
    std::uniform_int_distribution<uint32_t> small(2, root - 1);
    for (int i = 0; i < 300 && sieve_ok; ++i) {
      uint32_t m = small(rng), n = small(rng);
      if (std::gcd(m, n) != 1) continue;
      sieve_ok &= static_cast<uint64_t>(rad(m)) * rad(n) == rad(m * n);
    }
    check("sieve agrees with trial division, rad divides n, multiplicativity",
          sieve_ok);

    uint32_t eqX = cfg.quick ? 1000 : 10000;
    Lambda one{1, 1};
    auto ex = enumerate_triples(eqX, one, EnumStrategy::Exhaustive, rad, cfg.jobs);
    auto fi = enumerate_triples(eqX, one, EnumStrategy::Filtered, rad, cfg.jobs);
    check("exhaustive and filtered strategies enumerate identical sets", ex == fi);
    bool coprime_ok = true;
    for (const auto& t : ex)
      coprime_ok &= std::gcd(t.a, t.b) == 1 && std::gcd(t.a, t.c) == 1 &&
                    std::gcd(t.b, t.c) == 1;
    check("coprimality closure on emitted triples", coprime_ok);
  }

  {
    Certificate built = build_reference_certificate();
    std::string text = serialize_certificate(built);
    bool round_ok = true;
    std::string detail;
    try {
      Certificate parsed = parse_certificate_text(text);
      round_ok &= serialize_certificate(parsed) == text;
      round_ok &= parsed.leaf_count() == built.leaf_count();
      if (!cfg.cert_path.empty()) {
        Certificate shipped;
        RunConfig sub = cfg;
        if (load_certificate(sub, shipped) != kExitOk) {
          round_ok = false;
          detail = " (shipped certificate unreadable or malformed)";
        } else if (serialize_certificate(shipped) != text) {
          round_ok = false;
          detail = " (shipped certificate differs from the builder output)";
        }
      }
    } catch (const CertificateError& e) {
      round_ok = false;
      detail = std::string(" (") + e.what() + ")";
    }
    check("certificate round-trip is byte-stable" + detail, round_ok);

    Rational theta(1);
    auto rep1 = verify_certificate(built, theta, 1);
    auto repN = verify_certificate(built, theta, std::max(cfg.jobs, 2));
    auto strip = [](VerificationReport r) {
      r.millis = 0;
      return report_json(r).dump();
    };
    check("verification reports identical under parallelism 1 vs N",
          strip(rep1) == strip(repN));
  }

  summary << (ok ? "selftest: all checks passed\n" : "selftest: FAILURES\n");
  std::cout << summary.str();
  return ok ? kExitOk : kExitFailed;
}

inline int cmd_emit_cert(const RunConfig& cfg) {
  Certificate cert = build_reference_certificate();
  return write_output(cfg, serialize_certificate(cert));
}

}  // namespace abcert::cli
