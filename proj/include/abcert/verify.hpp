#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "abcert/cert_model.hpp"
#include "abcert/simplex.hpp"

namespace abcert {

enum class LeafStatus { Verified, Vacuous, Failed };

inline const char* leaf_status_name(LeafStatus s) {
  switch (s) {
    case LeafStatus::Verified: return "verified";
    case LeafStatus::Vacuous: return "vacuous";
    case LeafStatus::Failed: return "failed";
  }
  return "?";
}

struct LeafResult {
  std::string label;
  LeafStatus status = LeafStatus::Vacuous;
  std::optional<Rational> margin;  // min over forms of theta - optimum;
                                   // for contradiction leaves, -(interior slack)
  bool boundary_only = false;      // nonempty closed region with zero interior slack
  bool theta_monotone = false;     // region only tightens and forms are theta-free,
                                   // so a pass here certifies every larger theta
  int branches = 0;
  int feasible_branches = 0;
  int lp_count = 0;
  std::string binding_form;        // branch/form tag attaining the margin
  Point witness;                   // failure witness (truncated to the 24 vars)
};

struct VerificationReport {
  Rational theta;
  bool verified = false;
  std::string binding;             // failing leaf, or the smallest-margin leaf
  std::vector<LeafResult> leaves;  // depth-first order
  std::vector<std::string> hypotheses;
  long lp_solves = 0;
  long millis = 0;

  const LeafResult* find(const std::string& label) const {
    for (const auto& l : leaves)
      if (l.label == label) return &l;
    return nullptr;
  }
};

namespace verify_detail {

struct LeafTask {
  const LeafNode* leaf;
  std::vector<Condition> path;  // inherited split/assume conditions
};

inline void collect_leaves(const Certificate& cert, int id, std::vector<Condition>& path,
                           std::vector<LeafTask>& out, std::vector<std::string>& hyps) {
  const CaseNode& n = cert.nodes.at(id);
  if (n.is_leaf()) {
    out.push_back({&n.leaf(), path});
    return;
  }
  if (std::holds_alternative<SplitNode>(n.node)) {
    const SplitNode& s = n.split();
    path.push_back(s.cond);
    collect_leaves(cert, s.child_true, path, out, hyps);
    path.back() = s.cond.complement(s.strict_false);
    collect_leaves(cert, s.child_false, path, out, hyps);
    path.pop_back();
    return;
  }
  const AssumeNode& a = n.assume();
  std::string h = a.label;
  if (!a.note.empty()) h += ": " + a.note;
  if (std::find(hyps.begin(), hyps.end(), h) == hyps.end()) hyps.push_back(h);
  for (const auto& c : a.constraints) path.push_back(c);
  collect_leaves(cert, a.child, path, out, hyps);
  path.resize(path.size() - a.constraints.size());
}

}  // namespace verify_detail

/**
 * Verifies a single leaf: the region is the baseline plus every inherited
 * split condition, the leaf extras, the auxiliary links and the branch side
 * conditions. Each bound form is maximized exactly; the leaf verifies when
 * every optimum stays at or below theta, and vacuously when the region is
 * empty. Contradiction leaves must be empty, or boundary-only with respect
 * to the strictness metadata.
 */
inline LeafResult verify_leaf(const LeafNode& leaf, const std::vector<Condition>& path,
                              const Polytope& baseline, const Rational& theta) {
  LeafResult res;
  res.label = leaf.label;

  const int naux = static_cast<int>(leaf.aux.size());
  const int nvars = kNumVars + naux;
  auto aux_col = [&](const std::string& name) {
    for (int i = 0; i < naux; ++i)
      if (leaf.aux[i].name == name) return kNumVars + i;
    throw CertificateError("leaf '" + leaf.label + "': undeclared auxiliary '" + name + "'");
  };

  Polytope region = baseline;
  region.nvars = nvars;
  auto add_cond = [&](const Condition& c) {
    AffineForm f = c.lhs;
    if (f.size() < nvars) f.coef.resize(nvars);
    region.add(std::move(f), Relation::LessEq, c.label, c.strict);
  };
  for (const auto& c : path) add_cond(c);
  for (const auto& c : leaf.extra) add_cond(c);
  for (const auto& a : leaf.aux)
    for (const auto& c : a.links) add_cond(c);

  // monotonicity: with theta-free coefficients, nondecreasing row constants
  // and theta-free bound forms, a pass extends to every larger theta;
  // otherwise the optimizer must bisect
  auto form_theta_free = [](const AffineForm& f) {
    for (const auto& c : f.coef)
      if (!c.t.is_zero()) return false;
    return true;
  };
  res.theta_monotone = true;
  for (const auto& row : region.rows) {
    if (!form_theta_free(row.lhs)) res.theta_monotone = false;
    else if (row.rel == Relation::Eq) {
      if (!row.lhs.cst.t.is_zero()) res.theta_monotone = false;
    } else if (row.lhs.cst.t < Rational(0)) {
      res.theta_monotone = false;
    }
  }

  if (leaf.bound.kind == BoundKind::Contradiction) {
    res.branches = 1;
    StrictFeasibility sf = lp_strict_feasible(region, theta);
    res.lp_count += 1;
    if (!sf.feasible) {
      res.status = LeafStatus::Vacuous;
      return res;
    }
    res.feasible_branches = 1;
    if (sf.slack.is_zero()) {
      res.status = LeafStatus::Vacuous;
      res.boundary_only = true;
      res.margin = Rational(0);
      return res;
    }
    res.status = LeafStatus::Failed;
    res.margin = -sf.slack;
    res.witness.assign(sf.witness.begin(), sf.witness.begin() + kNumVars);
    return res;
  }

  auto branches = leaf.bound.expand(aux_col);
  res.branches = static_cast<int>(branches.size());
  bool any_feasible = false;
  bool failed = false;
  for (const auto& br : branches) {
    Polytope sub = region;
    for (const auto& c : br.side) {
      if (!form_theta_free(c.lhs) || c.lhs.cst.t < Rational(0))
        res.theta_monotone = false;
      AffineForm f = c.lhs;
      if (f.size() < nvars) f.coef.resize(nvars);
      sub.add(std::move(f), Relation::LessEq, c.label, c.strict_hint);
    }
    for (const auto& form : br.forms)
      if (!form_theta_free(form) || !form.cst.t.is_zero()) res.theta_monotone = false;
    bool branch_feasible = true;
    for (const auto& form : br.forms) {
      LpOutcome out = lp_maximize(sub, form, theta);
      res.lp_count += 1;
      if (out.status == LpStatus::Infeasible) {
        branch_feasible = false;
        break;
      }
      if (out.status == LpStatus::Unbounded)
        throw CertificateError("leaf '" + leaf.label + "': unbounded bound form" +
                               (br.tag.empty() ? "" : " (" + br.tag + ")"));
      Rational margin = theta - out.value;
      if (!res.margin || margin < *res.margin) {
        res.margin = margin;
        res.binding_form = br.tag;
        if (margin < Rational(0))
          res.witness.assign(out.witness.begin(), out.witness.begin() + kNumVars);
      }
      if (margin < Rational(0)) failed = true;
    }
    any_feasible |= branch_feasible;
    res.feasible_branches += branch_feasible;
  }
  if (!any_feasible) {
    res.status = LeafStatus::Vacuous;
    res.margin.reset();
  } else {
    res.status = failed ? LeafStatus::Failed : LeafStatus::Verified;
  }
  return res;
}

/**
 * Depth-first verification of the whole tree. Leaf verifications are
 * independent; with jobs > 1 they run on a small worker pool and the report
 * is merged in leaf order, so the output is identical for any parallelism.
 */
inline VerificationReport verify_certificate(const Certificate& cert, const Rational& theta,
                                             int jobs = 1) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.theta = theta;

  std::vector<verify_detail::LeafTask> tasks;
  std::vector<Condition> path;
  verify_detail::collect_leaves(cert, cert.root, path, tasks, rep.hypotheses);

  const Polytope baseline = baseline_polytope();
  rep.leaves.resize(tasks.size());
  long solved_before = lp_stats().solves.load();

  if (jobs <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i)
      rep.leaves[i] = verify_leaf(*tasks[i].leaf, tasks[i].path, baseline, theta);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          rep.leaves[i] = verify_leaf(*tasks[i].leaf, tasks[i].path, baseline, theta);
        }
      });
    for (auto& t : pool) t.join();
  }

  rep.lp_solves = lp_stats().solves.load() - solved_before;
  bool ok = true;
  const LeafResult* binding = nullptr;
  for (const auto& l : rep.leaves) {
    if (l.status == LeafStatus::Failed) {
      if (ok) {
        binding = &l;  // first failure supersedes any margin tracking
        ok = false;
      } else if (l.margin && binding && binding->margin && *l.margin < *binding->margin) {
        binding = &l;
      }
    } else if (ok && l.margin &&
               (!binding || !binding->margin || *l.margin < *binding->margin)) {
      binding = &l;
    }
  }
  rep.verified = ok;
  if (binding) rep.binding = binding->label;
  rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  return rep;
}

// ----------------------------------------------------------------- cover

struct CoverWitness {
  std::string combo;
  Rational s1, s2;
  Point point;
};

struct CoverResult {
  bool covered = false;
  std::vector<CoverWitness> witnesses;
  int combos = 0;
};

/**
 * Checks that the given condition-sets exhaust the region: every combination
 * of per-case complements, intersected with the region, must have empty
 * interior with respect to the strictness metadata.
 */
inline CoverResult check_cover(const Polytope& region,
                               const std::vector<std::vector<Condition>>& cases,
                               const Rational& theta) {
  CoverResult res;
  res.covered = true;
  std::vector<size_t> choice(cases.size(), 0);
  for (;;) {
    Polytope sys = region;
    std::string combo;
    for (size_t i = 0; i < cases.size(); ++i) {
      const Condition& c = cases[i][choice[i]];
      Condition neg = c.complement(!c.strict);
      if (!combo.empty()) combo += " & ";
      combo += neg.label;
      sys.add(neg.lhs, Relation::LessEq, neg.label, neg.strict);
    }
    ++res.combos;
    StrictFeasibility sf = lp_strict_feasible(sys, theta);
    if (sf.feasible && sf.slack > Rational(0)) {
      res.covered = false;
      CoverWitness w;
      w.combo = combo;
      w.point = sf.witness;
      w.s1 = derived_form("s1").eval(sf.witness, theta);
      w.s2 = derived_form("s2").eval(sf.witness, theta);
      res.witnesses.push_back(std::move(w));
    }
    // next combination in the product of per-case complement branches
    size_t i = 0;
    while (i < cases.size()) {
      if (++choice[i] < cases[i].size()) break;
      choice[i] = 0;
      ++i;
    }
    if (i == cases.size()) break;
  }
  return res;
}

/// The plane cover of the four final subcases inside
/// { s1, s2 >= 0, s1 + s2 <= 1 - theta, s2 <= k }.
inline std::pair<Polytope, std::vector<std::vector<Condition>>> plane_cover_system() {
  using builder_detail::cond_ge;
  using builder_detail::cond_le;
  using builder_detail::ta;
  const AffineForm s1 = derived_form("s1");
  const AffineForm s2 = derived_form("s2");
  Polytope region;
  {
    AffineForm f = s1 + s2;
    f.add_const(ta(-1, 1, 1, 1));  // s1 + s2 - (1 - theta)
    region.add(std::move(f), Relation::LessEq, "s1 + s2 <= 1 - theta");
  }
  {
    AffineForm f = s2;
    f.add_const(ta(-49, 12, 23, 4));  // s2 - k
    region.add(std::move(f), Relation::LessEq, "s2 <= k");
  }
  AffineForm plane24 = s1 + s1 + s1 + s1 + s2;
  AffineForm plane23 = plane24 + s2 + s2;
  std::vector<std::vector<Condition>> cases;
  cases.push_back({cond_ge(plane23, ta(4, 1, -5, 1), "4 s1 + 3 s2 >= 4 - 5 theta", true)});
  cases.push_back({cond_le(plane24, ta(-24, 1, 37, 1), "4 s1 + s2 <= 37 theta - 24", true)});
  cases.push_back({cond_ge(s2, ta(6, 1, -9, 1), "s2 >= 6 - 9 theta"),
                   cond_le(s2, ta(-4, 3, 7, 3), "s2 <= (7/3) theta - 4/3")});
  cases.push_back({cond_ge(s1 + s1 - s2, ta(2, 1, -3, 1), "2 s1 - s2 >= 2 - 3 theta", true)});
  return {std::move(region), std::move(cases)};
}

// ----------------------------------------------------------------- reports

inline ordered_json report_json(const VerificationReport& rep) {
  ordered_json leaves = ordered_json::array();
  for (const auto& l : rep.leaves) {
    ordered_json j{{"label", l.label}, {"status", leaf_status_name(l.status)}};
    if (l.margin) j["margin"] = l.margin->str();
    if (l.boundary_only) j["boundary_only"] = true;
    j["theta_monotone"] = l.theta_monotone;
    j["branches"] = l.branches;
    j["feasible_branches"] = l.feasible_branches;
    j["lp"] = l.lp_count;
    if (!l.binding_form.empty()) j["binding_form"] = l.binding_form;
    if (!l.witness.empty() && l.status == LeafStatus::Failed) {
      ordered_json w = ordered_json::object();
      for (int v = 0; v < kNumVars; ++v)
        if (!l.witness[v].is_zero()) w[var_names()[v]] = l.witness[v].str();
      j["witness"] = std::move(w);
    }
    leaves.push_back(std::move(j));
  }
  return ordered_json{{"theta", rep.theta.str()},
                      {"global", rep.verified ? "verified" : "failed"},
                      {"binding", rep.binding},
                      {"hypotheses", rep.hypotheses},
                      {"lp_solves", rep.lp_solves},
                      {"millis", rep.millis},
                      {"leaves", std::move(leaves)}};
}

inline std::string report_text(const VerificationReport& rep) {
  std::ostringstream os;
  os << "theta = " << rep.theta.str() << " (" << rep.theta.decimal() << ")\n";
  for (const auto& l : rep.leaves) {
    os << "  " << (l.status == LeafStatus::Failed ? "FAIL " : "ok   ") << l.label;
    if (l.margin) os << "  margin " << l.margin->str() << " (" << l.margin->decimal() << ")";
    if (l.status == LeafStatus::Vacuous) os << "  [vacuous" << (l.boundary_only ? ", boundary" : "") << "]";
    os << "\n";
  }
  for (const auto& h : rep.hypotheses) os << "  hypothesis: " << h << "\n";
  os << (rep.verified ? "VERIFIED" : "FAILED") << ", binding leaf: " << rep.binding
     << ", lp solves: " << rep.lp_solves << ", " << rep.millis << " ms\n";
  return os.str();
}

}  // namespace abcert
