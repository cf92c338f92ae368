#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "abcert/cert_builder.hpp"
#include "abcert/optimize.hpp"
#include "abcert/verify.hpp"

using namespace abcert;

namespace {

const Rational kThetaStar(56, 85);

std::vector<verify_detail::LeafTask> leaf_tasks(const Certificate& cert) {
  std::vector<verify_detail::LeafTask> tasks;
  std::vector<Condition> path;
  std::vector<std::string> hyps;
  verify_detail::collect_leaves(cert, cert.root, path, tasks, hyps);
  return tasks;
}

const verify_detail::LeafTask& task_by_label(
    const std::vector<verify_detail::LeafTask>& tasks, const std::string& label) {
  for (const auto& t : tasks)
    if (t.leaf->label == label) return t;
  throw std::logic_error("no leaf labeled " + label);
}

// walks the tree at a concrete point, true branch on lhs <= 0
std::string route_point(const Certificate& cert, const Point& x, const Rational& theta) {
  int id = cert.root;
  for (;;) {
    const CaseNode& n = cert.nodes.at(id);
    if (n.is_leaf()) return n.leaf().label;
    if (std::holds_alternative<SplitNode>(n.node)) {
      const SplitNode& s = n.split();
      id = s.cond.lhs.eval(x, theta) <= Rational(0) ? s.child_true : s.child_false;
    } else {
      id = n.assume().child;
    }
  }
}

bool subtree_contains_prefix(const Certificate& cert, int id, const std::string& prefix) {
  const CaseNode& n = cert.nodes.at(id);
  if (n.is_leaf()) return n.leaf().label.rfind(prefix, 0) == 0;
  if (std::holds_alternative<SplitNode>(n.node))
    return subtree_contains_prefix(cert, n.split().child_true, prefix) ||
           subtree_contains_prefix(cert, n.split().child_false, prefix);
  return subtree_contains_prefix(cert, n.assume().child, prefix);
}

int find_split(const Certificate& cert, const std::string& label) {
  for (int i = 0; i < static_cast<int>(cert.nodes.size()); ++i)
    if (std::holds_alternative<SplitNode>(cert.nodes[i].node) &&
        cert.nodes[i].split().label == label)
      return i;
  throw std::logic_error("no split labeled " + label);
}

}  // namespace

TEST_CASE("builder is deterministic and round-trips byte-stably") {
  Certificate a = build_reference_certificate();
  Certificate b = build_reference_certificate();
  std::string sa = serialize_certificate(a);
  CHECK(sa == serialize_certificate(b));
  Certificate parsed = parse_certificate_text(sa);
  CHECK(serialize_certificate(parsed) == sa);
  CHECK(parsed.leaf_count() == a.leaf_count());
  CHECK(a.leaf_count() == 69);
}

TEST_CASE("parse rejects malformed certificates with a node path") {
  CHECK_THROWS_AS(parse_certificate_text(""), CertificateError);
  CHECK_THROWS_AS(parse_certificate_text("{ not json"), CertificateError);

  std::string unknown_kind = R"({
    "version": 1,
    "tree": { "type": "leaf", "label": "x", "extra": [], "aux": [],
              "bound": { "kind": "Fourier7" } } })";
  CHECK_THROWS_WITH_AS(parse_certificate_text(unknown_kind),
                       doctest::Contains("unknown bound kind"), CertificateError);

  std::string unknown_var = R"({
    "version": 1,
    "tree": { "type": "leaf", "label": "x",
              "extra": [ { "label": "bad", "strict": false,
                           "lhs": { "coef": { "z9": {"c": "1/1", "t": "0/1"} },
                                    "const": {"c": "0/1", "t": "0/1"} } } ],
              "aux": [], "bound": { "kind": "contradiction" } } })";
  try {
    parse_certificate_text(unknown_var);
    FAIL("expected a parse error");
  } catch (const CertificateError& e) {
    CHECK(std::string(e.what()).find("unknown variable") != std::string::npos);
    CHECK(std::string(e.what()).find("tree.extra[0]") != std::string::npos);
  }

  std::string dangling = R"({
    "version": 1,
    "tree": { "type": "split", "label": "s",
              "cond": { "label": "c", "strict": false, "lhs": { "$ref": "nope" } },
              "true":  { "type": "leaf", "label": "l", "extra": [], "aux": [],
                         "bound": { "kind": "contradiction" } },
              "false": { "type": "leaf", "label": "r", "extra": [], "aux": [],
                         "bound": { "kind": "contradiction" } } } })";
  CHECK_THROWS_WITH_AS(parse_certificate_text(dangling),
                       doctest::Contains("dangling form reference"), CertificateError);

  std::string bad_aux = R"({
    "version": 1,
    "tree": { "type": "leaf", "label": "x", "extra": [], "aux": [],
              "bound": { "kind": "determinant", "x": "a", "p": 3,
                         "y": { "aux": "M" }, "relax": 2 } } })";
  CHECK_THROWS_WITH_AS(parse_certificate_text(bad_aux),
                       doctest::Contains("undeclared auxiliary"), CertificateError);
}

TEST_CASE("named-form references resolve against the table") {
  std::string with_ref = R"({
    "version": 1,
    "forms": { "gap": { "coef": { "a1": {"c": "-1/1", "t": "0/1"} },
                        "const": {"c": "1/2", "t": "0/1"} } },
    "tree": { "type": "split", "label": "s",
              "cond": { "label": "a1 >= 1/2", "strict": false, "lhs": { "$ref": "gap" } },
              "true":  { "type": "leaf", "label": "l", "extra": [], "aux": [],
                         "bound": { "kind": "thue", "pair": "ab", "p": 2 } },
              "false": { "type": "leaf", "label": "r", "extra": [], "aux": [],
                         "bound": { "kind": "contradiction" } } } })";
  Certificate cert = parse_certificate_text(with_ref);
  const SplitNode& s = cert.nodes[find_split(cert, "s")].split();
  CHECK(s.cond.lhs.coeff(0) == ThetaAffine(Rational(-1)));
  CHECK(s.cond.lhs.cst == ThetaAffine(Rational(1, 2)));
}

TEST_CASE("routing: the equal-thirds point reaches the index-3 Thue split") {
  Certificate cert = build_reference_certificate();
  Point x(kNumVars, Rational(0));
  x[var_index(Letter::A, 3)] = Rational(1, 3);
  x[var_index(Letter::B, 3)] = Rational(1, 3);
  x[var_index(Letter::C, 3)] = Rational(1, 3);
  CHECK(route_point(cert, x, kThetaStar) == "thue-ab3");
  auto br = thue_instance(3, {Letter::A, Letter::B}).expand(nullptr);
  CHECK(br[0].forms[0].eval(x, kThetaStar) == Rational(1, 3));
}

TEST_CASE("the a3-large subtree sits only under the small-s2 case") {
  Certificate cert = build_reference_certificate();
  const SplitNode& s = cert.nodes[find_split(cert, "case-split")].split();
  CHECK_FALSE(subtree_contains_prefix(cert, s.child_true, "case2.1-"));
  CHECK(subtree_contains_prefix(cert, s.child_false, "case2.1-"));
  const SplitNode& t = cert.nodes[find_split(cert, "case2-a3-large")].split();
  CHECK(subtree_contains_prefix(cert, t.child_true, "case2.1-"));
  CHECK_FALSE(subtree_contains_prefix(cert, t.child_false, "case2.1-"));
}

TEST_CASE("interval splits carry both endpoints of the tau dichotomy") {
  Certificate cert = build_reference_certificate();
  const AffineForm s1 = derived_form("s1"), s2 = derived_form("s2");
  AffineForm bc3 = form_var(var_index(Letter::B, 3)) + form_var(var_index(Letter::C, 3));

  // left end: tau >= 1 - theta - s1 - s2, stored as its complement side
  const SplitNode& lo = cert.nodes[find_split(cert, "case2.6-bc-split")].split();
  AffineForm expect_lo = bc3 + s1 + s2;
  expect_lo.add_const(ThetaAffine(Rational(-1), Rational(1)));
  CHECK(lo.cond.lhs == expect_lo);

  // right ends: tau <= (theta - s2)/2 and tau <= theta/2
  const SplitNode& mid = cert.nodes[find_split(cert, "case2.6.2-interval-mid")].split();
  AffineForm half_s2 = s2;
  half_s2 *= Rational(1, 2);
  AffineForm expect_mid = bc3 + half_s2;
  expect_mid.add_const(ThetaAffine(Rational(0), Rational(-1, 2)));
  CHECK(mid.cond.lhs == expect_mid);

  const SplitNode& hi = cert.nodes[find_split(cert, "case2.6.2-interval-hi")].split();
  AffineForm expect_hi = bc3;
  expect_hi.add_const(ThetaAffine(Rational(0), Rational(-1, 2)));
  CHECK(hi.cond.lhs == expect_hi);
}

TEST_CASE("large s1+s2 leaf: the second form's optimum is exactly (3/2)(1 - theta)") {
  Certificate cert = build_reference_certificate();
  auto tasks = leaf_tasks(cert);
  const auto& task = task_by_label(tasks, "s1s2-large-geometry");

  Polytope region = baseline_polytope();
  for (const auto& c : task.path)
    region.add(c.lhs, Relation::LessEq, c.label, c.strict);

  auto s2max = lp_maximize(region, derived_form("s2"), kThetaStar);
  REQUIRE(s2max.status == LpStatus::Optimal);
  CHECK(s2max.value == Rational(87, 170));  // (3/2)(29/85)

  Point w(kNumVars, Rational(0));
  w[var_index(Letter::A, 1)] = Rational(27, 170);
  w[var_index(Letter::B, 1)] = Rational(27, 170);
  w[var_index(Letter::A, 2)] = Rational(29, 170);
  w[var_index(Letter::B, 2)] = Rational(29, 170);
  w[var_index(Letter::C, 2)] = Rational(29, 170);
  w[var_index(Letter::C, 3)] = Rational(27, 170);
  w[tail_weight_index(Letter::C)] = Rational(31, 170);
  REQUIRE(satisfies(instantiate(region, kThetaStar), w));
  CHECK(derived_form("s2").eval(w, kThetaStar) == Rational(87, 170));

  auto res = verify_leaf(*task.leaf, task.path, baseline_polytope(), kThetaStar);
  CHECK(res.status == LeafStatus::Verified);
  REQUIRE(res.margin.has_value());
  CHECK(*res.margin == Rational(0));
}

TEST_CASE("fourier leaf of case 1.2: pinned optimum below the 0.283 mark") {
  Certificate cert = build_reference_certificate();
  auto tasks = leaf_tasks(cert);
  const auto& task = task_by_label(tasks, "case1.2-fourier");
  auto res = verify_leaf(*task.leaf, task.path, baseline_polytope(), kThetaStar);
  REQUIRE(res.status == LeafStatus::Verified);
  REQUIRE(res.margin.has_value());
  // frozen from the pre-build solver run; every solve carries its own
  // arithmetic duality certificate
  CHECK(*res.margin == Rational(43, 1700));
  Rational opt = kThetaStar - *res.margin;
  CHECK(opt == Rational(1077, 1700));
  CHECK(opt * Rational(2) - Rational(1) < Rational(283, 1000));
}

TEST_CASE("every leaf at theta = 1 is vacuous, so the tree verifies") {
  Certificate cert = build_reference_certificate();
  auto rep = verify_certificate(cert, Rational(1), 2);
  CHECK(rep.verified);
  for (const auto& l : rep.leaves) CHECK(l.status == LeafStatus::Vacuous);
}

TEST_CASE("verification around the critical exponent") {
  Certificate cert = build_reference_certificate();

  auto above = verify_certificate(cert, kThetaStar + Rational(1, 1000), 2);
  CHECK(above.verified);
  for (const auto& l : above.leaves) {
    if (l.margin) CHECK(*l.margin >= Rational(0));
    CHECK(l.status != LeafStatus::Failed);
  }

  auto prior = verify_certificate(cert, Rational(33, 50), 2);
  CHECK(prior.verified);

  auto below = verify_certificate(cert, kThetaStar - Rational(1, 1000), 2);
  CHECK_FALSE(below.verified);
  CHECK(below.binding.rfind("case2.6.2-contradiction", 0) == 0);

  REQUIRE(above.hypotheses.size() == 1);
  CHECK(above.hypotheses[0].find("wlog-order") != std::string::npos);
}

TEST_CASE("round trip: parsed certificate verifies identically to the built tree") {
  Certificate built = build_reference_certificate();
  Certificate parsed = parse_certificate_text(serialize_certificate(built));
  Rational theta(1);
  auto r1 = verify_certificate(built, theta, 1);
  auto r2 = verify_certificate(parsed, theta, 2);
  auto strip = [](VerificationReport r) {
    r.millis = 0;
    return report_json(r).dump();
  };
  CHECK(strip(r1) == strip(r2));
}

TEST_CASE("plane cover: covered at 56/85, two uncovered combos at 13/20") {
  auto [region, cases] = plane_cover_system();

  auto hi = check_cover(region, cases, kThetaStar);
  CHECK(hi.covered);
  CHECK(hi.combos == 2);

  auto lo = check_cover(region, cases, Rational(13, 20));
  CHECK_FALSE(lo.covered);
  CHECK(lo.witnesses.size() == 2);

  Polytope triv;
  AffineForm f = derived_form("s1");
  f.add_const(ThetaAffine(Rational(-1)));
  triv.add(f, Relation::LessEq, "s1 <= 1");
  std::vector<std::vector<Condition>> one_case;
  one_case.push_back({Condition(f, "s1 <= 1", false)});
  auto cov = check_cover(triv, one_case, kThetaStar);
  CHECK(cov.covered);
  CHECK(cov.combos == 1);
}

TEST_CASE("unbounded bound forms are reported as a certificate error") {
  // a geometry form over a region that leaves a weighted tail free grows
  // without bound once the baseline weight rows are absent
  LeafNode g;
  g.label = "runaway";
  std::array<OutSet, 3> out{};
  out[0].idx[3] = true;  // everything else stays in the weighted part
  g.bound = geometry_v2_instance(out);
  std::vector<Condition> path;
  Polytope no_baseline;
  CHECK_THROWS_AS(verify_leaf(g, path, no_baseline, Rational(1, 2)), CertificateError);
}
