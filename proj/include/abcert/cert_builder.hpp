#pragma once

#include <array>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "abcert/cert_model.hpp"

namespace abcert {

namespace builder_detail {

inline ThetaAffine ta(long cn, long cd, long tn, long td) {
  return ThetaAffine(Rational(cn, cd), Rational(tn, td));
}

// f >= bound  as  bound - f <= 0
inline Condition cond_ge(const AffineForm& f, const ThetaAffine& bound,
                         std::string label, bool strict = false) {
  AffineForm lhs = -f;
  lhs.add_const(bound);
  return Condition(std::move(lhs), std::move(label), strict);
}

// f <= bound  as  f - bound <= 0
inline Condition cond_le(const AffineForm& f, const ThetaAffine& bound,
                         std::string label, bool strict = false) {
  AffineForm lhs = f;
  lhs.add_const(-bound);
  return Condition(std::move(lhs), std::move(label), strict);
}

// f <= g  as  f - g <= 0
inline Condition cond_le_form(const AffineForm& f, const AffineForm& g,
                              std::string label, bool strict = false) {
  return Condition(f - g, std::move(label), strict);
}

}  // namespace builder_detail

/**
 * Emits the full case analysis as a deterministic decision tree:
 *
 *   - a chain of Thue splits giving the pairwise block bounds at indices
 *     2..6 and the {2,4} aggregates, each with its Thue leaf on the large
 *     branch;
 *   - the large s1+s2 geometry leaf, the declared letter-order hypothesis at
 *     index 3, and the main split of s2 against k = 49/12 - (23/4) theta;
 *   - case 1: the interval dichotomy for b3+c3 with a geometry leaf inside
 *     the interval and contradiction endpoints, then the Fourier leaf with
 *     excluded index 2;
 *   - case 2: the preliminary b3 interval, the a3-large subtree (determinant
 *     dichotomy around the auxiliary M plus the two max-branches of the
 *     second geometry form, orientation-split on min(b4, c4)), the b3+c3
 *     reduction subtree, two plane reductions, the s2 band, and the final
 *     subtree whose Fourier leaves exclude index 3 and whose contradiction
 *     leaves pin s2 >= (49/4) theta - 8 against s2 <= 6 - 9 theta, the
 *     crossing that determines the critical exponent 56/85.
 */
inline Certificate build_reference_certificate() {
  using namespace builder_detail;
  Certificate cert;

  for (const char* n : {"s1", "s2", "s3", "s4", "s5", "s6", "delta_a", "delta_b",
                        "delta_c", "delta_ab", "delta_ac", "delta_bc", "delta_s", "k"})
    cert.forms[n] = derived_form(n);

  const AffineForm s1 = derived_form("s1");
  const AffineForm s2 = derived_form("s2");
  const ThetaAffine one_minus_theta = ta(1, 1, -1, 1);
  const ThetaAffine two_theta_minus_one = ta(-1, 1, 2, 1);
  const ThetaAffine half_theta = ta(0, 1, 1, 2);
  const ThetaAffine k_const = ta(49, 12, -23, 4);
  const ThetaAffine m_thresh = ta(3, 1, -9, 2);      // 3 - (9/2) theta
  const ThetaAffine t2_thresh = ta(-4, 1, 49, 8);    // (49/8) theta - 4

  auto av = [](Letter l, int i) { return form_var(var_index(l, i)); };
  const AffineForm a2 = av(Letter::A, 2), b2 = av(Letter::B, 2), c2 = av(Letter::C, 2);
  const AffineForm a3 = av(Letter::A, 3), b3 = av(Letter::B, 3), c3 = av(Letter::C, 3);
  const AffineForm bc3 = b3 + c3;

  // tau <= (theta - s2)/2  as  tau + s2/2 - theta/2 <= 0
  auto cond_le_halfgap = [&](const AffineForm& tau, std::string label) {
    AffineForm lhs = tau;
    AffineForm half_s2 = s2;
    half_s2 *= Rational(1, 2);
    lhs += half_s2;
    lhs.add_const(-half_theta);
    return Condition(std::move(lhs), std::move(label));
  };
  // tau >= 1 - theta - s1 - s2 (the interval left end)
  auto cond_ge_left = [&](const AffineForm& tau, std::string label, bool strict) {
    AffineForm lhs = -tau - s1 - s2;
    lhs.add_const(one_minus_theta);
    return Condition(std::move(lhs), std::move(label), strict);
  };
  // tau <= 1 - theta - s1 - s2
  auto cond_le_left = [&](const AffineForm& tau, std::string label, bool strict) {
    AffineForm lhs = tau + s1 + s2;
    lhs.add_const(-one_minus_theta);
    return Condition(std::move(lhs), std::move(label), strict);
  };

  auto geometry_s1s2 = [&](std::initializer_list<Letter> tau3) {
    SelectMap sel = select_none();
    select_full(sel, 1);
    select_full(sel, 2);
    for (Letter l : tau3) select_letter(sel, 3, l);
    return geometry_v1_instance(sel);
  };
  auto geometry_s1_tau3 = [&](std::initializer_list<Letter> tau3) {
    SelectMap sel = select_none();
    select_full(sel, 1);
    for (Letter l : tau3) select_letter(sel, 3, l);
    return geometry_v1_instance(sel);
  };

  auto leaf = [&](std::string label, BoundInstance bound, std::string note = "",
                  std::vector<Condition> extra = {}, std::vector<AuxDecl> aux = {}) {
    LeafNode l;
    l.label = std::move(label);
    l.bound = std::move(bound);
    l.note = std::move(note);
    l.extra = std::move(extra);
    l.aux = std::move(aux);
    return cert.add_leaf(std::move(l));
  };
  auto split = [&](std::string label, Condition cond, int t, int f,
                   bool strict_false = false, std::string note = "") {
    SplitNode s;
    s.label = std::move(label);
    s.cond = std::move(cond);
    s.child_true = t;
    s.child_false = f;
    s.strict_false = strict_false;
    s.note = std::move(note);
    return cert.add_split(std::move(s));
  };

  // ---- final subtree: pair thresholds on the index-2 blocks.
  // Wherever two of a2, b2, c2 reach (49/8) theta - 4, the ceiling
  // s2 <= 6 - 9 theta is exceeded once theta passes 56/85.
  int x_bc = leaf("case2.6.2-contradiction-bc", contradiction_instance(),
                  "two index-2 blocks at the threshold force s2 >= (49/4) theta - 8");
  int x_ac = leaf("case2.6.2-contradiction-ac", contradiction_instance(),
                  "two index-2 blocks at the threshold force s2 >= (49/4) theta - 8");
  int x_ab = leaf("case2.6.2-contradiction-ab", contradiction_instance(),
                  "two index-2 blocks at the threshold force s2 >= (49/4) theta - 8");
  int f_ab = leaf("case2.6.2-fourier-ab", fourier_instance({Letter::A, Letter::B}, 3));
  int f_ac = leaf("case2.6.2-fourier-ac", fourier_instance({Letter::A, Letter::C}, 3));
  int f_bc = leaf("case2.6.2-fourier-bc", fourier_instance({Letter::B, Letter::C}, 3));

  int n_c2_with_a = split("case2.6.2-c2-with-a",
                          cond_le(c2, t2_thresh, "c2 <= (49/8)theta - 4", true),
                          f_ac, x_bc);
  int n_b2 = split("case2.6.2-b2", cond_le(b2, t2_thresh, "b2 <= (49/8)theta - 4", true),
                   f_ab, n_c2_with_a);
  int n_c2_with_b = split("case2.6.2-c2-with-b",
                          cond_le(c2, t2_thresh, "c2 <= (49/8)theta - 4", true),
                          f_bc, x_ac);
  int n_b2_alt = split("case2.6.2-b2-alt",
                       cond_le(b2, t2_thresh, "b2 <= (49/8)theta - 4", true),
                       n_c2_with_b, x_ab);
  int pair_subtree = split("case2.6.2-a2",
                           cond_le(a2, t2_thresh, "a2 <= (49/8)theta - 4", true),
                           n_b2, n_b2_alt);

  // ---- subcase 2.6.2: interval dichotomy for b3+c3 over the merged interval
  int g262_hi = leaf("case2.6.2-geometry-hi", geometry_s1_tau3({Letter::B, Letter::C}));
  int g262_lo = leaf("case2.6.2-geometry-lo", geometry_s1s2({Letter::B, Letter::C}));
  int n262_hi = split("case2.6.2-interval-hi",
                      cond_le(bc3, half_theta, "b3+c3 <= theta/2"), g262_hi, pair_subtree);
  int sub262 = split("case2.6.2-interval-mid",
                     cond_le_halfgap(bc3, "b3+c3 <= (theta - s2)/2"), g262_lo, n262_hi);

  int x261 = leaf("case2.6.1-contradiction", contradiction_instance(),
                  "a small index-3 total forces s1 past its plane bound");
  int sub26_low = split("case2.6-bc-split",
                        cond_le_left(bc3, "b3+c3 <= 1 - theta - s1 - s2", true),
                        x261, sub262);

  // ---- subcase 2.6: interval dichotomy for a3 over the merged interval
  int g26_hi = leaf("case2.6-a3-geometry-hi", geometry_s1_tau3({Letter::A}));
  int g26_lo = leaf("case2.6-a3-geometry-lo", geometry_s1s2({Letter::A}));
  int n26_mid = split("case2.6-a3-interval-mid",
                      cond_le_halfgap(a3, "a3 <= (theta - s2)/2"), g26_lo, g26_hi);
  int sub26 = split("case2.6-a3-interval-lo",
                    cond_ge_left(a3, "a3 >= 1 - theta - s1 - s2", true),
                    n26_mid, sub26_low);

  // ---- subcase 2.5: a3 interval reduction inside the s2 band
  int g25 = leaf("case2.5-interval-geometry", geometry_s1s2({Letter::A}));
  int x25 = leaf("case2.5-reduction-contradiction", contradiction_instance(),
                 "a large a3 forces b3+c3 under the subcase-2.2 threshold");
  int sub25 = split("case2.5-interval-hi",
                    cond_le_halfgap(a3, "a3 <= (theta - s2)/2"), g25, x25);

  // ---- subcase 2.2: b3+c3 interval, then the a3 interval
  int g22a = leaf("case2.2-a3-geometry", geometry_s1_tau3({Letter::A}));
  int x22 = leaf("case2.2-a3-contradiction", contradiction_instance(),
                 "a3 >= theta/2 conflicts with a3 <= 2 theta - 1 below 2/3");
  int n22a = split("case2.2-a3-hi", cond_le(a3, half_theta, "a3 <= theta/2"), g22a, x22);
  int g22 = leaf("case2.2-interval-geometry", geometry_s1s2({Letter::B, Letter::C}));
  int sub22 = split("case2.2-interval-lo",
                    cond_ge_left(bc3, "b3+c3 >= 1 - theta - s1 - s2", true), g22, n22a);

  // ---- subcase 2.1: determinant dichotomy around M, then the second
  //      geometry form with min(b4, c4) resolved by an orientation split
  auto nu_subtree = [&](bool b4_out, const char* suffix) {
    std::array<OutSet, 3> out{};
    out[0].idx[3] = true;
    out[1].idx[3] = out[1].idx[5] = out[1].idx[6] = true;
    out[1].tail = true;
    out[2].idx[5] = out[2].idx[6] = true;
    out[2].tail = true;
    (b4_out ? out[1] : out[2]).idx[4] = true;  // the min side joins the plain sum
    BoundInstance inst = geometry_v2_instance(out);
    auto branch = inst.expand([](const std::string&) -> int {
      throw std::logic_error("geometry expects no auxiliaries");
    });
    AffineForm lin_minus_one = branch[0].forms[1] - branch[0].forms[0];
    int nu1 = leaf(std::string("case2.1-nu1-min") + suffix, inst);
    int nu2 = leaf(std::string("case2.1-nu2-min") + suffix, inst);
    return split(std::string("case2.1-nusplit-min") + suffix,
                 Condition(lin_minus_one, "retained weight <= 1"), nu1, nu2);
  };
  int nu_b4 = nu_subtree(true, "b4");
  int nu_c4 = nu_subtree(false, "c4");
  int m_small = split("case2.1-min4",
                      cond_le_form(av(Letter::B, 4), av(Letter::C, 4), "b4 <= c4"),
                      nu_b4, nu_c4);

  int sub21 = m_small;
  const std::array<std::pair<Letter, int>, 6> m_vars{
      std::pair{Letter::B, 4}, {Letter::C, 4}, {Letter::B, 5},
      {Letter::C, 5},          {Letter::B, 6}, {Letter::C, 6}};
  for (auto it = m_vars.rbegin(); it != m_vars.rend(); ++it) {
    auto [l, i] = *it;
    std::string vn = std::string(1, letter_name(l)) + std::to_string(i);
    AuxDecl aux;
    aux.name = "M";
    aux.links.push_back(cond_ge(form_var(kNumVars), m_thresh, "M >= 3 - (9/2)theta"));
    int det = leaf("case2.1-determinant-" + vn,
                   determinant_aux_instance(Letter::A, 3, "M"),
                   "index-3 block against the dominant late block", {}, {aux});
    sub21 = split("case2.1-M-" + vn,
                  cond_ge(av(l, i), m_thresh,
                          vn + " >= 3 - (9/2)theta", true),
                  det, sub21);
  }

  // ---- case 2 spine ----
  int x26band = leaf("case2.6-band-contradiction", contradiction_instance(),
                     "the plane reductions cap s2 by 14 - 21 theta");
  int cover_hi = leaf("cover-gap-upper", contradiction_instance(),
                      "complement of the four plane subcases, upper branch");
  int cover_lo = leaf("cover-gap-lower", contradiction_instance(),
                      "complement of the four plane subcases, lower branch");

  AffineForm two_s1_minus_s2 = s1 + s1 - s2;
  Condition sub26_cond = cond_ge(two_s1_minus_s2, ta(2, 1, -3, 1),
                                 "2 s1 - s2 >= 2 - 3 theta", true);
  int n26_hi_branch = split("case2.6-header-upper", sub26_cond, x26band, cover_hi);
  int n26_lo_branch = split("case2.6-header", sub26_cond, sub26, cover_lo);

  int band_hi = split("case2.5-band-hi",
                      cond_le(s2, ta(-4, 3, 7, 3), "s2 <= (7/3)theta - 4/3"),
                      sub25, n26_hi_branch);
  int band_lo = split("case2.5-band-lo", cond_ge(s2, ta(6, 1, -9, 1), "s2 >= 6 - 9 theta"),
                      band_hi, n26_lo_branch);

  AffineForm plane24 = s1 + s1 + s1 + s1 + s2;  // 4 s1 + s2
  int x24 = leaf("case2.4-reduction-contradiction", contradiction_instance(),
                 "small 4 s1 + s2 forces b3+c3 under the subcase-2.2 threshold");
  int n24 = split("case2.4-header",
                  cond_le(plane24, ta(-24, 1, 37, 1), "4 s1 + s2 <= 37 theta - 24", true),
                  x24, band_lo);

  AffineForm plane23 = plane24 + s2 + s2;  // 4 s1 + 3 s2
  int x23 = leaf("case2.3-reduction-contradiction", contradiction_instance(),
                 "large 4 s1 + 3 s2 forces b3+c3 under the subcase-2.2 threshold");
  int n23 = split("case2.3-header",
                  cond_ge(plane23, ta(4, 1, -5, 1), "4 s1 + 3 s2 >= 4 - 5 theta", true),
                  x23, n24);

  int n22 = split("case2.2-header", cond_le_halfgap(bc3, "b3+c3 <= (theta - s2)/2"),
                  sub22, n23, false,
                  "source header is strict; conditions are encoded closed throughout");
  // mark the 2.2 header condition strict in the metadata
  {
    SplitNode& s = std::get<SplitNode>(cert.nodes[n22].node);
    s.cond.strict = true;
  }

  int n21 = split("case2-a3-large", cond_ge(a3, two_theta_minus_one, "a3 >= 2 theta - 1"),
                  sub21, n22, /*strict_false=*/true);

  int g2pre = leaf("case2-pre-geometry", geometry_s1s2({Letter::B}));
  int x2pre = leaf("case2-pre-contradiction", contradiction_instance(),
                   "b3 above the interval conflicts with the pairwise cap at index 3");
  int n2pre_hi = split("case2-b3-interval-hi",
                       cond_le_halfgap(b3, "b3 <= (theta - s2)/2"), g2pre, x2pre);
  int case2 = split("case2-b3-interval-lo", cond_ge_left(b3, "b3 >= 1 - theta - s1 - s2", true),
                    n2pre_hi, n21);

  // ---- case 1 ----
  int g11 = leaf("case1.1-interval-geometry", geometry_s1s2({Letter::B, Letter::C}));
  int x11hi = leaf("case1.1-upper-contradiction", contradiction_instance(),
                   "the case-1 floor on s2 keeps b3+c3 under (theta - s2)/2");
  int n11hi = split("case1.1-interval-hi", cond_le_halfgap(bc3, "b3+c3 <= (theta - s2)/2"),
                    g11, x11hi);
  int x11end = leaf("case1.1-residual-contradiction", contradiction_instance(),
                    "index-3 mass below the interval exhausts the letter budgets");
  int sub11 = split("case1.1-interval-lo",
                    cond_ge_left(bc3, "b3+c3 >= 1 - theta - s1 - s2", true), n11hi, x11end);

  int g12 = leaf("case1.2-interval-geometry", geometry_s1s2({Letter::B}));
  int f12 = leaf("case1.2-fourier", fourier_instance({Letter::A, Letter::B}, 2));
  // late-block interval dichotomies: each of a4..b6 is either below the
  // interval (kept for the Fourier region), inside it (geometry leaf), or
  // above it, where the Fourier bound is checked with the block floor
  int sub12_chain = f12;
  const std::array<std::pair<Letter, int>, 6> late_blocks{
      std::pair{Letter::A, 4}, {Letter::B, 4}, {Letter::A, 5},
      {Letter::B, 5},          {Letter::A, 6}, {Letter::B, 6}};
  for (auto it = late_blocks.rbegin(); it != late_blocks.rend(); ++it) {
    auto [l, i] = *it;
    std::string vn = std::string(1, letter_name(l)) + std::to_string(i);
    AffineForm v = av(l, i);
    SelectMap sel = select_none();
    select_full(sel, 1);
    select_full(sel, 2);
    select_letter(sel, i, l);
    int gin = leaf("case1.2-block-geometry-" + vn, geometry_v1_instance(sel));
    int fhi = leaf("case1.2-fourier-hi-" + vn,
                   fourier_instance({Letter::A, Letter::B}, 2));
    // v <= (theta - s2)/(i-1)  as  (i-1) v + s2 - theta <= 0
    AffineForm scaled = v;
    scaled *= Rational(i - 1);
    scaled += s2;
    scaled.add_const(ThetaAffine(Rational(0), Rational(-1)));
    int upper = split("case1.2-block-hi-" + vn,
                      Condition(std::move(scaled),
                                vn + " <= (theta - s2)/" + std::to_string(i - 1)),
                      gin, fhi);
    sub12_chain = split("case1.2-block-lo-" + vn,
                        cond_ge_left(v, vn + " >= 1 - theta - s1 - s2", true),
                        upper, sub12_chain);
  }
  int sub12 = split("case1.2-interval-hi", cond_le_halfgap(b3, "b3 <= (theta - s2)/2"),
                    g12, sub12_chain);

  int case1 = split("case1-b3", cond_le_left(b3, "b3 <= 1 - theta - s1 - s2", false),
                    sub11, sub12, /*strict_false=*/true);

  // ---- preamble: Thue chain, the large s1+s2 leaf, the order hypothesis ----
  int case_split = split("case-split", cond_ge(s2, k_const, "s2 >= k"), case1, case2,
                         /*strict_false=*/true);

  AssumeNode wlog;
  wlog.label = "wlog-order";
  wlog.constraints.push_back(cond_le_form(b3, a3, "a3 >= b3"));
  wlog.constraints.push_back(cond_le_form(c3, b3, "b3 >= c3"));
  wlog.note = "declared hypothesis: letters relabeled so the index-3 blocks are ordered";
  wlog.child = case_split;
  int wlog_id = cert.add_assume(std::move(wlog));

  int g28 = leaf("s1s2-large-geometry", geometry_s1s2({}));
  int spine = split("s1s2-split", cond_ge(s1 + s2, one_minus_theta,
                                          "s1 + s2 >= 1 - theta", true),
                    g28, wlog_id);

  const std::array<LetterPair, 3> pairs{LetterPair{Letter::A, Letter::B},
                                        {Letter::A, Letter::C},
                                        {Letter::B, Letter::C}};
  for (auto pit = pairs.rbegin(); pit != pairs.rend(); ++pit) {
    AffineForm agg = av(pit->x, 2) + av(pit->y, 2) + av(pit->x, 4) + av(pit->y, 4);
    int tl = leaf("thue-" + pit->name() + "24", thue_instance(2, *pit));
    spine = split("thue-split-" + pit->name() + "24",
                  cond_ge(agg, one_minus_theta,
                          pit->name() + " blocks at 2 and 4 reach 1 - theta"),
                  tl, spine, /*strict_false=*/true);
  }
  for (int i = kTruncation; i >= 2; --i) {
    for (auto pit = pairs.rbegin(); pit != pairs.rend(); ++pit) {
      AffineForm f = av(pit->x, i) + av(pit->y, i);
      int tl = leaf("thue-" + pit->name() + std::to_string(i), thue_instance(i, *pit));
      spine = split("thue-split-" + pit->name() + std::to_string(i),
                    cond_ge(f, one_minus_theta,
                            pit->name() + std::to_string(i) + " reaches 1 - theta"),
                    tl, spine, /*strict_false=*/true);
    }
  }

  cert.root = spine;
  return cert;
}

}  // namespace abcert
