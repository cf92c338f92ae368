#pragma once

#include <json.hpp>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "abcert/bounds.hpp"
#include "abcert/linear.hpp"

namespace abcert {

using ordered_json = nlohmann::ordered_json;

struct CertificateError : std::runtime_error {
  explicit CertificateError(const std::string& what) : std::runtime_error(what) {}
};

/// One linear condition "lhs <= 0" over the variable space (possibly extended
/// by the owning leaf's auxiliaries). `strict` is source metadata only.
struct Condition {
  AffineForm lhs;
  bool strict = false;
  std::string label;

  Condition() = default;
  Condition(AffineForm f, std::string lab, bool s = false)
      : lhs(std::move(f)), strict(s), label(std::move(lab)) {}

  Condition complement(bool strict_complement) const {
    Condition c;
    c.lhs = -lhs;
    c.strict = strict_complement;
    c.label = "not(" + label + ")";
    return c;
  }
};

struct AuxDecl {
  std::string name;
  std::vector<Condition> links;  // linking conditions over the extended space
};

struct LeafNode {
  std::string label;
  std::vector<Condition> extra;
  std::vector<AuxDecl> aux;
  BoundInstance bound;
  std::string note;
};

struct SplitNode {
  std::string label;
  Condition cond;            // holds on the true branch
  bool strict_false = false; // metadata strictness of the complement side
  int child_true = -1;
  int child_false = -1;
  std::string note;
};

/// Injects constraints without splitting; verification proceeds under them
/// and the report surfaces the node as a declared hypothesis.
struct AssumeNode {
  std::string label;
  std::vector<Condition> constraints;
  int child = -1;
  std::string note;
};

struct CaseNode {
  std::variant<SplitNode, AssumeNode, LeafNode> node;

  bool is_leaf() const { return std::holds_alternative<LeafNode>(node); }
  const LeafNode& leaf() const { return std::get<LeafNode>(node); }
  const SplitNode& split() const { return std::get<SplitNode>(node); }
  const AssumeNode& assume() const { return std::get<AssumeNode>(node); }
};

/// Machine-readable proof tree over the exponent polytope.
struct Certificate {
  int version = 1;
  std::vector<CaseNode> nodes;
  int root = -1;
  std::map<std::string, AffineForm> forms;  // named-form table

  int add(CaseNode n) {
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }
  int add_leaf(LeafNode l) { return add(CaseNode{std::move(l)}); }
  int add_split(SplitNode s) { return add(CaseNode{std::move(s)}); }
  int add_assume(AssumeNode a) { return add(CaseNode{std::move(a)}); }

  int leaf_count() const {
    int n = 0;
    for (const auto& c : nodes) n += c.is_leaf();
    return n;
  }
};

// ---------------------------------------------------------------- JSON I/O

namespace certjson {

inline ordered_json theta_affine_json(const ThetaAffine& v) {
  return ordered_json{{"c", v.c.str()}, {"t", v.t.str()}};
}

inline ThetaAffine theta_affine_parse(const ordered_json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("c") || !j.contains("t"))
    throw CertificateError(path + ": theta-affine scalar needs fields c and t");
  return ThetaAffine(Rational::parse(j.at("c").get<std::string>()),
                     Rational::parse(j.at("t").get<std::string>()));
}

inline ordered_json form_json(const AffineForm& f,
                              const std::vector<std::string>& aux_names) {
  ordered_json coef = ordered_json::object();
  for (int j = 0; j < f.size(); ++j) {
    if (f.coef[j].is_zero()) continue;
    std::string key;
    if (j < kNumVars) {
      key = var_names()[j];
    } else {
      int a = j - kNumVars;
      if (a >= static_cast<int>(aux_names.size()))
        throw CertificateError("form refers to undeclared auxiliary column");
      key = aux_names[a];
    }
    coef[key] = theta_affine_json(f.coef[j]);
  }
  return ordered_json{{"coef", std::move(coef)}, {"const", theta_affine_json(f.cst)}};
}

inline AffineForm form_parse(const ordered_json& j, const std::string& path,
                             const std::map<std::string, AffineForm>& table,
                             const std::vector<std::string>& aux_names) {
  if (j.is_object() && j.contains("$ref")) {
    std::string name = j.at("$ref").get<std::string>();
    auto it = table.find(name);
    if (it == table.end())
      throw CertificateError(path + ": dangling form reference '" + name + "'");
    return it->second;
  }
  if (!j.is_object() || !j.contains("coef") || !j.contains("const"))
    throw CertificateError(path + ": form needs coef and const");
  AffineForm f(kNumVars + static_cast<int>(aux_names.size()));
  for (auto it = j.at("coef").begin(); it != j.at("coef").end(); ++it) {
    const std::string& key = it.key();
    int col = -1;
    for (int v = 0; v < kNumVars; ++v)
      if (var_names()[v] == key) { col = v; break; }
    if (col < 0)
      for (int a = 0; a < static_cast<int>(aux_names.size()); ++a)
        if (aux_names[a] == key) { col = kNumVars + a; break; }
    if (col < 0) throw CertificateError(path + ": unknown variable '" + key + "'");
    f.coef[col] = theta_affine_parse(it.value(), path + ".coef." + key);
  }
  f.cst = theta_affine_parse(j.at("const"), path + ".const");
  return f;
}

inline ordered_json condition_json(const Condition& c,
                                   const std::vector<std::string>& aux_names) {
  return ordered_json{{"label", c.label},
                      {"strict", c.strict},
                      {"lhs", form_json(c.lhs, aux_names)}};
}

inline Condition condition_parse(const ordered_json& j, const std::string& path,
                                 const std::map<std::string, AffineForm>& table,
                                 const std::vector<std::string>& aux_names) {
  if (!j.is_object() || !j.contains("lhs"))
    throw CertificateError(path + ": condition needs an lhs");
  Condition c;
  c.label = j.value("label", std::string());
  c.strict = j.value("strict", false);
  c.lhs = form_parse(j.at("lhs"), path + ".lhs", table, aux_names);
  return c;
}

inline ordered_json bound_json(const BoundInstance& b) {
  ordered_json j;
  j["kind"] = bound_kind_name(b.kind);
  switch (b.kind) {
    case BoundKind::Contradiction:
      break;
    case BoundKind::Fourier:
      j["pair"] = b.pair.name();
      j["m"] = b.fourier_m;
      break;
    case BoundKind::Thue:
      j["pair"] = b.pair.name();
      j["p"] = b.thue_p;
      break;
    case BoundKind::Determinant:
      j["x"] = std::string(1, letter_name(b.pair.x));
      j["p"] = b.det_p;
      if (b.det_y_aux) {
        j["y"] = ordered_json{{"aux", b.det_aux_name}};
      } else {
        j["y"] = ordered_json{{"letter", std::string(1, letter_name(b.pair.y))},
                              {"index", b.det_q}};
      }
      j["relax"] = b.det_relax;
      break;
    case BoundKind::GeometryV1: {
      ordered_json sel = ordered_json::object();
      for (int i = 1; i <= kTruncation; ++i) {
        std::string letters;
        for (Letter l : kLetters)
          if (b.select[i][static_cast<int>(l)]) letters += letter_name(l);
        if (!letters.empty()) sel[std::to_string(i)] = letters;
      }
      j["select"] = std::move(sel);
      break;
    }
    case BoundKind::GeometryV2: {
      ordered_json out = ordered_json::object();
      for (Letter l : kLetters) {
        const OutSet& o = b.out[static_cast<int>(l)];
        ordered_json idx = ordered_json::array();
        for (int i = 1; i <= kTruncation; ++i)
          if (o.idx[i]) idx.push_back(i);
        out[std::string(1, letter_name(l))] =
            ordered_json{{"idx", std::move(idx)}, {"tail", o.tail}};
      }
      j["out"] = std::move(out);
      break;
    }
  }
  return j;
}

inline Letter letter_parse(const std::string& s, const std::string& path) {
  if (s == "a") return Letter::A;
  if (s == "b") return Letter::B;
  if (s == "c") return Letter::C;
  throw CertificateError(path + ": bad letter '" + s + "'");
}

inline BoundInstance bound_parse(const ordered_json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind"))
    throw CertificateError(path + ": bound needs a kind");
  std::string kind = j.at("kind").get<std::string>();
  BoundInstance b;
  if (kind == "contradiction") {
    b.kind = BoundKind::Contradiction;
  } else if (kind == "fourier") {
    b.kind = BoundKind::Fourier;
    b.pair = letter_pair(j.at("pair").get<std::string>());
    b.fourier_m = j.at("m").get<int>();
    if (b.fourier_m < 2 || b.fourier_m > kTruncation)
      throw CertificateError(path + ": fourier excluded index out of range");
  } else if (kind == "thue") {
    b.kind = BoundKind::Thue;
    b.pair = letter_pair(j.at("pair").get<std::string>());
    b.thue_p = j.at("p").get<int>();
    if (b.thue_p < 2 || b.thue_p > kTruncation)
      throw CertificateError(path + ": thue modulus out of range");
  } else if (kind == "determinant") {
    b.kind = BoundKind::Determinant;
    b.pair.x = letter_parse(j.at("x").get<std::string>(), path);
    b.det_p = j.at("p").get<int>();
    b.det_relax = j.value("relax", 2);
    const auto& y = j.at("y");
    if (y.contains("aux")) {
      b.det_y_aux = true;
      b.det_aux_name = y.at("aux").get<std::string>();
    } else {
      b.pair.y = letter_parse(y.at("letter").get<std::string>(), path);
      b.det_q = y.at("index").get<int>();
    }
  } else if (kind == "geometry1") {
    b.kind = BoundKind::GeometryV1;
    for (auto it = j.at("select").begin(); it != j.at("select").end(); ++it) {
      int i = std::stoi(it.key());
      if (i < 1 || i > kTruncation)
        throw CertificateError(path + ": geometry1 index out of range");
      for (char c : it.value().get<std::string>())
        b.select[i][static_cast<int>(letter_parse(std::string(1, c), path))] = true;
    }
  } else if (kind == "geometry2") {
    b.kind = BoundKind::GeometryV2;
    for (Letter l : kLetters) {
      std::string key(1, letter_name(l));
      if (!j.at("out").contains(key)) continue;
      const auto& o = j.at("out").at(key);
      OutSet& s = b.out[static_cast<int>(l)];
      for (const auto& idx : o.at("idx")) {
        int i = idx.get<int>();
        if (i < 1 || i > kTruncation)
          throw CertificateError(path + ": geometry2 index out of range");
        s.idx[i] = true;
      }
      s.tail = o.value("tail", false);
    }
  } else {
    throw CertificateError(path + ": unknown bound kind '" + kind + "'");
  }
  return b;
}

}  // namespace certjson

inline ordered_json node_json(const Certificate& cert, int id) {
  const CaseNode& n = cert.nodes.at(id);
  static const std::vector<std::string> no_aux;
  if (n.is_leaf()) {
    const LeafNode& l = n.leaf();
    std::vector<std::string> aux_names;
    for (const auto& a : l.aux) aux_names.push_back(a.name);
    ordered_json extra = ordered_json::array();
    for (const auto& c : l.extra) extra.push_back(certjson::condition_json(c, aux_names));
    ordered_json aux = ordered_json::array();
    for (const auto& a : l.aux) {
      ordered_json links = ordered_json::array();
      for (const auto& c : a.links) links.push_back(certjson::condition_json(c, aux_names));
      aux.push_back(ordered_json{{"name", a.name}, {"links", std::move(links)}});
    }
    return ordered_json{{"type", "leaf"},
                        {"label", l.label},
                        {"note", l.note},
                        {"extra", std::move(extra)},
                        {"aux", std::move(aux)},
                        {"bound", certjson::bound_json(l.bound)}};
  }
  if (std::holds_alternative<SplitNode>(n.node)) {
    const SplitNode& s = n.split();
    return ordered_json{{"type", "split"},
                        {"label", s.label},
                        {"note", s.note},
                        {"cond", certjson::condition_json(s.cond, no_aux)},
                        {"strict_false", s.strict_false},
                        {"true", node_json(cert, s.child_true)},
                        {"false", node_json(cert, s.child_false)}};
  }
  const AssumeNode& a = n.assume();
  ordered_json cs = ordered_json::array();
  for (const auto& c : a.constraints) cs.push_back(certjson::condition_json(c, no_aux));
  return ordered_json{{"type", "assume"},
                      {"label", a.label},
                      {"note", a.note},
                      {"constraints", std::move(cs)},
                      {"child", node_json(cert, a.child)}};
}

inline ordered_json certificate_json(const Certificate& cert) {
  ordered_json vars = ordered_json::array();
  for (const auto& v : var_names()) vars.push_back(v);
  ordered_json forms = ordered_json::object();
  static const std::vector<std::string> no_aux;
  for (const auto& [name, f] : cert.forms) forms[name] = certjson::form_json(f, no_aux);
  return ordered_json{{"version", cert.version},
                      {"variables", std::move(vars)},
                      {"forms", std::move(forms)},
                      {"tree", node_json(cert, cert.root)}};
}

inline std::string serialize_certificate(const Certificate& cert) {
  return certificate_json(cert).dump(1) + "\n";
}

inline int node_parse(Certificate& cert, const ordered_json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type"))
    throw CertificateError(path + ": node needs a type");
  std::string type = j.at("type").get<std::string>();
  static const std::vector<std::string> no_aux;
  if (type == "leaf") {
    LeafNode l;
    l.label = j.value("label", std::string());
    l.note = j.value("note", std::string());
    std::vector<std::string> aux_names;
    if (j.contains("aux"))
      for (const auto& a : j.at("aux")) aux_names.push_back(a.at("name").get<std::string>());
    if (j.contains("extra")) {
      int i = 0;
      for (const auto& c : j.at("extra"))
        l.extra.push_back(certjson::condition_parse(
            c, path + ".extra[" + std::to_string(i++) + "]", cert.forms, aux_names));
    }
    if (j.contains("aux")) {
      int i = 0;
      for (const auto& a : j.at("aux")) {
        AuxDecl d;
        d.name = a.at("name").get<std::string>();
        int k = 0;
        for (const auto& c : a.at("links"))
          d.links.push_back(certjson::condition_parse(
              c, path + ".aux[" + std::to_string(i) + "].links[" + std::to_string(k++) + "]",
              cert.forms, aux_names));
        l.aux.push_back(std::move(d));
        ++i;
      }
    }
    l.bound = certjson::bound_parse(j.at("bound"), path + ".bound");
    if (l.bound.det_y_aux) {
      bool declared = false;
      for (const auto& a : l.aux) declared |= a.name == l.bound.det_aux_name;
      if (!declared)
        throw CertificateError(path + ": bound references undeclared auxiliary '" +
                               l.bound.det_aux_name + "'");
    }
    return cert.add_leaf(std::move(l));
  }
  if (type == "split") {
    SplitNode s;
    s.label = j.value("label", std::string());
    s.note = j.value("note", std::string());
    s.cond = certjson::condition_parse(j.at("cond"), path + ".cond", cert.forms, no_aux);
    s.strict_false = j.value("strict_false", false);
    s.child_true = node_parse(cert, j.at("true"), path + ".true");
    s.child_false = node_parse(cert, j.at("false"), path + ".false");
    return cert.add_split(std::move(s));
  }
  if (type == "assume") {
    AssumeNode a;
    a.label = j.value("label", std::string());
    a.note = j.value("note", std::string());
    int i = 0;
    if (j.contains("constraints"))
      for (const auto& c : j.at("constraints"))
        a.constraints.push_back(certjson::condition_parse(
            c, path + ".constraints[" + std::to_string(i++) + "]", cert.forms, no_aux));
    a.child = node_parse(cert, j.at("child"), path + ".child");
    return cert.add_assume(std::move(a));
  }
  throw CertificateError(path + ": unknown node type '" + type + "'");
}

inline Certificate parse_certificate_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CertificateError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw CertificateError("certificate root must be an object");
  Certificate cert;
  cert.version = j.value("version", 0);
  if (cert.version != 1)
    throw CertificateError("unsupported certificate version " + std::to_string(cert.version));
  if (j.contains("variables")) {
    const auto& vars = j.at("variables");
    if (vars.size() != kNumVars)
      throw CertificateError("variable-space declaration has wrong arity");
    for (int i = 0; i < kNumVars; ++i)
      if (vars[i].get<std::string>() != var_names()[i])
        throw CertificateError("variable-space declaration mismatch at position " +
                               std::to_string(i));
  }
  if (j.contains("forms"))
    for (auto it = j.at("forms").begin(); it != j.at("forms").end(); ++it)
      cert.forms[it.key()] =
          certjson::form_parse(it.value(), "forms." + it.key(), cert.forms, {});
  if (!j.contains("tree")) throw CertificateError("certificate has no tree");
  cert.root = node_parse(cert, j.at("tree"), "tree");
  return cert;
}

}  // namespace abcert
