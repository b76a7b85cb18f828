#pragma once

// Parsing and canonical serialization for the document formats:
//
//   doc       := "(dialect" TAG ")" "(tbox" axiom* ")" "(abox" assertion* ")"
//   axiom     := "(sub" concept concept ")" | "(rsub" role role ")"
//   concept   := NAME | "Top" | "Bot" | "(and" concept+ ")"
//              | "(some" role concept? ")" | "(not" concept ")"
//   role      := NAME | "(inv" NAME ")" | "(not" role ")"
//   assertion := "(inst" NAME NAME ")" | "(rel" NAME NAME NAME ")"
//
//   signature := "(signature (concepts NAME*) (roles NAME*) (individuals NAME*))"
//   hypothesis, observations ABox := "(abox" assertion* ")"
//   query     := "(biq" concept NAME ")"
//
// Names are case-sensitive identifiers matching [A-Za-z][A-Za-z0-9_]*.
// Serialization is canonical: ABoxes print in sorted order, so
// parse(serialize(kb)) is structurally equal to kb.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "abduct/errors.hpp"
#include "abduct/model.hpp"
#include "abduct/sexpr.hpp"

namespace abduct {

namespace detail {

inline const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "Top",  "Bot",  "and",     "some", "not",  "inv",        "sub",
      "rsub", "inst", "rel",     "dialect", "tbox", "abox",    "signature",
      "concepts", "roles", "individuals", "biq"};
  return words;
}

inline bool valid_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline std::string expect_name(const SNode& node, const std::string& what) {
  if (!node.is_atom) throw ParseError("expected a " + what + " name", node.line, node.column);
  if (reserved_words().count(node.atom))
    throw ParseError("'" + node.atom + "' is a reserved word, not a " + what + " name", node.line,
                     node.column);
  if (!valid_name(node.atom))
    throw ParseError("invalid " + what + " name '" + node.atom + "'", node.line, node.column);
  return node.atom;
}

inline RoleExpr parse_role(const SNode& node) {
  if (node.is_atom) return RoleExpr{expect_name(node, "role"), false, false};
  if (node.is_list("inv")) {
    if (node.items.size() != 2)
      throw ParseError("(inv ...) takes exactly one role name", node.line, node.column);
    return RoleExpr{expect_name(node.items[1], "role"), true, false};
  }
  if (node.is_list("not")) {
    if (node.items.size() != 2)
      throw ParseError("(not ...) takes exactly one role", node.line, node.column);
    RoleExpr inner = parse_role(node.items[1]);
    if (inner.negated) throw ParseError("doubly negated role", node.line, node.column);
    inner.negated = true;
    return inner;
  }
  if (!node.items.empty() && node.items.front().is_atom)
    throw ParseError("unknown keyword '" + node.items.front().atom + "' in role position",
                     node.line, node.column);
  throw ParseError("expected a role expression", node.line, node.column);
}

inline Concept parse_concept(const SNode& node) {
  if (node.is_atom) {
    if (node.atom == "Top") return Concept::top();
    if (node.atom == "Bot") return Concept::bot();
    return Concept::make_name(expect_name(node, "concept"));
  }
  if (node.items.empty() || !node.items.front().is_atom)
    throw ParseError("expected a concept expression", node.line, node.column);
  const std::string& head = node.items.front().atom;
  if (head == "and") {
    if (node.items.size() < 3)
      throw ParseError("(and ...) takes at least two concepts", node.line, node.column);
    std::vector<Concept> parts;
    for (std::size_t i = 1; i < node.items.size(); ++i) parts.push_back(parse_concept(node.items[i]));
    return Concept::make_and(std::move(parts));
  }
  if (head == "some") {
    if (node.items.size() != 2 && node.items.size() != 3)
      throw ParseError("(some ...) takes a role and an optional filler", node.line, node.column);
    RoleExpr role = parse_role(node.items[1]);
    if (role.negated) throw ParseError("negated role inside 'some'", node.line, node.column);
    if (node.items.size() == 3) return Concept::exists(std::move(role), parse_concept(node.items[2]));
    return Concept::exists(std::move(role));
  }
  if (head == "not") {
    if (node.items.size() != 2)
      throw ParseError("(not ...) takes exactly one concept", node.line, node.column);
    return Concept::negate(parse_concept(node.items[1]));
  }
  throw ParseError("unknown keyword '" + head + "' in concept position", node.line, node.column);
}

inline Axiom parse_axiom(const SNode& node) {
  if (node.is_list("sub")) {
    if (node.items.size() != 3)
      throw ParseError("(sub ...) takes exactly two concepts", node.line, node.column);
    return Axiom::sub(parse_concept(node.items[1]), parse_concept(node.items[2]));
  }
  if (node.is_list("rsub")) {
    if (node.items.size() != 3)
      throw ParseError("(rsub ...) takes exactly two roles", node.line, node.column);
    Axiom ax = Axiom::rsub(parse_role(node.items[1]), parse_role(node.items[2]));
    return ax;
  }
  if (!node.is_atom && !node.items.empty() && node.items.front().is_atom)
    throw ParseError("unknown keyword '" + node.items.front().atom + "' in tbox", node.line,
                     node.column);
  throw ParseError("expected (sub ...) or (rsub ...)", node.line, node.column);
}

inline Assertion parse_assertion(const SNode& node) {
  if (node.is_list("inst")) {
    if (node.items.size() != 3)
      throw ParseError("(inst ...) takes a concept name and an individual", node.line, node.column);
    return Assertion::concept_of(expect_name(node.items[1], "concept"),
                                 expect_name(node.items[2], "individual"));
  }
  if (node.is_list("rel")) {
    if (node.items.size() != 4)
      throw ParseError("(rel ...) takes a role name and two individuals", node.line, node.column);
    return Assertion::role_of(expect_name(node.items[1], "role"),
                              expect_name(node.items[2], "individual"),
                              expect_name(node.items[3], "individual"));
  }
  if (!node.is_atom && !node.items.empty() && node.items.front().is_atom)
    throw ParseError("unknown keyword '" + node.items.front().atom + "' in abox", node.line,
                     node.column);
  throw ParseError("expected (inst ...) or (rel ...)", node.line, node.column);
}

inline Dialect parse_dialect_tag(const SNode& node) {
  if (!node.is_atom) throw ParseError("expected a dialect tag", node.line, node.column);
  if (node.atom == "elbot") return Dialect::ElBot;
  if (node.atom == "dllite-core") return Dialect::DlLiteCore;
  if (node.atom == "dllite-r") return Dialect::DlLiteR;
  throw ParseError("unknown dialect '" + node.atom + "'", node.line, node.column);
}

}  // namespace detail

inline AssertionSet parse_abox_node(const SNode& node) {
  if (!node.is_list("abox")) throw ParseError("expected (abox ...)", node.line, node.column);
  AssertionSet abox;
  for (std::size_t i = 1; i < node.items.size(); ++i)
    abox.push_back(detail::parse_assertion(node.items[i]));
  return make_assertion_set(std::move(abox));
}

inline KnowledgeBase parse_kb(std::string_view text) {
  std::vector<SNode> forms = parse_sexprs(text);
  if (forms.size() != 3)
    throw ParseError("a knowledge base document has exactly three sections: (dialect ...), (tbox ...), (abox ...)",
                     forms.empty() ? 1 : forms.back().line, forms.empty() ? 1 : forms.back().column);
  if (!forms[0].is_list("dialect") || forms[0].items.size() != 2)
    throw ParseError("expected (dialect TAG)", forms[0].line, forms[0].column);
  if (!forms[1].is_list("tbox")) throw ParseError("expected (tbox ...)", forms[1].line, forms[1].column);

  KnowledgeBase kb;
  kb.dialect = detail::parse_dialect_tag(forms[0].items[1]);
  for (std::size_t i = 1; i < forms[1].items.size(); ++i)
    kb.tbox.push_back(detail::parse_axiom(forms[1].items[i]));
  kb.abox = parse_abox_node(forms[2]);
  validate_kb(kb);
  return kb;
}

inline AssertionSet parse_abox(std::string_view text) {
  std::vector<SNode> forms = parse_sexprs(text);
  if (forms.size() != 1) throw ParseError("expected a single (abox ...) form", 1, 1);
  return parse_abox_node(forms[0]);
}

inline Biq parse_biq(std::string_view text) {
  std::vector<SNode> forms = parse_sexprs(text);
  if (forms.size() != 1 || !forms[0].is_list("biq") || forms[0].items.size() != 3)
    throw ParseError("expected (biq CONCEPT INDIVIDUAL)", 1, 1);
  Biq q;
  q.query = detail::parse_concept(forms[0].items[1]);
  q.individual = detail::expect_name(forms[0].items[2], "individual");
  return q;
}

inline Signature parse_signature(std::string_view text) {
  std::vector<SNode> forms = parse_sexprs(text);
  if (forms.size() != 1 || !forms[0].is_list("signature") || forms[0].items.size() != 4)
    throw ParseError("expected (signature (concepts ...) (roles ...) (individuals ...))", 1, 1);
  const SNode& node = forms[0];
  const char* sections[3] = {"concepts", "roles", "individuals"};
  Signature sig;
  std::set<std::string>* targets[3] = {&sig.concepts, &sig.roles, &sig.individuals};
  for (int s = 0; s < 3; ++s) {
    const SNode& part = node.items[static_cast<std::size_t>(s) + 1];
    if (!part.is_list(sections[s]))
      throw ParseError(std::string("expected (") + sections[s] + " ...)", part.line, part.column);
    for (std::size_t i = 1; i < part.items.size(); ++i)
      targets[s]->insert(detail::expect_name(part.items[i], sections[s]));
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline void write_role(std::string& out, const RoleExpr& r) {
  if (r.negated) {
    out += "(not ";
    RoleExpr plain = r;
    plain.negated = false;
    write_role(out, plain);
    out += ')';
    return;
  }
  if (r.inverted) {
    out += "(inv " + r.name + ")";
  } else {
    out += r.name;
  }
}

inline void write_concept(std::string& out, const Concept& c) {
  switch (c.kind) {
    case Concept::Kind::Name:
      out += c.name;
      break;
    case Concept::Kind::Top:
      out += "Top";
      break;
    case Concept::Kind::Bot:
      out += "Bot";
      break;
    case Concept::Kind::And:
      out += "(and";
      for (const Concept& child : c.children) {
        out += ' ';
        write_concept(out, child);
      }
      out += ')';
      break;
    case Concept::Kind::Exists:
      out += "(some ";
      write_role(out, c.role);
      if (!c.children.empty()) {
        out += ' ';
        write_concept(out, c.children[0]);
      }
      out += ')';
      break;
    case Concept::Kind::Not:
      out += "(not ";
      write_concept(out, c.children[0]);
      out += ')';
      break;
  }
}

inline void write_assertion(std::string& out, const Assertion& as) {
  if (as.is_role) {
    out += "(rel " + as.pred + " " + as.a + " " + as.b + ")";
  } else {
    out += "(inst " + as.pred + " " + as.a + ")";
  }
}

inline void write_axiom(std::string& out, const Axiom& ax) {
  if (ax.kind == Axiom::Kind::ConceptInclusion) {
    out += "(sub ";
    write_concept(out, ax.lhs);
    out += ' ';
    write_concept(out, ax.rhs);
    out += ')';
  } else {
    out += "(rsub ";
    write_role(out, ax.rlhs);
    out += ' ';
    write_role(out, ax.rrhs);
    out += ')';
  }
}

}  // namespace detail

inline std::string serialize_concept(const Concept& c) {
  std::string out;
  detail::write_concept(out, c);
  return out;
}

inline std::string serialize_assertion(const Assertion& as) {
  std::string out;
  detail::write_assertion(out, as);
  return out;
}

inline std::string serialize_kb(const KnowledgeBase& kb) {
  std::string out = "(dialect ";
  out += to_string(kb.dialect);
  out += ")\n";
  if (kb.tbox.empty()) {
    out += "(tbox)\n";
  } else {
    out += "(tbox\n";
    for (const Axiom& ax : kb.tbox) {
      out += "  ";
      detail::write_axiom(out, ax);
      out += '\n';
    }
    out += ")\n";
  }
  AssertionSet sorted = make_assertion_set(kb.abox);
  if (sorted.empty()) {
    out += "(abox)\n";
  } else {
    out += "(abox\n";
    for (const Assertion& as : sorted) {
      out += "  ";
      detail::write_assertion(out, as);
      out += '\n';
    }
    out += ")\n";
  }
  return out;
}

inline std::string serialize_abox(const AssertionSet& abox) {
  AssertionSet sorted = make_assertion_set(abox);
  if (sorted.empty()) return "(abox)\n";
  std::string out = "(abox\n";
  for (const Assertion& as : sorted) {
    out += "  ";
    detail::write_assertion(out, as);
    out += '\n';
  }
  out += ")\n";
  return out;
}

inline std::string serialize_biq(const Biq& q) {
  std::string out = "(biq ";
  detail::write_concept(out, q.query);
  out += ' ';
  out += q.individual;
  out += ")\n";
  return out;
}

inline std::string serialize_signature(const Signature& sig) {
  std::string out = "(signature\n  (concepts";
  for (const std::string& n : sig.concepts) out += ' ' + n;
  out += ")\n  (roles";
  for (const std::string& n : sig.roles) out += ' ' + n;
  out += ")\n  (individuals";
  for (const std::string& n : sig.individuals) out += ' ' + n;
  out += "))\n";
  return out;
}

}  // namespace abduct
