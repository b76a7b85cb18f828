#pragma once

// Core value types: dialects, concepts, roles, axioms, assertions, knowledge
// bases, signatures and Boolean instance queries. All types are immutable in
// spirit: construct, then share freely across threads.

#include <algorithm>
#include <compare>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "abduct/errors.hpp"

namespace abduct {

enum class Dialect { ElBot, DlLiteCore, DlLiteR };

enum class Semantics { Classical, Brave, Ar };

inline const char* to_string(Dialect d) {
  switch (d) {
    case Dialect::ElBot: return "elbot";
    case Dialect::DlLiteCore: return "dllite-core";
    case Dialect::DlLiteR: return "dllite-r";
  }
  return "?";
}

inline const char* to_string(Semantics s) {
  switch (s) {
    case Semantics::Classical: return "classical";
    case Semantics::Brave: return "brave";
    case Semantics::Ar: return "ar";
  }
  return "?";
}

// A role expression: a role name, optionally inverted (DL-Lite only) and
// optionally negated (right-hand side of a DL-LiteR role inclusion only).
struct RoleExpr {
  std::string name;
  bool inverted = false;
  bool negated = false;

  friend bool operator==(const RoleExpr&, const RoleExpr&) = default;
  friend auto operator<=>(const RoleExpr&, const RoleExpr&) = default;
};

// A concept term. EL concepts use Name/Top/Bot/And/Exists (with filler);
// DL-Lite concepts use Name/Exists (no filler) and Not at the top level of a
// right-hand side. Conjunction is kept n-ary as written; reasoning binarizes.
struct Concept {
  enum class Kind { Name, Top, Bot, And, Exists, Not };

  Kind kind = Kind::Top;
  std::string name;               // Kind::Name
  RoleExpr role;                  // Kind::Exists
  std::vector<Concept> children;  // And: >= 2, Exists: 0 or 1 (filler), Not: 1

  static Concept make_name(std::string n) {
    Concept c;
    c.kind = Kind::Name;
    c.name = std::move(n);
    return c;
  }
  static Concept top() {
    Concept c;
    c.kind = Kind::Top;
    return c;
  }
  static Concept bot() {
    Concept c;
    c.kind = Kind::Bot;
    return c;
  }
  static Concept make_and(std::vector<Concept> parts) {
    Concept c;
    c.kind = Kind::And;
    c.children = std::move(parts);
    return c;
  }
  static Concept exists(RoleExpr r) {
    Concept c;
    c.kind = Kind::Exists;
    c.role = std::move(r);
    return c;
  }
  static Concept exists(RoleExpr r, Concept filler) {
    Concept c;
    c.kind = Kind::Exists;
    c.role = std::move(r);
    c.children.push_back(std::move(filler));
    return c;
  }
  static Concept negate(Concept inner) {
    Concept c;
    c.kind = Kind::Not;
    c.children.push_back(std::move(inner));
    return c;
  }

  bool is_name() const { return kind == Kind::Name; }

  friend bool operator==(const Concept&, const Concept&) = default;
};

struct Axiom {
  enum class Kind { ConceptInclusion, RoleInclusion };

  Kind kind = Kind::ConceptInclusion;
  Concept lhs, rhs;        // ConceptInclusion
  RoleExpr rlhs, rrhs;     // RoleInclusion

  static Axiom sub(Concept l, Concept r) {
    Axiom ax;
    ax.kind = Kind::ConceptInclusion;
    ax.lhs = std::move(l);
    ax.rhs = std::move(r);
    return ax;
  }
  static Axiom rsub(RoleExpr l, RoleExpr r) {
    Axiom ax;
    ax.kind = Kind::RoleInclusion;
    ax.rlhs = std::move(l);
    ax.rrhs = std::move(r);
    return ax;
  }

  friend bool operator==(const Axiom&, const Axiom&) = default;
};

// A concept assertion A(a) or role assertion r(a,b). Concept assertions carry
// concept names only: ABoxes and hypotheses are flat by construction.
struct Assertion {
  bool is_role = false;
  std::string pred;  // concept name or role name
  std::string a;
  std::string b;  // second individual, role assertions only

  static Assertion concept_of(std::string name, std::string ind) {
    return Assertion{false, std::move(name), std::move(ind), {}};
  }
  static Assertion role_of(std::string name, std::string from, std::string to) {
    return Assertion{true, std::move(name), std::move(from), std::move(to)};
  }

  friend bool operator==(const Assertion&, const Assertion&) = default;
  friend auto operator<=>(const Assertion& x, const Assertion& y) {
    return std::tie(x.is_role, x.pred, x.a, x.b) <=> std::tie(y.is_role, y.pred, y.a, y.b);
  }
};

using AssertionSet = std::vector<Assertion>;  // sorted, duplicate-free

inline AssertionSet make_assertion_set(AssertionSet items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

inline bool set_contains(const AssertionSet& s, const Assertion& x) {
  return std::binary_search(s.begin(), s.end(), x);
}

inline AssertionSet set_union(const AssertionSet& x, const AssertionSet& y) {
  AssertionSet out;
  out.reserve(x.size() + y.size());
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

inline AssertionSet set_difference(const AssertionSet& x, const AssertionSet& y) {
  AssertionSet out;
  std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

struct KnowledgeBase {
  Dialect dialect = Dialect::ElBot;
  std::vector<Axiom> tbox;  // order preserved from input
  AssertionSet abox;        // set semantics, canonically sorted

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

struct Signature {
  std::set<std::string> concepts;
  std::set<std::string> roles;
  std::set<std::string> individuals;

  friend bool operator==(const Signature&, const Signature&) = default;
};

// A Boolean instance query C(a). The observation of an abduction problem must
// be atomic (C a bare concept name); entailment queries may be complex.
struct Biq {
  Concept query;
  std::string individual;

  bool atomic() const { return query.is_name(); }

  friend bool operator==(const Biq&, const Biq&) = default;
};

namespace detail {

inline void collect_names(const Concept& c, Signature& sig) {
  switch (c.kind) {
    case Concept::Kind::Name:
      sig.concepts.insert(c.name);
      break;
    case Concept::Kind::Exists:
      sig.roles.insert(c.role.name);
      for (const Concept& child : c.children) collect_names(child, sig);
      break;
    case Concept::Kind::And:
    case Concept::Kind::Not:
      for (const Concept& child : c.children) collect_names(child, sig);
      break;
    case Concept::Kind::Top:
    case Concept::Kind::Bot:
      break;
  }
}

}  // namespace detail

inline Signature signature_of(const KnowledgeBase& kb) {
  Signature sig;
  for (const Axiom& ax : kb.tbox) {
    if (ax.kind == Axiom::Kind::ConceptInclusion) {
      detail::collect_names(ax.lhs, sig);
      detail::collect_names(ax.rhs, sig);
    } else {
      sig.roles.insert(ax.rlhs.name);
      sig.roles.insert(ax.rrhs.name);
    }
  }
  for (const Assertion& as : kb.abox) {
    if (as.is_role) {
      sig.roles.insert(as.pred);
      sig.individuals.insert(as.a);
      sig.individuals.insert(as.b);
    } else {
      sig.concepts.insert(as.pred);
      sig.individuals.insert(as.a);
    }
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Dialect validation

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw DialectError(msg);
}

inline void validate_el_concept(const Concept& c, const std::string& where) {
  switch (c.kind) {
    case Concept::Kind::Not:
      throw DialectError("negation is not allowed in elbot (" + where + ")");
    case Concept::Kind::Exists:
      require(!c.role.inverted, "inverse roles are not allowed in elbot (" + where + ")");
      require(!c.role.negated, "negated roles are not allowed here (" + where + ")");
      for (const Concept& child : c.children) validate_el_concept(child, where);
      break;
    case Concept::Kind::And:
      require(c.children.size() >= 2, "conjunction needs at least two parts (" + where + ")");
      for (const Concept& child : c.children) validate_el_concept(child, where);
      break;
    default:
      break;
  }
}

inline bool is_dl_basic(const Concept& c) {
  if (c.kind == Concept::Kind::Name) return true;
  return c.kind == Concept::Kind::Exists && c.children.empty() && !c.role.negated;
}

inline void validate_dl_general(const Concept& c, const std::string& where) {
  if (is_dl_basic(c)) return;
  if (c.kind == Concept::Kind::Not && c.children.size() == 1 && is_dl_basic(c.children[0])) return;
  throw DialectError("DL-Lite concepts must be basic or negated basic (" + where + ")");
}

}  // namespace detail

// Checks every axiom and assertion against the grammar of kb.dialect. This is
// a standalone structural walk: anything accepted here is well-formed input
// for the reasoners.
inline void validate_kb(const KnowledgeBase& kb) {
  const bool el = kb.dialect == Dialect::ElBot;
  for (std::size_t i = 0; i < kb.tbox.size(); ++i) {
    const Axiom& ax = kb.tbox[i];
    const std::string where = "axiom " + std::to_string(i + 1);
    if (ax.kind == Axiom::Kind::RoleInclusion) {
      detail::require(kb.dialect == Dialect::DlLiteR,
                      "role inclusions are only allowed in dllite-r (" + where + ")");
      detail::require(!ax.rlhs.negated, "left-hand role of an inclusion cannot be negated (" + where + ")");
      continue;
    }
    if (el) {
      detail::validate_el_concept(ax.lhs, where);
      detail::validate_el_concept(ax.rhs, where);
    } else {
      detail::require(detail::is_dl_basic(ax.lhs),
                      "left-hand side of a DL-Lite concept inclusion must be basic (" + where + ")");
      detail::validate_dl_general(ax.rhs, where);
    }
  }
  for (const Assertion& as : kb.abox) {
    (void)as;  // flat by construction of Assertion
  }
}

// Validates a query concept for a dialect. DL-Lite queries must be basic.
inline void validate_query(const KnowledgeBase& kb, const Biq& q) {
  if (kb.dialect == Dialect::ElBot) {
    detail::validate_el_concept(q.query, "query");
  } else {
    if (!detail::is_dl_basic(q.query))
      throw DialectError("DL-Lite queries must be a concept name or unqualified exists (query)");
  }
}

}  // namespace abduct
