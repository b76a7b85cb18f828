#pragma once

// TBox normalization.
//
// EL: structural transformation into the normal forms
//       A [= B,  A1 n A2 [= B,  A [= some r.B,  some r.A [= B
//     where A, Ai are concept names or Top and B is a concept name or Bot.
//     Fresh names carry the reserved "__n" prefix and are flagged internal.
//     The transformation is a conservative extension: entailment of instance
//     queries over the original names is unchanged.
//
// DL-Lite: the inclusion closure over basic concepts (names, some r, some r-)
//     and roles. Positive inclusions are closed reflexively-transitively;
//     negative inclusions (disjointness) are closed under positive rewriting
//     on both sides, under role subsumption and inversion, and under the
//     empty-role rules linking role disjointness with domain/range emptiness.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "abduct/errors.hpp"
#include "abduct/model.hpp"

namespace abduct {

// ---------------------------------------------------------------------------
// EL normal form

struct ElRules {
  // Concept names are interned; 0 = Top, 1 = Bot.
  static constexpr int kTop = 0;
  static constexpr int kBot = 1;

  ElRules() {
    name_id("Top");
    name_id("Bot");
  }

  std::vector<std::string> names;        // id -> name ("Top"/"Bot" at 0/1)
  std::map<std::string, int> name_ids;
  std::vector<bool> internal;            // fresh normalization names
  std::vector<std::string> roles;
  std::map<std::string, int> role_ids;

  struct Sub { int lhs, rhs; };                  // lhs [= rhs
  struct Conj { int lhs1, lhs2, rhs; };          // lhs1 n lhs2 [= rhs
  struct ExistsLeft { int role, filler, rhs; };  // some role.filler [= rhs
  struct ExistsRight { int lhs, role, filler; }; // lhs [= some role.filler

  std::vector<Sub> subs;
  std::vector<Conj> conjs;
  std::vector<ExistsLeft> ex_left;
  std::vector<ExistsRight> ex_right;

  int name_id(const std::string& n) {
    auto it = name_ids.find(n);
    if (it != name_ids.end()) return it->second;
    int id = static_cast<int>(names.size());
    names.push_back(n);
    name_ids.emplace(n, id);
    internal.push_back(n.rfind("__", 0) == 0);
    return id;
  }

  int role_id(const std::string& r) {
    auto it = role_ids.find(r);
    if (it != role_ids.end()) return it->second;
    int id = static_cast<int>(roles.size());
    roles.push_back(r);
    role_ids.emplace(r, id);
    return id;
  }

  std::size_t rule_count() const {
    return subs.size() + conjs.size() + ex_left.size() + ex_right.size();
  }
};

namespace detail {

class ElNormalizer {
 public:
  explicit ElNormalizer(ElRules& rules) : rules_(rules) {}

  void add_axiom(const Concept& lhs, const Concept& rhs) {
    // Split the right-hand side first, then flatten the left.
    split_rhs(lhs, rhs);
  }

 private:
  ElRules& rules_;
  int fresh_counter_ = 0;

  int fresh_name() { return rules_.name_id("__n" + std::to_string(++fresh_counter_)); }

  static bool contains_bot(const Concept& c) {
    if (c.kind == Concept::Kind::Bot) return true;
    for (const Concept& child : c.children)
      if (contains_bot(child)) return true;
    return false;
  }

  void split_rhs(const Concept& lhs, const Concept& rhs) {
    switch (rhs.kind) {
      case Concept::Kind::Top:
        return;  // trivially true
      case Concept::Kind::And:
        for (const Concept& part : rhs.children) split_rhs(lhs, part);
        return;
      case Concept::Kind::Exists: {
        const Concept filler = rhs.children.empty() ? Concept::top() : rhs.children[0];
        if (contains_bot(filler)) {
          // some r.Bot is unsatisfiable.
          emit(lhs, ElRules::kBot);
          return;
        }
        int filler_id;
        if (filler.kind == Concept::Kind::Top) {
          filler_id = ElRules::kTop;
        } else if (filler.kind == Concept::Kind::Name) {
          filler_id = rules_.name_id(filler.name);
        } else {
          filler_id = fresh_name();
          split_rhs(Concept::make_name(rules_.names[filler_id]), filler);  // fresh [= filler
        }
        int lhs_id = flatten_lhs_to_name(lhs);
        if (lhs_id < 0) return;  // vacuous
        rules_.ex_right.push_back({lhs_id, rules_.role_id(rhs.role.name), filler_id});
        return;
      }
      case Concept::Kind::Bot:
        emit(lhs, ElRules::kBot);
        return;
      case Concept::Kind::Name:
        emit(lhs, rules_.name_id(rhs.name));
        return;
      case Concept::Kind::Not:
        throw DialectError("negation is not allowed in elbot");
    }
  }

  // Emits lhs [= rhs_id after flattening lhs into normal-form shapes.
  void emit(const Concept& lhs, int rhs_id) {
    switch (lhs.kind) {
      case Concept::Kind::Bot:
        return;  // Bot [= anything is vacuous
      case Concept::Kind::Top:
        rules_.subs.push_back({ElRules::kTop, rhs_id});
        return;
      case Concept::Kind::Name:
        rules_.subs.push_back({rules_.name_id(lhs.name), rhs_id});
        return;
      case Concept::Kind::Exists: {
        if (!lhs.children.empty() && contains_bot(lhs.children[0])) return;  // vacuous
        const Concept filler = lhs.children.empty() ? Concept::top() : lhs.children[0];
        int filler_id = lhs_name_of(filler);
        if (filler_id < 0) return;
        rules_.ex_left.push_back({rules_.role_id(lhs.role.name), filler_id, rhs_id});
        return;
      }
      case Concept::Kind::And: {
        std::vector<Concept> parts;
        for (const Concept& part : lhs.children) {
          if (part.kind == Concept::Kind::Top) continue;
          if (contains_bot(part)) return;  // vacuous axiom
          parts.push_back(part);
        }
        if (parts.empty()) {
          rules_.subs.push_back({ElRules::kTop, rhs_id});
          return;
        }
        if (parts.size() == 1) {
          emit(parts[0], rhs_id);
          return;
        }
        // Binarize left-associatively over named parts.
        std::vector<int> ids;
        for (const Concept& part : parts) {
          int id = lhs_name_of(part);
          if (id < 0) return;
          ids.push_back(id);
        }
        int acc = ids[0];
        for (std::size_t i = 1; i + 1 < ids.size(); ++i) {
          int combined = fresh_name();
          rules_.conjs.push_back({acc, ids[i], combined});
          acc = combined;
        }
        rules_.conjs.push_back({acc, ids.back(), rhs_id});
        return;
      }
      case Concept::Kind::Not:
        throw DialectError("negation is not allowed in elbot");
    }
  }

  // Returns a name id equivalent to (an upper bound of) the concept for use in
  // a left-hand position, introducing fresh names for complex parts.
  // Returns -1 when the concept is unsatisfiable (axiom becomes vacuous).
  int lhs_name_of(const Concept& c) {
    switch (c.kind) {
      case Concept::Kind::Top:
        return ElRules::kTop;
      case Concept::Kind::Bot:
        return -1;
      case Concept::Kind::Name:
        return rules_.name_id(c.name);
      case Concept::Kind::And:
      case Concept::Kind::Exists: {
        if (contains_bot(c)) return -1;
        int id = fresh_name();
        emit(c, id);  // c [= fresh
        return id;
      }
      case Concept::Kind::Not:
        throw DialectError("negation is not allowed in elbot");
    }
    return -1;
  }

  int flatten_lhs_to_name(const Concept& lhs) {
    if (lhs.kind == Concept::Kind::Name) return rules_.name_id(lhs.name);
    if (lhs.kind == Concept::Kind::Top) return ElRules::kTop;
    if (lhs.kind == Concept::Kind::Bot) return -1;
    int id = fresh_name();
    emit(lhs, id);
    return id;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// DL-Lite closure

// A basic DL-Lite concept: a concept name or the domain of a (possibly
// inverted) role.
struct DlBasic {
  enum class Kind { Name, Exists };
  Kind kind = Kind::Name;
  std::string name;      // concept name, or role name when kind == Exists
  bool inverted = false; // some r- when true

  static DlBasic concept_name(std::string n) { return DlBasic{Kind::Name, std::move(n), false}; }
  static DlBasic domain_of(std::string role, bool inv) {
    return DlBasic{Kind::Exists, std::move(role), inv};
  }

  friend bool operator==(const DlBasic&, const DlBasic&) = default;
  friend auto operator<=>(const DlBasic&, const DlBasic&) = default;
};

// A role with direction: r or r-.
struct DlRole {
  std::string name;
  bool inverted = false;

  DlRole inverse() const { return DlRole{name, !inverted}; }

  friend bool operator==(const DlRole&, const DlRole&) = default;
  friend auto operator<=>(const DlRole&, const DlRole&) = default;
};

struct DlLiteClosure {
  // pos[b] = set of basic concepts entailed to subsume b (excluding b itself).
  std::map<DlBasic, std::set<DlBasic>> pos;
  // disj holds unordered disjointness as symmetric ordered pairs.
  std::set<std::pair<DlBasic, DlBasic>> disj;
  std::map<DlRole, std::set<DlRole>> role_pos;
  std::set<std::pair<DlRole, DlRole>> role_disj;

  bool subsumes(const DlBasic& sub, const DlBasic& super) const {
    if (sub == super) return true;
    auto it = pos.find(sub);
    return it != pos.end() && it->second.count(super) > 0;
  }

  bool disjoint(const DlBasic& b1, const DlBasic& b2) const {
    return disj.count({b1, b2}) > 0;
  }

  bool role_disjoint(const DlRole& q1, const DlRole& q2) const {
    return role_disj.count({q1, q2}) > 0;
  }
};

namespace detail {

inline DlBasic dl_basic_of(const Concept& c) {
  if (c.kind == Concept::Kind::Name) return DlBasic::concept_name(c.name);
  if (c.kind == Concept::Kind::Exists && c.children.empty())
    return DlBasic::domain_of(c.role.name, c.role.inverted);
  throw DialectError("expected a basic DL-Lite concept");
}

inline DlLiteClosure build_dl_closure(const std::vector<Axiom>& tbox) {
  DlLiteClosure cl;

  // Role subsumption seeds (closed under inversion), then transitive closure.
  std::map<DlRole, std::set<DlRole>> radj;
  for (const Axiom& ax : tbox) {
    if (ax.kind != Axiom::Kind::RoleInclusion || ax.rrhs.negated) continue;
    DlRole l{ax.rlhs.name, ax.rlhs.inverted};
    DlRole r{ax.rrhs.name, ax.rrhs.inverted};
    radj[l].insert(r);
    radj[l.inverse()].insert(r.inverse());
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [q, sups] : radj) {
      std::vector<DlRole> to_add;
      for (const DlRole& s : sups) {
        auto it = radj.find(s);
        if (it == radj.end()) continue;
        for (const DlRole& s2 : it->second)
          if (s2 != q && !sups.count(s2)) to_add.push_back(s2);
      }
      for (const DlRole& s2 : to_add) {
        sups.insert(s2);
        changed = true;
      }
    }
  }
  cl.role_pos = radj;

  // Positive concept inclusions: explicit axioms plus domain/range
  // monotonicity from role subsumption.
  std::map<DlBasic, std::set<DlBasic>> padj;
  for (const Axiom& ax : tbox) {
    if (ax.kind != Axiom::Kind::ConceptInclusion) continue;
    if (ax.rhs.kind == Concept::Kind::Not) continue;
    DlBasic l = dl_basic_of(ax.lhs);
    DlBasic r = dl_basic_of(ax.rhs);
    if (l != r) padj[l].insert(r);
  }
  for (const auto& [q, sups] : radj) {
    for (const DlRole& s : sups) {
      DlBasic dq = DlBasic::domain_of(q.name, q.inverted);
      DlBasic ds = DlBasic::domain_of(s.name, s.inverted);
      if (dq != ds) padj[dq].insert(ds);
    }
  }
  changed = true;
  while (changed) {
    changed = false;
    for (auto& [b, sups] : padj) {
      std::vector<DlBasic> to_add;
      for (const DlBasic& s : sups) {
        auto it = padj.find(s);
        if (it == padj.end()) continue;
        for (const DlBasic& s2 : it->second)
          if (s2 != b && !sups.count(s2)) to_add.push_back(s2);
      }
      for (const DlBasic& s2 : to_add) {
        sups.insert(s2);
        changed = true;
      }
    }
  }
  cl.pos = padj;

  // Negative inclusions, then the saturation described in the file header.
  for (const Axiom& ax : tbox) {
    if (ax.kind == Axiom::Kind::ConceptInclusion && ax.rhs.kind == Concept::Kind::Not) {
      DlBasic l = dl_basic_of(ax.lhs);
      DlBasic r = dl_basic_of(ax.rhs.children[0]);
      cl.disj.insert({l, r});
      cl.disj.insert({r, l});
    }
    if (ax.kind == Axiom::Kind::RoleInclusion && ax.rrhs.negated) {
      DlRole l{ax.rlhs.name, ax.rlhs.inverted};
      DlRole r{ax.rrhs.name, ax.rrhs.inverted};
      for (auto [q1, q2] : {std::pair{l, r}, std::pair{l.inverse(), r.inverse()}}) {
        cl.role_disj.insert({q1, q2});
        cl.role_disj.insert({q2, q1});
      }
    }
  }

  auto subsumers_of = [&](const DlBasic& b) {
    std::vector<DlBasic> subs;  // all b' with b' [= b
    subs.push_back(b);
    for (const auto& [cand, sups] : cl.pos)
      if (sups.count(b)) subs.push_back(cand);
    return subs;
  };
  auto role_subs_of = [&](const DlRole& q) {
    std::vector<DlRole> subs;
    subs.push_back(q);
    for (const auto& [cand, sups] : cl.role_pos)
      if (sups.count(q)) subs.push_back(cand);
    return subs;
  };

  changed = true;
  while (changed) {
    changed = false;
    // Rewrite concept disjointness to all positive subsumees, both sides.
    std::vector<std::pair<DlBasic, DlBasic>> new_disj;
    for (const auto& [b1, b2] : cl.disj)
      for (const DlBasic& s1 : subsumers_of(b1))
        for (const DlBasic& s2 : subsumers_of(b2)) {
          if (!cl.disj.count({s1, s2})) new_disj.push_back({s1, s2});
        }
    for (const auto& p : new_disj) {
      cl.disj.insert(p);
      cl.disj.insert({p.second, p.first});
      changed = true;
    }

    // Rewrite role disjointness under role subsumption and inversion.
    std::vector<std::pair<DlRole, DlRole>> new_rdisj;
    for (const auto& [q1, q2] : cl.role_disj)
      for (const DlRole& s1 : role_subs_of(q1))
        for (const DlRole& s2 : role_subs_of(q2)) {
          if (!cl.role_disj.count({s1, s2})) new_rdisj.push_back({s1, s2});
          DlRole i1 = s1.inverse(), i2 = s2.inverse();
          if (!cl.role_disj.count({i1, i2})) new_rdisj.push_back({i1, i2});
        }
    for (const auto& p : new_rdisj) {
      cl.role_disj.insert(p);
      cl.role_disj.insert({p.second, p.first});
      changed = true;
    }

    // Empty-role rules: Q disjoint with itself, its domain and its range are
    // mutually forced empty.
    std::vector<DlRole> empties;
    for (const auto& [q1, q2] : cl.role_disj)
      if (q1 == q2) empties.push_back(q1);
    for (const auto& [b1, b2] : cl.disj)
      if (b1 == b2 && b1.kind == DlBasic::Kind::Exists)
        empties.push_back(DlRole{b1.name, b1.inverted});
    for (const DlRole& q : empties) {
      DlBasic dom = DlBasic::domain_of(q.name, q.inverted);
      DlBasic rng = DlBasic::domain_of(q.name, !q.inverted);
      if (!cl.role_disj.count({q, q})) {
        cl.role_disj.insert({q, q});
        changed = true;
      }
      DlRole qi = q.inverse();
      if (!cl.role_disj.count({qi, qi})) {
        cl.role_disj.insert({qi, qi});
        changed = true;
      }
      if (!cl.disj.count({dom, dom})) {
        cl.disj.insert({dom, dom});
        changed = true;
      }
      if (!cl.disj.count({rng, rng})) {
        cl.disj.insert({rng, rng});
        changed = true;
      }
    }
  }

  return cl;
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct NormalizedTBox {
  Dialect dialect = Dialect::ElBot;
  std::optional<ElRules> el;
  std::optional<DlLiteClosure> dl;
};

inline NormalizedTBox normalize(const std::vector<Axiom>& tbox, Dialect dialect) {
  NormalizedTBox out;
  out.dialect = dialect;
  if (dialect == Dialect::ElBot) {
    out.el.emplace();
    detail::ElNormalizer norm(*out.el);
    for (const Axiom& ax : tbox) {
      if (ax.kind != Axiom::Kind::ConceptInclusion)
        throw DialectError("role inclusions are not allowed in elbot");
      norm.add_axiom(ax.lhs, ax.rhs);
    }
  } else {
    out.dl = detail::build_dl_closure(tbox);
  }
  return out;
}

inline NormalizedTBox normalize(const KnowledgeBase& kb) { return normalize(kb.tbox, kb.dialect); }

}  // namespace abduct
