#pragma once

// Classical consistency checking and Boolean instance query entailment.
//
// EL: completion-rule saturation over the asserted individuals plus one
//     representative node per concept name. Consistency means no asserted
//     individual derives Bot; an atomic query B(a) is entailed iff B is in
//     the saturated label of a.
//
// DL-Lite: consistency reduces to instantiating the negative closure with
//     single assertions and pairs; entailment of an atomic query has a
//     single-assertion support whenever the ABox is consistent.
//
// SubsetChecker answers consistency and atomic entailment for arbitrary
// subsets of a fixed assertion universe (given as a bitmask), memoizing per
// mask. This is the workhorse behind conflict, repair and hypothesis search.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "abduct/errors.hpp"
#include "abduct/model.hpp"
#include "abduct/normalize.hpp"

namespace abduct {

namespace detail {

// Grow-only bitset over concept-name ids.
class NameBits {
 public:
  void resize(std::size_t bits) { words_.resize((bits + 63) / 64, 0); }
  bool get(int i) const { return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1; }
  // Returns true when the bit was newly set.
  bool set(int i) {
    std::uint64_t& w = words_[static_cast<std::size_t>(i) >> 6];
    std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (w & m) return false;
    w |= m;
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Saturated labels for a set of EL assertions. Entities are the mentioned
// individuals followed by one representative node per TBox concept name.
// Concept names asserted in the ABox but absent from the TBox are interned
// locally; they carry no rules but still answer membership queries.
struct ElSaturation {
  std::vector<std::string> individuals;          // entity 0..n-1
  std::map<std::string, int> individual_ids;
  std::map<std::string, int> name_ids;           // TBox names plus local extras
  std::vector<NameBits> label;                   // entity -> derived concept names
  bool consistent = true;                        // no asserted individual derives Bot

  int individual_id(const std::string& a) const {
    auto it = individual_ids.find(a);
    return it == individual_ids.end() ? -1 : it->second;
  }

  bool holds(const std::string& individual, const std::string& concept_name) const {
    int id = individual_id(individual);
    if (id < 0) return false;  // unmentioned individual: only Top holds
    auto it = name_ids.find(concept_name);
    if (it == name_ids.end()) return false;
    return label[static_cast<std::size_t>(id)].get(it->second);
  }
};

inline ElSaturation el_saturate(const ElRules& rules,
                                const std::vector<const Assertion*>& assertions,
                                const std::vector<std::string>& extra_individuals) {
  ElSaturation sat;
  auto intern_ind = [&sat](const std::string& a) {
    auto it = sat.individual_ids.find(a);
    if (it != sat.individual_ids.end()) return it->second;
    int id = static_cast<int>(sat.individuals.size());
    sat.individuals.push_back(a);
    sat.individual_ids.emplace(a, id);
    return id;
  };
  for (const Assertion* as : assertions) {
    intern_ind(as->a);
    if (as->is_role) intern_ind(as->b);
  }
  for (const std::string& a : extra_individuals) intern_ind(a);

  sat.name_ids = rules.name_ids;
  int n_names = static_cast<int>(rules.names.size());
  auto intern_name = [&sat, &n_names](const std::string& n) {
    auto it = sat.name_ids.find(n);
    if (it != sat.name_ids.end()) return it->second;
    int id = n_names++;
    sat.name_ids.emplace(n, id);
    return id;
  };
  for (const Assertion* as : assertions)
    if (!as->is_role) intern_name(as->pred);

  const int n_ind = static_cast<int>(sat.individuals.size());
  const int n_rule_names = static_cast<int>(rules.names.size());
  const int n_entities = n_ind + n_rule_names;  // name node for TBox name c at n_ind + c

  std::vector<NameBits> label(static_cast<std::size_t>(n_entities));
  for (auto& bits : label) bits.resize(static_cast<std::size_t>(n_names));
  for (int e = 0; e < n_entities; ++e) label[static_cast<std::size_t>(e)].set(ElRules::kTop);
  for (int c = 0; c < n_rule_names; ++c) label[static_cast<std::size_t>(n_ind + c)].set(c);

  // Role edges; derived edges point at name nodes.
  const int n_roles = static_cast<int>(rules.roles.size());
  std::vector<std::vector<std::pair<int, int>>> edges(static_cast<std::size_t>(n_roles));
  for (const Assertion* as : assertions) {
    if (as->is_role) {
      auto it = rules.role_ids.find(as->pred);
      if (it == rules.role_ids.end()) continue;  // role not mentioned in the TBox: inert
      edges[static_cast<std::size_t>(it->second)].push_back(
          {sat.individual_ids.at(as->a), sat.individual_ids.at(as->b)});
    } else {
      label[static_cast<std::size_t>(sat.individual_ids.at(as->a))].set(intern_name(as->pred));
    }
  }
  // Edge presence per (role, from, to) to avoid duplicates.
  std::vector<std::map<std::pair<int, int>, bool>> edge_seen(static_cast<std::size_t>(n_roles));
  for (int r = 0; r < n_roles; ++r)
    for (auto& e : edges[static_cast<std::size_t>(r)]) edge_seen[static_cast<std::size_t>(r)][e] = true;

  bool changed = true;
  while (changed) {
    changed = false;
    for (const ElRules::Sub& rule : rules.subs)
      for (int e = 0; e < n_entities; ++e) {
        auto& bits = label[static_cast<std::size_t>(e)];
        if (bits.get(rule.lhs) && bits.set(rule.rhs)) changed = true;
      }
    for (const ElRules::Conj& rule : rules.conjs)
      for (int e = 0; e < n_entities; ++e) {
        auto& bits = label[static_cast<std::size_t>(e)];
        if (bits.get(rule.lhs1) && bits.get(rule.lhs2) && bits.set(rule.rhs)) changed = true;
      }
    for (const ElRules::ExistsRight& rule : rules.ex_right)
      for (int e = 0; e < n_entities; ++e) {
        if (!label[static_cast<std::size_t>(e)].get(rule.lhs)) continue;
        std::pair<int, int> edge{e, n_ind + rule.filler};
        auto& seen = edge_seen[static_cast<std::size_t>(rule.role)];
        if (!seen.count(edge)) {
          seen[edge] = true;
          edges[static_cast<std::size_t>(rule.role)].push_back(edge);
          changed = true;
        }
      }
    for (const ElRules::ExistsLeft& rule : rules.ex_left)
      for (const auto& [from, to] : edges[static_cast<std::size_t>(rule.role)]) {
        if (label[static_cast<std::size_t>(to)].get(rule.filler) &&
            label[static_cast<std::size_t>(from)].set(rule.rhs))
          changed = true;
      }
    // Bot propagates along role edges: an element forced into an unsatisfiable
    // successor is itself unsatisfiable.
    for (int r = 0; r < n_roles; ++r)
      for (const auto& [from, to] : edges[static_cast<std::size_t>(r)]) {
        if (label[static_cast<std::size_t>(to)].get(ElRules::kBot) &&
            label[static_cast<std::size_t>(from)].set(ElRules::kBot))
          changed = true;
      }
  }

  sat.label = std::move(label);
  sat.consistent = true;
  for (int i = 0; i < n_ind; ++i)
    if (sat.label[static_cast<std::size_t>(i)].get(ElRules::kBot)) sat.consistent = false;
  return sat;
}

// The derived basic-concept memberships of a single DL-Lite assertion, before
// closure under positive inclusions (the closure is folded into the negative
// closure, so immediate atoms suffice for clash detection).
struct DlAtoms {
  // (basic concept, individual) memberships
  std::vector<std::pair<DlBasic, std::string>> concepts;
  // (role with direction, (from, to)) for role assertions
  std::vector<std::pair<DlRole, std::pair<std::string, std::string>>> roles;
};

inline DlAtoms dl_atoms(const Assertion& as) {
  DlAtoms atoms;
  if (as.is_role) {
    atoms.concepts.push_back({DlBasic::domain_of(as.pred, false), as.a});
    atoms.concepts.push_back({DlBasic::domain_of(as.pred, true), as.b});
    atoms.roles.push_back({DlRole{as.pred, false}, {as.a, as.b}});
    atoms.roles.push_back({DlRole{as.pred, true}, {as.b, as.a}});
  } else {
    atoms.concepts.push_back({DlBasic::concept_name(as.pred), as.a});
  }
  return atoms;
}

inline bool dl_clash(const DlLiteClosure& cl, const DlAtoms& x, const DlAtoms& y) {
  for (const auto& [b1, i1] : x.concepts)
    for (const auto& [b2, i2] : y.concepts)
      if (i1 == i2 && cl.disjoint(b1, b2)) return true;
  for (const auto& [q1, p1] : x.roles)
    for (const auto& [q2, p2] : y.roles)
      if (p1 == p2 && cl.role_disjoint(q1, q2)) return true;
  return false;
}

// Does the single assertion entail basic concept `goal` at `individual`?
inline bool dl_supports(const DlLiteClosure& cl, const DlAtoms& atoms, const DlBasic& goal,
                        const std::string& individual) {
  for (const auto& [b, i] : atoms.concepts)
    if (i == individual && cl.subsumes(b, goal)) return true;
  return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Whole-KB operations

struct EntailmentResult {
  bool entailed = false;
  // True when the KB is classically inconsistent and the answer is by
  // explosion rather than derivation.
  bool explosion = false;
};

// Consistency and entailment against an explicit assertion list, reusing a
// prepared normalization. `query` must be atomic for DL-Lite dialects unless
// basic; EL queries may be arbitrary concepts but must be normalized by the
// caller into `rules` (see entails_biq for the public path).

inline bool is_consistent(const NormalizedTBox& nt, const AssertionSet& abox) {
  if (nt.dialect == Dialect::ElBot) {
    std::vector<const Assertion*> ptrs;
    ptrs.reserve(abox.size());
    for (const Assertion& as : abox) ptrs.push_back(&as);
    return detail::el_saturate(*nt.el, ptrs, {}).consistent;
  }
  const DlLiteClosure& cl = *nt.dl;
  std::vector<detail::DlAtoms> atoms;
  atoms.reserve(abox.size());
  for (const Assertion& as : abox) atoms.push_back(detail::dl_atoms(as));
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (detail::dl_clash(cl, atoms[i], atoms[i])) return false;
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (detail::dl_clash(cl, atoms[i], atoms[j])) return false;
  }
  return true;
}

inline bool is_consistent(const KnowledgeBase& kb) {
  return is_consistent(normalize(kb), kb.abox);
}

// True when the TBox alone admits no model (possible in EL via Top).
inline bool is_incoherent_tbox(const NormalizedTBox& nt) {
  if (nt.dialect != Dialect::ElBot) return false;
  std::vector<const Assertion*> empty;
  detail::ElSaturation sat = detail::el_saturate(*nt.el, empty, {});
  // The Top node stands for an arbitrary domain element.
  const int top_node = 0 /* no individuals */ + ElRules::kTop;
  return sat.label[static_cast<std::size_t>(top_node)].get(ElRules::kBot);
}

inline EntailmentResult entails_biq(const KnowledgeBase& kb, const Biq& q) {
  validate_query(kb, q);
  if (kb.dialect == Dialect::ElBot) {
    // Normalize the TBox together with query [= __q and test __q(a).
    std::vector<Axiom> axioms = kb.tbox;
    axioms.push_back(Axiom::sub(q.query, Concept::make_name("__q")));
    NormalizedTBox nt = normalize(axioms, kb.dialect);
    std::vector<const Assertion*> ptrs;
    for (const Assertion& as : kb.abox) ptrs.push_back(&as);
    detail::ElSaturation sat = detail::el_saturate(*nt.el, ptrs, {q.individual});
    if (!sat.consistent) return {true, true};
    return {sat.holds(q.individual, "__q"), false};
  }
  NormalizedTBox nt = normalize(kb);
  if (!is_consistent(nt, kb.abox)) return {true, true};
  DlBasic goal = detail::dl_basic_of(q.query);
  for (const Assertion& as : kb.abox)
    if (detail::dl_supports(*nt.dl, detail::dl_atoms(as), goal, q.individual)) return {true, false};
  return {false, false};
}

// ---------------------------------------------------------------------------
// SubsetChecker

class SubsetChecker {
 public:
  static constexpr std::size_t kMaxUniverse = 64;

  // `universe` is the assertion pool subsets refer to; `atom_individuals` are
  // additional individuals that atomic queries may mention.
  SubsetChecker(const NormalizedTBox& nt, AssertionSet universe,
                std::vector<std::string> extra_individuals = {})
      : nt_(nt), universe_(std::move(universe)), extra_individuals_(std::move(extra_individuals)) {
    if (universe_.size() > kMaxUniverse)
      throw BudgetError("assertion universe of size " + std::to_string(universe_.size()) +
                        " exceeds the exhaustive-analysis limit of " + std::to_string(kMaxUniverse));
    if (nt_.dialect != Dialect::ElBot) {
      atoms_.reserve(universe_.size());
      for (const Assertion& as : universe_) atoms_.push_back(detail::dl_atoms(as));
      self_bad_ = 0;
      clash_.assign(universe_.size(), 0);
      for (std::size_t i = 0; i < universe_.size(); ++i) {
        if (detail::dl_clash(*nt_.dl, atoms_[i], atoms_[i])) self_bad_ |= bit(i);
        for (std::size_t j = i + 1; j < universe_.size(); ++j)
          if (detail::dl_clash(*nt_.dl, atoms_[i], atoms_[j])) {
            clash_[i] |= bit(j);
            clash_[j] |= bit(i);
          }
      }
    }
  }

  const AssertionSet& universe() const { return universe_; }
  std::size_t size() const { return universe_.size(); }
  std::uint64_t full_mask() const {
    return universe_.size() == 64 ? ~std::uint64_t{0} : (bit(universe_.size()) - 1);
  }

  std::uint64_t mask_of(const AssertionSet& subset) const {
    std::uint64_t m = 0;
    for (const Assertion& as : subset) {
      auto it = std::lower_bound(universe_.begin(), universe_.end(), as);
      if (it == universe_.end() || *it != as)
        throw InternalError("assertion outside the prepared universe");
      m |= bit(static_cast<std::size_t>(it - universe_.begin()));
    }
    return m;
  }

  AssertionSet assertions_of(std::uint64_t mask) const {
    AssertionSet out;
    for (std::size_t i = 0; i < universe_.size(); ++i)
      if (mask & bit(i)) out.push_back(universe_[i]);
    return out;
  }

  bool consistent(std::uint64_t mask) {
    if (nt_.dialect != Dialect::ElBot) {
      if (mask & self_bad_) return false;
      std::uint64_t rest = mask;
      while (rest) {
        std::size_t i = static_cast<std::size_t>(__builtin_ctzll(rest));
        rest &= rest - 1;
        if (clash_[i] & mask) return false;
      }
      return true;
    }
    return el_result(mask).consistent;
  }

  // Entailment of an atomic concept query, precondition: consistent(mask).
  bool entails_atom(std::uint64_t mask, const std::string& concept_name,
                    const std::string& individual) {
    if (nt_.dialect == Dialect::ElBot) {
      const detail::ElSaturation& sat = el_result(mask);
      return sat.holds(individual, concept_name);
    }
    DlBasic goal = DlBasic::concept_name(concept_name);
    std::uint64_t supports = support_mask(goal, individual);
    return (mask & supports) != 0;
  }

 private:
  static std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

  const detail::ElSaturation& el_result(std::uint64_t mask) {
    auto it = el_memo_.find(mask);
    if (it != el_memo_.end()) return it->second;
    std::vector<const Assertion*> ptrs;
    for (std::size_t i = 0; i < universe_.size(); ++i)
      if (mask & bit(i)) ptrs.push_back(&universe_[i]);
    std::vector<std::string> extras = extra_individuals_;
    detail::ElSaturation sat = detail::el_saturate(*nt_.el, ptrs, extras);
    return el_memo_.emplace(mask, std::move(sat)).first->second;
  }

  std::uint64_t support_mask(const DlBasic& goal, const std::string& individual) {
    auto key = std::make_pair(goal, individual);
    auto it = dl_support_memo_.find(key);
    if (it != dl_support_memo_.end()) return it->second;
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < universe_.size(); ++i)
      if (detail::dl_supports(*nt_.dl, atoms_[i], goal, individual)) m |= bit(i);
    dl_support_memo_.emplace(key, m);
    return m;
  }

  const NormalizedTBox& nt_;
  AssertionSet universe_;
  std::vector<std::string> extra_individuals_;

  // DL-Lite precomputation
  std::vector<detail::DlAtoms> atoms_;
  std::uint64_t self_bad_ = 0;
  std::vector<std::uint64_t> clash_;
  std::map<std::pair<DlBasic, std::string>, std::uint64_t> dl_support_memo_;

  // EL memoization
  std::unordered_map<std::uint64_t, detail::ElSaturation> el_memo_;
};

}  // namespace abduct
