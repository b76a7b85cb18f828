#pragma once

// Brute-force ground truth at desk scale. Repairs and conflicts come from
// literal subset enumeration; repair-semantics entailment quantifies over the
// enumerated repairs; minimal hypotheses are filtered out of the full power
// set of the candidate space by pairwise comparison.
//
// The oracle deliberately shares only the classical consistency/entailment
// checker with the engines. That shared trust root is itself cross-validated
// by model_search below, which enumerates all Herbrand-style models of small
// existential-free KBs directly from the axioms.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abduct/abduction.hpp"
#include "abduct/errors.hpp"
#include "abduct/model.hpp"
#include "abduct/reason.hpp"

namespace abduct {

struct OracleBudget {
  std::size_t max_abox = 12;        // subset enumeration is 2^|A|
  std::size_t max_candidates = 16;  // hypothesis enumeration is 2^|space|
};

namespace detail {

inline void oracle_check_abox(std::size_t n, const OracleBudget& ob) {
  if (n > ob.max_abox)
    throw BudgetError("oracle: ABox of size " + std::to_string(n) +
                      " exceeds the enumeration budget of " + std::to_string(ob.max_abox));
}

// Enumeration helpers over a fixed checker universe. `within` restricts the
// sub-ABox; all subsets of it are visited.
inline std::vector<std::uint64_t> oracle_repair_masks(SubsetChecker& checker,
                                                      std::uint64_t within) {
  std::vector<std::uint64_t> out;
  std::uint64_t s = within;
  while (true) {
    if (checker.consistent(s)) {
      bool maximal = true;
      for (std::uint64_t rest = within & ~s; rest;) {
        std::uint64_t b = rest & (~rest + 1);
        rest &= rest - 1;
        if (checker.consistent(s | b)) {
          maximal = false;
          break;
        }
      }
      if (maximal) out.push_back(s);
    }
    if (s == 0) break;
    s = (s - 1) & within;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::uint64_t> oracle_conflict_masks(SubsetChecker& checker,
                                                        std::uint64_t within) {
  std::vector<std::uint64_t> out;
  std::uint64_t s = within;
  while (true) {
    if (s != 0 && !checker.consistent(s)) {
      bool minimal = true;
      for (std::uint64_t rest = s; rest;) {
        std::uint64_t b = rest & (~rest + 1);
        rest &= rest - 1;
        if (!checker.consistent(s & ~b)) {
          minimal = false;
          break;
        }
      }
      if (minimal) out.push_back(s);
    }
    if (s == 0) break;
    s = (s - 1) & within;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool oracle_entails_masks(SubsetChecker& checker, std::uint64_t within, Semantics sem,
                                 const std::string& concept_name, const std::string& individual) {
  std::vector<std::uint64_t> reps = oracle_repair_masks(checker, within);
  if (sem == Semantics::Brave) {
    for (std::uint64_t r : reps)
      if (checker.entails_atom(r, concept_name, individual)) return true;
    return false;
  }
  for (std::uint64_t r : reps)
    if (!checker.entails_atom(r, concept_name, individual)) return false;
  return true;
}

}  // namespace detail

inline AssertionSetFamily oracle_repairs(const KnowledgeBase& kb, const OracleBudget& ob = {}) {
  detail::oracle_check_abox(kb.abox.size(), ob);
  NormalizedTBox nt = normalize(kb);
  SubsetChecker checker(nt, kb.abox);
  AssertionSetFamily out;
  for (std::uint64_t m : detail::oracle_repair_masks(checker, checker.full_mask()))
    out.push_back(checker.assertions_of(m));
  std::sort(out.begin(), out.end());
  return out;
}

inline AssertionSetFamily oracle_conflicts(const KnowledgeBase& kb, const OracleBudget& ob = {}) {
  detail::oracle_check_abox(kb.abox.size(), ob);
  NormalizedTBox nt = normalize(kb);
  SubsetChecker checker(nt, kb.abox);
  AssertionSetFamily out;
  for (std::uint64_t m : detail::oracle_conflict_masks(checker, checker.full_mask()))
    out.push_back(checker.assertions_of(m));
  std::sort(out.begin(), out.end());
  return out;
}

inline bool oracle_entails(const KnowledgeBase& kb, const Biq& q, Semantics sem,
                           const OracleBudget& ob = {}) {
  if (sem == Semantics::Classical) return entails_biq(kb, q).entailed;
  if (!q.atomic()) throw ValidationError("brave and AR entailment require an atomic query");
  detail::oracle_check_abox(kb.abox.size(), ob);
  NormalizedTBox nt = normalize(kb);
  SubsetChecker checker(nt, kb.abox, {q.individual});
  return detail::oracle_entails_masks(checker, checker.full_mask(), sem, q.query.name,
                                      q.individual);
}

// All hypotheses inside the candidate space that are minimal for the given
// criterion (all hypotheses when none is given). Minimality quantifies over
// every subset of the space, per the definition.
inline AssertionSetFamily oracle_minimal_hypotheses(const AbductionProblem& p,
                                                    const CandidateSpace& space,
                                                    std::optional<Criterion> crit,
                                                    const OracleBudget& ob = {}) {
  detail::oracle_check_abox(p.kb.abox.size(), ob);
  if (space.assertions.size() > ob.max_candidates)
    throw BudgetError("oracle: candidate space of size " + std::to_string(space.assertions.size()) +
                      " exceeds the budget of " + std::to_string(ob.max_candidates));
  AssertionSet universe = set_union(p.kb.abox, space.assertions);
  NormalizedTBox nt = normalize(p.kb);
  SubsetChecker checker(nt, universe, {p.observation.individual});
  std::uint64_t base = checker.mask_of(p.kb.abox);
  std::vector<std::uint64_t> pool_bits;
  for (const Assertion& as : space.assertions) pool_bits.push_back(checker.mask_of({as}));
  std::uint64_t pool_mask = 0;
  for (std::uint64_t b : pool_bits) pool_mask |= b;

  const std::size_t bound = space.size_bound.value_or(space.assertions.size());
  std::vector<std::uint64_t> hypotheses;
  std::uint64_t s = pool_mask;
  while (true) {
    if (static_cast<std::size_t>(__builtin_popcountll(s)) <= bound &&
        detail::oracle_entails_masks(checker, base | s, p.semantics, p.observation.query.name,
                                     p.observation.individual))
      hypotheses.push_back(s);
    if (s == 0) break;
    s = (s - 1) & pool_mask;
  }

  std::map<std::uint64_t, std::vector<std::uint64_t>> conflict_cache;
  auto conflicts_of = [&](std::uint64_t h) -> const std::vector<std::uint64_t>& {
    auto it = conflict_cache.find(h);
    if (it != conflict_cache.end()) return it->second;
    return conflict_cache.emplace(h, detail::oracle_conflict_masks(checker, base | h))
        .first->second;
  };

  AssertionSetFamily out;
  for (std::uint64_t h : hypotheses) {
    bool minimal = true;
    if (crit) {
      for (std::uint64_t other : hypotheses) {
        if (other == h) continue;
        switch (*crit) {
          case Criterion::Subset:
            minimal = !((other & h) == other);  // other strictly below h
            break;
          case Criterion::Cardinality:
            minimal = !(__builtin_popcountll(other) < __builtin_popcountll(h));
            break;
          case Criterion::ConflictSubset: {
            const auto& ch = conflicts_of(h);
            const auto& co = conflicts_of(other);
            minimal = !(co.size() < ch.size() &&
                        std::includes(ch.begin(), ch.end(), co.begin(), co.end()));
            break;
          }
          case Criterion::ConflictCardinality:
            minimal = !(conflicts_of(other).size() < conflicts_of(h).size());
            break;
        }
        if (!minimal) break;
      }
    }
    if (minimal) out.push_back(checker.assertions_of(h));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Model enumeration: the trust root for the shared classical checker.
//
// Applicable to KBs whose axioms contain no existential concepts; all models
// over the mentioned individuals are then Herbrand-style assignments to the
// finitely many concept/role atoms, with asserted atoms fixed true.

struct ModelCheckResult {
  bool consistent = false;
  std::optional<bool> entailed;  // set when a query was given
};

namespace detail {

struct GroundWorld {
  std::vector<std::string> individuals;
  std::vector<std::string> concepts;
  std::vector<std::string> roles;
  // atom ids: concept atoms first (c * |ind| + i), then role atoms
  std::size_t concept_atoms() const { return concepts.size() * individuals.size(); }
  std::size_t total_atoms() const {
    return concept_atoms() + roles.size() * individuals.size() * individuals.size();
  }
  int ind_id(const std::string& a) const {
    for (std::size_t i = 0; i < individuals.size(); ++i)
      if (individuals[i] == a) return static_cast<int>(i);
    return -1;
  }
  int concept_atom(int c, int i) const { return c * static_cast<int>(individuals.size()) + i; }
  int role_atom(int r, int i, int j) const {
    int n = static_cast<int>(individuals.size());
    return static_cast<int>(concept_atoms()) + (r * n + i) * n + j;
  }
};

inline bool concept_free_of_exists(const Concept& c) {
  if (c.kind == Concept::Kind::Exists) return false;
  for (const Concept& child : c.children)
    if (!concept_free_of_exists(child)) return false;
  return true;
}

inline bool eval_concept(const GroundWorld& w, const Concept& c, std::uint64_t world, int ind,
                         const std::map<std::string, int>& concept_ids) {
  switch (c.kind) {
    case Concept::Kind::Top:
      return true;
    case Concept::Kind::Bot:
      return false;
    case Concept::Kind::Name: {
      auto it = concept_ids.find(c.name);
      if (it == concept_ids.end()) return false;
      return (world >> w.concept_atom(it->second, ind)) & 1;
    }
    case Concept::Kind::And:
      for (const Concept& child : c.children)
        if (!eval_concept(w, child, world, ind, concept_ids)) return false;
      return true;
    case Concept::Kind::Not:
      return !eval_concept(w, c.children[0], world, ind, concept_ids);
    case Concept::Kind::Exists:
      throw InternalError("model enumeration does not handle existentials");
  }
  return false;
}

}  // namespace detail

// Enumerates all models over the KB's individuals (plus the query individual)
// and evaluates consistency and, when given, entailment of the query. Returns
// nullopt when the KB or query contains existential concepts or the atom
// count exceeds max_atoms (the enumeration is 2^atoms).
inline std::optional<ModelCheckResult> model_search(const KnowledgeBase& kb,
                                                    const std::optional<Biq>& query = {},
                                                    std::size_t max_atoms = 20) {
  for (const Axiom& ax : kb.tbox) {
    if (ax.kind == Axiom::Kind::ConceptInclusion &&
        (!detail::concept_free_of_exists(ax.lhs) || !detail::concept_free_of_exists(ax.rhs)))
      return std::nullopt;
  }
  if (query && !detail::concept_free_of_exists(query->query)) return std::nullopt;

  Signature sig = signature_of(kb);
  if (query) {
    detail::collect_names(query->query, sig);
    sig.individuals.insert(query->individual);
  }
  detail::GroundWorld w;
  w.individuals.assign(sig.individuals.begin(), sig.individuals.end());
  w.concepts.assign(sig.concepts.begin(), sig.concepts.end());
  w.roles.assign(sig.roles.begin(), sig.roles.end());
  if (w.individuals.empty()) w.individuals.push_back("e0");  // domains are nonempty
  if (w.total_atoms() > max_atoms) return std::nullopt;

  std::map<std::string, int> concept_ids, role_ids;
  for (std::size_t i = 0; i < w.concepts.size(); ++i) concept_ids[w.concepts[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < w.roles.size(); ++i) role_ids[w.roles[i]] = static_cast<int>(i);

  std::uint64_t asserted = 0;
  for (const Assertion& as : kb.abox) {
    if (as.is_role)
      asserted |= std::uint64_t{1} << w.role_atom(role_ids.at(as.pred), w.ind_id(as.a), w.ind_id(as.b));
    else
      asserted |= std::uint64_t{1} << w.concept_atom(concept_ids.at(as.pred), w.ind_id(as.a));
  }

  auto role_holds = [&](std::uint64_t world, const RoleExpr& r, int i, int j) {
    auto it = role_ids.find(r.name);
    if (it == role_ids.end()) return false;
    if (r.inverted) std::swap(i, j);
    return ((world >> w.role_atom(it->second, i, j)) & 1) != 0;
  };

  auto satisfies = [&](std::uint64_t world) {
    const int n = static_cast<int>(w.individuals.size());
    for (const Axiom& ax : kb.tbox) {
      if (ax.kind == Axiom::Kind::ConceptInclusion) {
        for (int i = 0; i < n; ++i) {
          if (detail::eval_concept(w, ax.lhs, world, i, concept_ids) &&
              !detail::eval_concept(w, ax.rhs, world, i, concept_ids))
            return false;
        }
      } else {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            bool lhs = role_holds(world, ax.rlhs, i, j);
            bool rhs = role_holds(world, RoleExpr{ax.rrhs.name, ax.rrhs.inverted, false}, i, j);
            if (ax.rrhs.negated ? (lhs && rhs) : (lhs && !rhs)) return false;
          }
      }
    }
    return true;
  };

  ModelCheckResult result;
  result.consistent = false;
  bool all_entail = true;
  const std::size_t atoms = w.total_atoms();
  const std::uint64_t free_mask = ((atoms == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << atoms) - 1))) & ~asserted;
  // Iterate over assignments of the free atoms.
  std::uint64_t free_sub = free_mask;
  while (true) {
    std::uint64_t world = asserted | free_sub;
    if (satisfies(world)) {
      result.consistent = true;
      if (query) {
        int qi = w.ind_id(query->individual);
        if (!detail::eval_concept(w, query->query, world, qi, concept_ids)) all_entail = false;
      }
    }
    if (free_sub == 0) break;
    free_sub = (free_sub - 1) & free_mask;
  }
  if (query) result.entailed = result.consistent ? all_entail : true;  // explosion when inconsistent
  return result;
}

}  // namespace abduct
