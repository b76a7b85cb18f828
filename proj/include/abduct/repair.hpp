#pragma once

// Conflicts, repairs and inconsistency-tolerant entailment.
//
// A conflict is a subset-minimal inconsistent subset of the ABox; a repair is
// a subset-maximal consistent subset. Complements of repairs are exactly the
// minimal hitting sets of the conflict family, which is how repairs are
// computed here.
//
// DL-Lite conflicts have at most two elements and are found by scanning
// singletons and pairs against the negative closure. EL conflicts are
// enumerated exhaustively by seed-shrink extraction driven by a hitting-set
// map over the subset lattice: an unexplored seed is either grown into a
// maximal consistent set or shrunk (by deletion-minimization) into a new
// conflict, and each outcome prunes the map until no seed remains.
//
// RepairCore fixes an assertion universe once (the ABox plus any candidate
// additions) and serves conflict/repair/entailment questions for arbitrary
// sub-ABoxes of it: a conflict of a sub-ABox is precisely a conflict of the
// universe contained in it, so the expensive enumeration happens once.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "abduct/errors.hpp"
#include "abduct/model.hpp"
#include "abduct/normalize.hpp"
#include "abduct/reason.hpp"

namespace abduct {

struct Budget {
  std::size_t max_repairs = 1'000'000;             // repair/hitting-set enumeration cap
  std::size_t max_subsets = std::size_t{1} << 20;  // hypothesis-search subset cap
};

using AssertionSetFamily = std::vector<AssertionSet>;

namespace detail {

// --- tiny SAT solver over <= 64 variables, used as the exploration map ------

struct MapClause {
  std::uint64_t pos = 0;  // satisfied when a variable in pos is true
  std::uint64_t neg = 0;  // or a variable in neg is false
};

// Finds any model of the clause set, branching true-first so seeds start
// large. Returns std::nullopt when unsatisfiable.
inline std::optional<std::uint64_t> map_solve(const std::vector<MapClause>& clauses,
                                              std::uint64_t var_mask) {
  std::uint64_t assigned_true = 0, assigned_false = 0;

  std::function<bool()> solve = [&]() -> bool {
    bool propagated = true;
    while (propagated) {
      propagated = false;
      for (const MapClause& c : clauses) {
        if ((c.pos & assigned_true) || (c.neg & assigned_false)) continue;  // satisfied
        std::uint64_t free_pos = c.pos & var_mask & ~assigned_false & ~assigned_true;
        std::uint64_t free_neg = c.neg & var_mask & ~assigned_true & ~assigned_false;
        int free_count = __builtin_popcountll(free_pos) + __builtin_popcountll(free_neg);
        if (free_count == 0) return false;  // falsified
        if (free_count == 1) {
          if (free_pos)
            assigned_true |= free_pos;
          else
            assigned_false |= free_neg;
          propagated = true;
        }
      }
    }
    std::uint64_t unassigned = var_mask & ~assigned_true & ~assigned_false;
    if (!unassigned) return true;
    std::uint64_t pick = unassigned & (~unassigned + 1);  // lowest unassigned bit
    std::uint64_t save_true = assigned_true, save_false = assigned_false;
    assigned_true |= pick;
    if (solve()) return true;
    assigned_true = save_true;
    assigned_false = save_false | pick;
    if (solve()) return true;
    assigned_true = save_true;
    assigned_false = save_false;
    return false;
  };

  if (!solve()) return std::nullopt;
  return assigned_true;
}

// Deletion-minimizes an inconsistent subset into a conflict.
inline std::uint64_t shrink_to_conflict(SubsetChecker& checker, std::uint64_t mask) {
  for (std::size_t i = 0; i < checker.size(); ++i) {
    std::uint64_t b = std::uint64_t{1} << i;
    if (!(mask & b)) continue;
    if (!checker.consistent(mask & ~b)) mask &= ~b;
  }
  return mask;
}

// Grows a consistent subset into a subset of `within` that is maximal
// consistent relative to `within`.
inline std::uint64_t grow_to_maximal(SubsetChecker& checker, std::uint64_t mask,
                                     std::uint64_t within) {
  for (std::size_t i = 0; i < checker.size(); ++i) {
    std::uint64_t b = std::uint64_t{1} << i;
    if ((mask & b) || !(within & b)) continue;
    if (checker.consistent(mask | b)) mask |= b;
  }
  return mask;
}

// Exhaustive enumeration of all conflicts inside `within` (used for EL; the
// DL-Lite path below is cheaper). Returns conflict masks, sorted.
inline std::vector<std::uint64_t> enumerate_conflict_masks(SubsetChecker& checker,
                                                           std::uint64_t within) {
  std::vector<std::uint64_t> conflicts;
  std::vector<MapClause> map;
  while (auto seed = map_solve(map, within)) {
    std::uint64_t s = *seed;
    if (checker.consistent(s)) {
      std::uint64_t mss = grow_to_maximal(checker, s, within);
      // Every future seed must contain something outside this maximal set.
      MapClause block;
      block.pos = within & ~mss;
      if (block.pos == 0) break;  // the whole universe is consistent
      map.push_back(block);
    } else {
      std::uint64_t mus = shrink_to_conflict(checker, s);
      conflicts.push_back(mus);
      // Every future seed must drop something from this conflict.
      MapClause block;
      block.neg = mus;
      map.push_back(block);
    }
  }
  std::sort(conflicts.begin(), conflicts.end());
  return conflicts;
}

// DL-Lite conflicts inside `within`: self-inconsistent singletons plus
// clashing pairs whose members are individually consistent.
inline std::vector<std::uint64_t> dl_conflict_masks(SubsetChecker& checker, std::uint64_t within) {
  std::vector<std::uint64_t> out;
  const std::size_t n = checker.size();
  std::vector<bool> selfbad(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t b = std::uint64_t{1} << i;
    if (!(within & b)) continue;
    if (!checker.consistent(b)) {
      selfbad[i] = true;
      out.push_back(b);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(within & (std::uint64_t{1} << i)) || selfbad[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(within & (std::uint64_t{1} << j)) || selfbad[j]) continue;
      std::uint64_t m = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
      if (!checker.consistent(m)) out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Enumerates the minimal hitting sets of `family` over the bits of
// `universe_mask`, invoking `emit` for each. `emit` returns false to stop
// early; the function then also returns false.
inline bool for_each_minimal_hitting_set(const std::vector<std::uint64_t>& family,
                                         std::uint64_t universe_mask,
                                         const std::function<bool(std::uint64_t)>& emit) {
  // Branch on the elements of the first un-hit set; forbidding the elements
  // tried earlier at a node keeps the enumeration duplicate-free. Candidates
  // that survive must still pass a minimality check: every chosen element
  // needs a set it alone hits.
  std::function<bool(std::uint64_t, std::uint64_t)> rec =
      [&](std::uint64_t hit, std::uint64_t forbidden) -> bool {
    const std::uint64_t* unhit = nullptr;
    for (const std::uint64_t& s : family) {
      if (!(s & hit)) {
        unhit = &s;
        break;
      }
    }
    if (!unhit) {
      for (std::uint64_t rest = hit; rest;) {
        std::uint64_t b = rest & (~rest + 1);
        rest &= rest - 1;
        bool witnessed = false;
        for (const std::uint64_t& s : family)
          if ((s & hit) == b) {
            witnessed = true;
            break;
          }
        if (!witnessed) return true;  // not minimal; another branch covers it
      }
      return emit(hit);
    }
    std::uint64_t tried = 0;
    for (std::uint64_t rest = *unhit & universe_mask & ~forbidden; rest;) {
      std::uint64_t b = rest & (~rest + 1);
      rest &= rest - 1;
      if (!rec(hit | b, forbidden | tried)) return false;
      tried |= b;
    }
    return true;
  };
  return rec(0, 0);
}

}  // namespace detail

// ---------------------------------------------------------------------------

// Fixes a TBox and an assertion universe; answers conflict, repair and
// entailment questions for arbitrary sub-ABoxes (given as bitmasks over the
// universe). Construction fails on incoherent TBoxes.
class RepairCore {
 public:
  RepairCore(const KnowledgeBase& kb, AssertionSet universe,
             std::vector<std::string> extra_individuals = {})
      : nt_(normalize(kb)), checker_(nt_, std::move(universe), std::move(extra_individuals)) {
    if (is_incoherent_tbox(nt_))
      throw IncoherentTboxError("the TBox is unsatisfiable on its own; no repairs exist");
  }

  // Convenience: universe = the KB's own ABox.
  explicit RepairCore(const KnowledgeBase& kb, std::vector<std::string> extra_individuals = {})
      : RepairCore(kb, kb.abox, std::move(extra_individuals)) {}

  SubsetChecker& checker() { return checker_; }
  const NormalizedTBox& normalized() const { return nt_; }

  // Conflicts of the sub-ABox described by `abox_mask`, memoized per mask.
  // DL-Lite conflicts are scanned once over the whole universe and filtered;
  // EL conflicts are enumerated per sub-ABox (sub-ABoxes stay small even when
  // the universe carries a large candidate pool).
  const std::vector<std::uint64_t>& conflict_masks(std::uint64_t abox_mask) {
    auto it = conflict_memo_.find(abox_mask);
    if (it != conflict_memo_.end()) return it->second;
    std::vector<std::uint64_t> fam;
    if (nt_.dialect == Dialect::ElBot) {
      fam = detail::enumerate_conflict_masks(checker_, abox_mask);
    } else {
      if (!dl_scanned_) {
        dl_universe_conflicts_ = detail::dl_conflict_masks(checker_, checker_.full_mask());
        dl_scanned_ = true;
      }
      for (std::uint64_t c : dl_universe_conflicts_)
        if ((c & abox_mask) == c) fam.push_back(c);
    }
    return conflict_memo_.emplace(abox_mask, std::move(fam)).first->second;
  }

  // Calls fn with each repair of the sub-ABox, as a mask; stops early when fn
  // returns false.
  bool for_each_repair(std::uint64_t abox_mask, const Budget& budget,
                       const std::function<bool(std::uint64_t)>& fn) {
    std::vector<std::uint64_t> family = conflict_masks(abox_mask);
    std::size_t count = 0;
    return detail::for_each_minimal_hitting_set(family, abox_mask, [&](std::uint64_t removal) {
      if (++count > budget.max_repairs)
        throw BudgetError("repair enumeration exceeded the cap of " +
                          std::to_string(budget.max_repairs));
      return fn(abox_mask & ~removal);
    });
  }

  // Brave/AR entailment of an atomic concept query over the sub-ABox. The
  // verdict is memoized; when a witness is requested the repair search runs
  // directly (a brave witness is an entailing repair, an AR counterexample a
  // refuting one).
  bool entails_atom(std::uint64_t abox_mask, Semantics sem, const std::string& concept_name,
                    const std::string& individual, const Budget& budget,
                    std::optional<AssertionSet>* witness = nullptr) {
    if (witness) witness->reset();
    auto key = std::make_tuple(abox_mask, sem, concept_name, individual);
    auto it = entail_memo_.find(key);
    if (it != entail_memo_.end() && !witness) return it->second;
    bool verdict;
    if (sem == Semantics::Brave) {
      bool found = false;
      for_each_repair(abox_mask, budget, [&](std::uint64_t repair) {
        if (checker_.entails_atom(repair, concept_name, individual)) {
          found = true;
          if (witness) *witness = checker_.assertions_of(repair);
          return false;
        }
        return true;
      });
      verdict = found;
    } else {
      bool refuted = false;
      for_each_repair(abox_mask, budget, [&](std::uint64_t repair) {
        if (!checker_.entails_atom(repair, concept_name, individual)) {
          refuted = true;
          if (witness) *witness = checker_.assertions_of(repair);
          return false;
        }
        return true;
      });
      verdict = !refuted;
    }
    entail_memo_[key] = verdict;
    return verdict;
  }

  AssertionSetFamily family_of(const std::vector<std::uint64_t>& masks) const {
    AssertionSetFamily out;
    out.reserve(masks.size());
    for (std::uint64_t m : masks) out.push_back(checker_.assertions_of(m));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  NormalizedTBox nt_;
  SubsetChecker checker_;
  std::map<std::uint64_t, std::vector<std::uint64_t>> conflict_memo_;
  bool dl_scanned_ = false;
  std::vector<std::uint64_t> dl_universe_conflicts_;
  std::map<std::tuple<std::uint64_t, Semantics, std::string, std::string>, bool> entail_memo_;
};

// ---------------------------------------------------------------------------
// Public whole-KB operations

inline AssertionSetFamily conflicts(const KnowledgeBase& kb) {
  RepairCore core(kb);
  return core.family_of(core.conflict_masks(core.checker().full_mask()));
}

inline AssertionSetFamily repairs(const KnowledgeBase& kb, const Budget& budget = {}) {
  RepairCore core(kb);
  std::vector<std::uint64_t> out;
  core.for_each_repair(core.checker().full_mask(), budget, [&](std::uint64_t m) {
    out.push_back(m);
    return true;
  });
  return core.family_of(out);
}

// Entailment under classical, brave or AR semantics. Brave and AR require an
// atomic query. When `witness` is non-null it receives, for a positive brave
// answer, a repair entailing the query, and for a negative AR answer, a
// repair refuting it.
inline bool entails(const KnowledgeBase& kb, const Biq& q, Semantics sem,
                    const Budget& budget = {}, std::optional<AssertionSet>* witness = nullptr) {
  if (witness) witness->reset();
  if (sem == Semantics::Classical) return entails_biq(kb, q).entailed;
  if (!q.atomic()) throw ValidationError("brave and AR entailment require an atomic query");
  RepairCore core(kb, {q.individual});
  return core.entails_atom(core.checker().full_mask(), sem, q.query.name, q.individual, budget,
                           witness);
}

// True when every repair of kb stays consistent together with `extra`.
// `counterexample` (if given) receives a repair that becomes inconsistent.
inline bool compatible_with_all_repairs(const KnowledgeBase& kb, const AssertionSet& extra,
                                        const Budget& budget = {},
                                        std::optional<AssertionSet>* counterexample = nullptr) {
  if (counterexample) counterexample->reset();
  AssertionSet extra_sorted = make_assertion_set(extra);
  RepairCore core(kb, set_union(kb.abox, extra_sorted));
  std::uint64_t base_mask = core.checker().mask_of(kb.abox);
  std::uint64_t extra_mask = core.checker().mask_of(extra_sorted);
  bool ok = true;
  core.for_each_repair(base_mask, budget, [&](std::uint64_t repair) {
    if (!core.checker().consistent(repair | extra_mask)) {
      ok = false;
      if (counterexample) *counterexample = core.checker().assertions_of(repair);
      return false;
    }
    return true;
  });
  return ok;
}

// Conflict-confinement: adding H to the ABox changes no conflicts. Checked
// two ways which must agree: conflict-set equality, and compatibility of all
// repairs with the genuinely new part of H (assertions already in the ABox
// cannot create new conflicts).
inline bool is_conflict_confining(const KnowledgeBase& kb, const AssertionSet& hypothesis,
                                  const Budget& budget = {}) {
  AssertionSet h = make_assertion_set(hypothesis);
  RepairCore core(kb, set_union(kb.abox, h));
  std::uint64_t base_mask = core.checker().mask_of(kb.abox);
  std::uint64_t ext_mask = base_mask | core.checker().mask_of(h);
  bool by_conflicts = core.conflict_masks(ext_mask) == core.conflict_masks(base_mask);

  AssertionSet new_part = set_difference(h, kb.abox);
  std::uint64_t new_mask = core.checker().mask_of(new_part);
  bool by_repairs = true;
  core.for_each_repair(base_mask, budget, [&](std::uint64_t repair) {
    if (!core.checker().consistent(repair | new_mask)) {
      by_repairs = false;
      return false;
    }
    return true;
  });
  if (by_conflicts != by_repairs) throw InternalError("conflict-confinement checks disagree");
  return by_conflicts;
}

// Brave entailment of the negation of an atomic query: some repair, together
// with the query assertion, is inconsistent. The query concept A is paired
// with a fresh concept A' through a disjointness axiom (A n A' [= Bot for EL,
// A [= not A' for DL-Lite); repairs are computed against the extended TBox,
// under which refuting A(a) and clashing with the fresh marker coincide.
inline bool brave_entails_negated(const KnowledgeBase& kb, const Biq& q,
                                  const Budget& budget = {}) {
  if (!q.atomic()) throw ValidationError("negated brave entailment requires an atomic query");
  std::string fresh = "__neg_" + q.query.name;
  KnowledgeBase gadget = kb;
  if (kb.dialect == Dialect::ElBot) {
    gadget.tbox.push_back(Axiom::sub(
        Concept::make_and({Concept::make_name(q.query.name), Concept::make_name(fresh)}),
        Concept::bot()));
  } else {
    gadget.tbox.push_back(
        Axiom::sub(Concept::make_name(q.query.name), Concept::negate(Concept::make_name(fresh))));
  }
  AssertionSet query_assertion = {Assertion::concept_of(q.query.name, q.individual)};
  return !compatible_with_all_repairs(gadget, query_assertion, budget);
}

}  // namespace abduct
