#pragma once

// Abduction problems over inconsistent knowledge bases, hypothesis existence
// (general and signature-restricted), verification under subset, cardinality
// and conflict-based minimality criteria, and hypothesis enumeration.
//
// A problem consists of an inconsistent KB and an atomic observation not
// entailed under the chosen repair semantics; a hypothesis is a flat ABox H
// whose union with the ABox entails the observation. The key structural fact
// used throughout: an AR-hypothesis exists iff the observation alone is one,
// iff every repair stays consistent with the observation, iff no repair
// refutes it. Brave hypotheses always exist (the observation itself).
//
// AR-hypotheses are not convex under subset inclusion, so subset-minimality
// is verified globally over all proper subsets, never by single-removal
// probing.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abduct/errors.hpp"
#include "abduct/model.hpp"
#include "abduct/repair.hpp"

namespace abduct {

struct AbductionProblem {
  KnowledgeBase kb;
  Biq observation;
  Semantics semantics = Semantics::Ar;
  bool fresh_individual = false;  // observation individual does not occur in the KB

  Assertion observation_assertion() const {
    return Assertion::concept_of(observation.query.name, observation.individual);
  }
};

enum class Criterion { Subset, Cardinality, ConflictSubset, ConflictCardinality };

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::Subset: return "subset";
    case Criterion::Cardinality: return "cardinality";
    case Criterion::ConflictSubset: return "conflict-subset";
    case Criterion::ConflictCardinality: return "conflict-cardinality";
  }
  return "?";
}

struct CandidateSpace {
  Signature signature;
  AssertionSet assertions;  // every flat assertion over the signature, sorted
  std::optional<std::size_t> size_bound;

  static CandidateSpace over(const Signature& sig, std::optional<std::size_t> bound = {}) {
    CandidateSpace space;
    space.signature = sig;
    space.size_bound = bound;
    for (const std::string& c : sig.concepts)
      for (const std::string& a : sig.individuals)
        space.assertions.push_back(Assertion::concept_of(c, a));
    for (const std::string& r : sig.roles)
      for (const std::string& a : sig.individuals)
        for (const std::string& b : sig.individuals)
          space.assertions.push_back(Assertion::role_of(r, a, b));
    space.assertions = make_assertion_set(std::move(space.assertions));
    return space;
  }

  // Default hypothesis universe for a problem: the KB signature plus the
  // observation's names. Individuals are those of the KB and the observation,
  // optionally extended by a pool of fresh individuals (EL role chains through
  // unseen individuals can otherwise be missed).
  static CandidateSpace unrestricted(const AbductionProblem& p, std::size_t fresh_individuals = 0,
                                     std::optional<std::size_t> bound = {});
};

struct Verdict {
  bool is_hypothesis = false;
  std::map<Criterion, bool> minimal;  // only the requested criteria
  bool conflict_confining = false;
  // For a failed hypothesis test under AR: a repair refuting the observation.
  // For a failed minimality flag: the smallest competing hypothesis found.
  std::optional<AssertionSet> counterexample;
};

struct VerifyOptions {
  std::vector<Criterion> criteria;
  std::optional<CandidateSpace> space;
  bool require_conflict_confining = false;
};

struct ExistsResult {
  bool exists = false;
  std::optional<AssertionSet> witness;
};

// ---------------------------------------------------------------------------

inline AbductionProblem make_problem(const KnowledgeBase& kb, const Biq& observation,
                                     Semantics semantics, const Budget& budget = {}) {
  if (semantics == Semantics::Classical)
    throw ValidationError("abduction problems use brave or ar semantics");
  if (!observation.atomic())
    throw ValidationError("the observation must be an atomic instance query");
  NormalizedTBox nt = normalize(kb);
  if (is_incoherent_tbox(nt))
    throw IncoherentTboxError("the TBox is unsatisfiable on its own; no repairs exist");
  if (is_consistent(nt, kb.abox))
    throw ValidationError("the knowledge base is consistent; not an abduction problem");
  if (entails(kb, observation, semantics, budget))
    throw ValidationError(std::string("the observation is already entailed under ") +
                          to_string(semantics) + " semantics");
  AssertionSet obs = {Assertion::concept_of(observation.query.name, observation.individual)};
  if (semantics == Semantics::Brave && !is_consistent(nt, obs))
    throw ValidationError(
        "the observation concept is unsatisfiable under the TBox; no brave hypothesis can exist");
  AbductionProblem p;
  p.kb = kb;
  p.observation = observation;
  p.semantics = semantics;
  Signature sig = signature_of(kb);
  p.fresh_individual = sig.individuals.count(observation.individual) == 0;
  return p;
}

inline CandidateSpace CandidateSpace::unrestricted(const AbductionProblem& p,
                                                   std::size_t fresh_individuals,
                                                   std::optional<std::size_t> bound) {
  Signature sig = signature_of(p.kb);
  sig.concepts.insert(p.observation.query.name);
  sig.individuals.insert(p.observation.individual);
  for (std::size_t i = 1; i <= fresh_individuals; ++i) {
    std::string name = "fI" + std::to_string(i);
    while (sig.individuals.count(name)) name += "x";
    sig.individuals.insert(name);
  }
  return over(sig, bound);
}

// ---------------------------------------------------------------------------
// Shared search workspace: one assertion universe (ABox plus candidate pool),
// one memoizing checker, lazily enumerated conflict families.

class ProblemSearch {
 public:
  ProblemSearch(const AbductionProblem& p, const AssertionSet& pool, Budget budget)
      : p_(p),
        budget_(budget),
        core_(p.kb, set_union(p.kb.abox, make_assertion_set(pool)), {p.observation.individual}),
        base_mask_(core_.checker().mask_of(p.kb.abox)) {}

  RepairCore& core() { return core_; }
  std::uint64_t base_mask() const { return base_mask_; }
  std::uint64_t mask_of(const AssertionSet& h) { return core_.checker().mask_of(h); }
  AssertionSet assertions_of(std::uint64_t m) { return core_.checker().assertions_of(m); }

  bool is_hypothesis(std::uint64_t h_mask, std::optional<AssertionSet>* counterexample = nullptr) {
    return core_.entails_atom(base_mask_ | h_mask, p_.semantics, p_.observation.query.name,
                              p_.observation.individual, budget_, counterexample);
  }

  // Conflict-confinement of the sub-hypothesis given by h_mask.
  bool conflict_confining(std::uint64_t h_mask) {
    return core_.conflict_masks(base_mask_ | h_mask) == core_.conflict_masks(base_mask_);
  }

  bool competes(std::uint64_t h_mask, bool require_conflict_confining) {
    if (!is_hypothesis(h_mask)) return false;
    return !require_conflict_confining || conflict_confining(h_mask);
  }

 private:
  const AbductionProblem& p_;
  Budget budget_;
  RepairCore core_;
  std::uint64_t base_mask_;
};

inline bool is_hypothesis(const AbductionProblem& p, const AssertionSet& hypothesis,
                          const Budget& budget = {},
                          std::optional<AssertionSet>* counterexample = nullptr) {
  AssertionSet h = make_assertion_set(hypothesis);
  ProblemSearch search(p, h, budget);
  return search.is_hypothesis(search.mask_of(h), counterexample);
}

// Existence of any hypothesis, unrestricted. Trivial for brave semantics; for
// AR semantics equivalent to every repair tolerating the observation. The AR
// answer is cross-checked against the negated-query encoding and, when the
// observation is genuinely new, against conflict-set equality.
inline ExistsResult exists_hypothesis(const AbductionProblem& p, const Budget& budget = {}) {
  AssertionSet obs = {p.observation_assertion()};
  if (p.semantics == Semantics::Brave) return {true, obs};
  bool compatible = compatible_with_all_repairs(p.kb, obs, budget);
  bool negated_brave = brave_entails_negated(p.kb, p.observation, budget);
  if (compatible != !negated_brave)
    throw InternalError("AR existence routes disagree (repair compatibility vs negated query)");
  if (!set_contains(p.kb.abox, obs[0])) {
    bool confining = is_conflict_confining(p.kb, obs, budget);
    if (confining != compatible)
      throw InternalError("AR existence routes disagree (conflict confinement)");
  }
  if (compatible) return {true, obs};
  return {false, std::nullopt};
}

namespace detail {

// Calls fn for every subset of {0..n-1}, ordered by size then lexicographic
// rank, up to max_size inclusive. fn receives the index vector and returns
// false to stop. Returns false when stopped early.
template <typename F>
bool for_each_subset_by_size(std::size_t n, std::size_t max_size, F&& fn) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k <= max_size && k <= n; ++k) {
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    bool size_done = false;
    while (!size_done) {
      if (!fn(idx)) return false;
      if (k == 0) break;
      std::size_t i = k;
      while (true) {
        if (i == 0) {
          size_done = true;
          break;
        }
        --i;
        if (idx[i] != i + n - k) break;
      }
      if (size_done) break;
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return true;
}

inline std::size_t count_subsets_up_to(std::size_t n, std::size_t max_size, std::size_t cap) {
  std::size_t total = 0;
  std::size_t k_max = std::min(n, max_size);
  for (std::size_t k = 0; k <= k_max; ++k) {
    std::size_t c = 1;  // C(n, k), saturating at cap + 1
    for (std::size_t i = 0; i < k && c <= cap; ++i) c = c * (n - i) / (i + 1);
    total += c;
    if (total > cap) return cap + 1;
  }
  return total;
}

inline void ensure_search_budget(std::size_t n, std::size_t max_size, const Budget& budget,
                                 const char* what) {
  if (count_subsets_up_to(n, max_size, budget.max_subsets) > budget.max_subsets)
    throw BudgetError(std::string(what) + " would search more than " +
                      std::to_string(budget.max_subsets) + " candidate sets");
}

inline std::uint64_t mask_pick(const std::vector<std::uint64_t>& bits,
                               const std::vector<std::size_t>& idx) {
  std::uint64_t m = 0;
  for (std::size_t i : idx) m |= bits[i];
  return m;
}

// Strict subset test between two sorted mask families.
inline bool family_strict_subset(const std::vector<std::uint64_t>& small,
                                 const std::vector<std::uint64_t>& big) {
  if (small.size() >= big.size()) return false;
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

inline std::vector<std::uint64_t> element_bits(ProblemSearch& search, const AssertionSet& pool) {
  std::vector<std::uint64_t> bits;
  bits.reserve(pool.size());
  for (const Assertion& as : pool) bits.push_back(search.mask_of({as}));
  return bits;
}

}  // namespace detail

// Existence of a hypothesis over a signature-restricted candidate space.
// Brave semantics without a size bound: by monotonicity the union of the
// whole space is a hypothesis iff any subset is; the witness is then
// deletion-minimized. AR semantics (and bounded brave): exhaustive search in
// size-then-lexicographic order, returning the first hypothesis found.
inline ExistsResult exists_hypothesis_over(const AbductionProblem& p, const CandidateSpace& space,
                                           const Budget& budget = {}) {
  const AssertionSet& pool = space.assertions;
  ProblemSearch search(p, pool, budget);
  std::vector<std::uint64_t> bits = detail::element_bits(search, pool);
  if (p.semantics == Semantics::Brave && !space.size_bound) {
    std::uint64_t all = 0;
    for (std::uint64_t b : bits) all |= b;
    if (!search.is_hypothesis(all)) return {false, std::nullopt};
    std::uint64_t witness = all;
    for (std::uint64_t b : bits)
      if (search.is_hypothesis(witness & ~b)) witness &= ~b;
    return {true, search.assertions_of(witness)};
  }
  std::size_t max_size = space.size_bound.value_or(pool.size());
  detail::ensure_search_budget(pool.size(), max_size, budget, "hypothesis existence");
  ExistsResult result;
  detail::for_each_subset_by_size(pool.size(), max_size, [&](const std::vector<std::size_t>& idx) {
    std::uint64_t h = detail::mask_pick(bits, idx);
    if (search.is_hypothesis(h)) {
      result = {true, search.assertions_of(h)};
      return false;
    }
    return true;
  });
  return result;
}

namespace detail {

inline Verdict verify_in(ProblemSearch& search, const AbductionProblem& p,
                         const AssertionSet& hypothesis, const VerifyOptions& opts,
                         const Budget& budget) {
  Verdict verdict;
  std::uint64_t h_mask = search.mask_of(hypothesis);
  std::optional<AssertionSet> refutation;
  verdict.is_hypothesis = search.is_hypothesis(h_mask, &refutation);
  // Public double-checked route; the search workspace uses the conflict-set
  // route alone for competitor tests.
  verdict.conflict_confining = is_conflict_confining(p.kb, hypothesis, budget);

  for (Criterion crit : opts.criteria) verdict.minimal[crit] = false;
  if (!verdict.is_hypothesis) {
    verdict.counterexample = refutation;  // meaningful under AR; absent for brave
    return verdict;
  }

  std::optional<AssertionSet> defeater;
  auto note_defeater = [&](std::uint64_t m) {
    if (!defeater) defeater = search.assertions_of(m);
  };
  const bool require_cc = opts.require_conflict_confining;

  std::vector<std::uint64_t> h_bits = element_bits(search, hypothesis);

  for (Criterion crit : opts.criteria) {
    switch (crit) {
      case Criterion::Subset: {
        // Global check over all proper subsets; hypotheses are not convex, so
        // removing one assertion at a time proves nothing.
        ensure_search_budget(hypothesis.size(), hypothesis.size(), budget, "subset-minimality");
        bool minimal = true;
        for_each_subset_by_size(
            hypothesis.size(), hypothesis.size(), [&](const std::vector<std::size_t>& idx) {
              if (idx.size() == hypothesis.size()) return true;  // skip H itself
              std::uint64_t h = mask_pick(h_bits, idx);
              if (search.competes(h, require_cc)) {
                minimal = false;
                note_defeater(h);
                return false;
              }
              return true;
            });
        verdict.minimal[crit] = minimal;
        break;
      }
      case Criterion::Cardinality: {
        if (!opts.space) {
          // Unrestricted universe: a single-assertion hypothesis exists
          // whenever any does (the observation itself), so minimality is
          // exactly |H| = 1. Under the conflict-confining requirement this
          // argument only covers AR semantics.
          if (require_cc && p.semantics == Semantics::Brave)
            throw ValidationError(
                "cardinality-minimality of conflict-confining brave hypotheses needs a "
                "candidate space");
          verdict.minimal[crit] = hypothesis.size() == 1;
          break;
        }
        const AssertionSet& pool = opts.space->assertions;
        std::vector<std::uint64_t> bits = element_bits(search, pool);
        std::size_t below = hypothesis.empty() ? 0 : hypothesis.size() - 1;
        ensure_search_budget(pool.size(), below, budget, "cardinality-minimality");
        bool minimal = true;
        for_each_subset_by_size(pool.size(), below, [&](const std::vector<std::size_t>& idx) {
          std::uint64_t h = mask_pick(bits, idx);
          if (search.competes(h, require_cc)) {
            minimal = false;
            note_defeater(h);
            return false;
          }
          return true;
        });
        verdict.minimal[crit] = minimal;
        break;
      }
      case Criterion::ConflictSubset:
      case Criterion::ConflictCardinality: {
        if (!opts.space)
          throw ValidationError("conflict-based minimality criteria need a candidate space");
        const std::vector<std::uint64_t>& conf_h =
            search.core().conflict_masks(search.base_mask() | h_mask);
        const AssertionSet& pool = opts.space->assertions;
        std::vector<std::uint64_t> bits = element_bits(search, pool);
        std::size_t max_size = opts.space->size_bound.value_or(pool.size());
        ensure_search_budget(pool.size(), max_size, budget, "conflict-minimality");
        bool minimal = true;
        for_each_subset_by_size(pool.size(), max_size, [&](const std::vector<std::size_t>& idx) {
          std::uint64_t h = mask_pick(bits, idx);
          if (!search.competes(h, require_cc)) return true;
          std::vector<std::uint64_t> conf_other =
              search.core().conflict_masks(search.base_mask() | h);
          bool smaller = crit == Criterion::ConflictSubset
                             ? family_strict_subset(conf_other, conf_h)
                             : conf_other.size() < conf_h.size();
          if (smaller) {
            minimal = false;
            note_defeater(h);
            return false;
          }
          return true;
        });
        verdict.minimal[crit] = minimal;
        break;
      }
    }
  }
  verdict.counterexample = defeater;
  return verdict;
}

}  // namespace detail

inline Verdict verify(const AbductionProblem& p, const AssertionSet& hypothesis_in,
                      const VerifyOptions& opts = {}, const Budget& budget = {}) {
  AssertionSet hypothesis = make_assertion_set(hypothesis_in);
  AssertionSet pool = hypothesis;
  if (opts.space) pool = set_union(pool, opts.space->assertions);
  ProblemSearch search(p, pool, budget);
  return detail::verify_in(search, p, hypothesis, opts, budget);
}

// Enumerates every hypothesis inside the candidate space in size-then-
// lexicographic order, each with a full verdict over all criteria. The
// callback returns false to stop early.
inline void enumerate_hypotheses(
    const AbductionProblem& p, const CandidateSpace& space,
    const std::function<bool(const AssertionSet&, const Verdict&)>& fn, const Budget& budget = {},
    bool require_conflict_confining = false) {
  const AssertionSet& pool = space.assertions;
  std::size_t max_size = space.size_bound.value_or(pool.size());
  detail::ensure_search_budget(pool.size(), max_size, budget, "hypothesis enumeration");
  VerifyOptions opts;
  opts.criteria = {Criterion::Subset, Criterion::Cardinality, Criterion::ConflictSubset,
                   Criterion::ConflictCardinality};
  opts.space = space;
  opts.require_conflict_confining = require_conflict_confining;
  ProblemSearch search(p, pool, budget);
  std::vector<std::uint64_t> bits = detail::element_bits(search, pool);
  detail::for_each_subset_by_size(pool.size(), max_size, [&](const std::vector<std::size_t>& idx) {
    std::uint64_t h = detail::mask_pick(bits, idx);
    if (!search.is_hypothesis(h)) return true;
    if (require_conflict_confining && !search.conflict_confining(h)) return true;
    AssertionSet hypothesis = search.assertions_of(h);
    return fn(hypothesis, detail::verify_in(search, p, hypothesis, opts, budget));
  });
}

}  // namespace abduct
