#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "abduct/abduction.hpp"
#include "abduct/gen.hpp"
#include "abduct/io.hpp"
#include "abduct/model.hpp"
#include "abduct/oracle.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(ABDUCT_SOURCE_DIR) + "/tests/fixtures/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline abduct::KnowledgeBase load_kb(const std::string& fixture) {
  return abduct::parse_kb(read_file(fixture_path(fixture)));
}

inline abduct::AssertionSet load_abox(const std::string& fixture) {
  return abduct::parse_abox(read_file(fixture_path(fixture)));
}

inline abduct::Biq biq(const std::string& concept_name, const std::string& individual) {
  return abduct::Biq{abduct::Concept::make_name(concept_name), individual};
}

inline abduct::Assertion inst(const std::string& c, const std::string& a) {
  return abduct::Assertion::concept_of(c, a);
}

inline abduct::Assertion rel(const std::string& r, const std::string& a, const std::string& b) {
  return abduct::Assertion::role_of(r, a, b);
}

// Deterministically picks an abduction problem from a random inconsistent KB:
// the first concept/individual pair (in scan order rotated by the seed) whose
// atomic query is not entailed under the requested semantics.
inline std::optional<abduct::AbductionProblem> random_problem(const abduct::RandomKbParams& params,
                                                              std::uint64_t seed,
                                                              abduct::Semantics sem) {
  abduct::RandomKbParams p = params;
  p.require_inconsistent = true;
  abduct::KnowledgeBase kb;
  try {
    kb = abduct::gen_random_kb(p, seed);
  } catch (const abduct::BudgetError&) {
    return std::nullopt;
  }
  abduct::Signature sig = abduct::signature_of(kb);
  std::vector<std::string> concepts(sig.concepts.begin(), sig.concepts.end());
  std::vector<std::string> individuals(sig.individuals.begin(), sig.individuals.end());
  if (concepts.empty() || individuals.empty()) return std::nullopt;
  std::size_t total = concepts.size() * individuals.size();
  std::size_t start = static_cast<std::size_t>(seed % total);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t at = (start + k) % total;
    const std::string& c = concepts[at / individuals.size()];
    const std::string& a = individuals[at % individuals.size()];
    try {
      return abduct::make_problem(kb, biq(c, a), sem);
    } catch (const abduct::ValidationError&) {
      continue;
    }
  }
  return std::nullopt;
}

// Definition-literal hypothesis test through the oracle path.
inline bool oracle_is_hypothesis(const abduct::AbductionProblem& p, const abduct::AssertionSet& h,
                                 const abduct::OracleBudget& ob = {}) {
  abduct::KnowledgeBase extended = p.kb;
  extended.abox = abduct::set_union(p.kb.abox, abduct::make_assertion_set(h));
  return abduct::oracle_entails(extended, p.observation, p.semantics, ob);
}

// --- tiny propositional oracles used to check the generators ---------------

inline bool assignment_satisfies(const abduct::CnfFormula& cnf, unsigned bits) {
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause) {
      int v = lit > 0 ? lit : -lit;
      bool val = (bits >> (v - 1)) & 1;
      if (lit > 0 ? val : !val) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

inline bool truth_table_sat(const abduct::CnfFormula& cnf) {
  unsigned n = static_cast<unsigned>(cnf.num_vars);
  for (unsigned bits = 0; bits < (1u << n); ++bits)
    if (assignment_satisfies(cnf, bits)) return true;
  return false;
}

// Satisfiability of a subset of clauses (1-based indices).
inline bool truth_table_sat_subset(const abduct::CnfFormula& cnf, const std::vector<int>& subset) {
  abduct::CnfFormula sub;
  sub.num_vars = cnf.num_vars;
  for (int j : subset) sub.clauses.push_back(cnf.clauses[static_cast<std::size_t>(j - 1)]);
  return truth_table_sat(sub);
}

inline bool is_mus(const abduct::CnfFormula& cnf, const std::vector<int>& subset) {
  if (truth_table_sat_subset(cnf, subset)) return false;
  for (std::size_t drop = 0; drop < subset.size(); ++drop) {
    std::vector<int> smaller;
    for (std::size_t i = 0; i < subset.size(); ++i)
      if (i != drop) smaller.push_back(subset[i]);
    if (!truth_table_sat_subset(cnf, smaller)) return false;
  }
  return true;
}

// Validity of (exists Y)(forall Z) not(matrix) by exhaustive evaluation.
inline bool qbf2_valid(const abduct::Qbf2Formula& qbf) {
  unsigned ny = static_cast<unsigned>(qbf.exists_vars.size());
  unsigned nz = static_cast<unsigned>(qbf.forall_vars.size());
  for (unsigned ybits = 0; ybits < (1u << ny); ++ybits) {
    bool all_z_refute = true;
    for (unsigned zbits = 0; zbits < (1u << nz); ++zbits) {
      unsigned assignment = 0;
      for (unsigned i = 0; i < ny; ++i)
        if ((ybits >> i) & 1) assignment |= 1u << (qbf.exists_vars[i] - 1);
      for (unsigned i = 0; i < nz; ++i)
        if ((zbits >> i) & 1) assignment |= 1u << (qbf.forall_vars[i] - 1);
      if (assignment_satisfies(qbf.matrix, assignment)) {
        all_z_refute = false;
        break;
      }
    }
    if (all_z_refute) return true;
  }
  return false;
}

inline bool digraph_reachable(const abduct::DiGraph& g) {
  std::set<std::string> seen{g.source};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [u, v] : g.edges)
      if (seen.count(u) && !seen.count(v)) {
        seen.insert(v);
        changed = true;
      }
  }
  return seen.count(g.target) > 0;
}

}  // namespace testutil
