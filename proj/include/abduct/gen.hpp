#pragma once

// Constructive instance generators. Propositional satisfiability, 2-QBF
// validity, directed reachability and MUS checking each encode into abduction
// instances with known answers, so exhaustive sweeps against tiny
// propositional oracles exercise every engine layer end to end. A seeded
// random KB generator rounds the corpus out.
//
// Every generated instance passes problem validation: where the encoding
// itself does not make the KB inconsistent, an artificial conflict over fresh
// names (never part of the instance signature) is added.

#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "abduct/abduction.hpp"
#include "abduct/errors.hpp"
#include "abduct/model.hpp"

namespace abduct {

// ---------------------------------------------------------------------------
// Propositional inputs

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;  // DIMACS literals, non-zero
};

// The instance is (exists Y)(forall Z) not(matrix).
struct Qbf2Formula {
  std::vector<int> exists_vars;
  std::vector<int> forall_vars;
  CnfFormula matrix;
};

struct DiGraph {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string source, target;
};

inline CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  CnfFormula cnf;
  int declared_clauses = -1;
  bool header_seen = false;
  std::vector<int> current;
  while (in >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (tok == "p") {
      std::string kind;
      if (!(in >> kind >> cnf.num_vars >> declared_clauses) || kind != "cnf")
        throw ParseError("malformed DIMACS header", 1, 1);
      header_seen = true;
      continue;
    }
    int lit;
    try {
      lit = std::stoi(tok);
    } catch (...) {
      throw ParseError("unexpected token '" + tok + "' in DIMACS input", 1, 1);
    }
    if (!header_seen) throw ParseError("DIMACS clauses before the p-line", 1, 1);
    if (lit == 0) {
      cnf.clauses.push_back(current);
      current.clear();
    } else {
      if (lit > cnf.num_vars || -lit > cnf.num_vars)
        throw ParseError("literal " + tok + " out of range", 1, 1);
      current.push_back(lit);
    }
  }
  if (!header_seen) throw ParseError("missing DIMACS p-line", 1, 1);
  if (!current.empty()) throw ParseError("unterminated DIMACS clause", 1, 1);
  return cnf;
}

// QDIMACS restricted to exactly one existential block followed by one
// universal block. The matrix is the formula phi; the encoded instance asks
// for the validity of (exists Y)(forall Z) NOT phi.
inline Qbf2Formula parse_qdimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Qbf2Formula qbf;
  bool header_seen = false;
  int phase = 0;  // 0: expect e, 1: expect a, 2: clauses
  std::vector<int> current;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "p") {
      std::string kind;
      int nc;
      if (!(ls >> kind >> qbf.matrix.num_vars >> nc) || kind != "cnf")
        throw ParseError("malformed QDIMACS header", 1, 1);
      header_seen = true;
      continue;
    }
    if (!header_seen) throw ParseError("QDIMACS content before the p-line", 1, 1);
    if (tok == "e" || tok == "a") {
      std::vector<int>* block;
      if (tok == "e") {
        if (phase != 0) throw ParseError("expected exactly one 'e' block first", 1, 1);
        block = &qbf.exists_vars;
        phase = 1;
      } else {
        if (phase != 1) throw ParseError("expected exactly one 'a' block after 'e'", 1, 1);
        block = &qbf.forall_vars;
        phase = 2;
      }
      int v;
      while (ls >> v && v != 0) block->push_back(v);
      continue;
    }
    if (phase != 2) throw ParseError("clauses before both quantifier blocks", 1, 1);
    std::istringstream cs(line);
    int lit;
    while (cs >> lit) {
      if (lit == 0) {
        qbf.matrix.clauses.push_back(current);
        current.clear();
      } else {
        current.push_back(lit);
      }
    }
  }
  if (!current.empty()) throw ParseError("unterminated QDIMACS clause", 1, 1);
  if (qbf.exists_vars.empty() || qbf.forall_vars.empty())
    throw ParseError("both quantifier blocks must be nonempty", 1, 1);
  return qbf;
}

// Edge-list text: a header line "s t" followed by one "u v" line per edge.
inline DiGraph parse_digraph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  DiGraph g;
  std::set<std::string> seen;
  auto note = [&](const std::string& v) {
    if (seen.insert(v).second) g.vertices.push_back(v);
  };
  bool header = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string u, v;
    if (!(ls >> u)) continue;
    if (!(ls >> v)) throw ParseError("expected two vertex names per line", 1, 1);
    for (const std::string& name : {u, v})
      for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
          throw ParseError("invalid vertex name '" + name + "'", 1, 1);
    if (!header) {
      g.source = u;
      g.target = v;
      note(u);
      note(v);
      header = true;
    } else {
      g.edges.push_back({u, v});
      note(u);
      note(v);
    }
  }
  if (!header) throw ParseError("missing 's t' header line", 1, 1);
  return g;
}

// ---------------------------------------------------------------------------
// Encodings

struct GeneratedInstance {
  AbductionProblem problem;
  Signature signature;                     // restriction for hypothesis search
  std::optional<AssertionSet> hypothesis;  // candidate to verify, when the
                                           // encoding names one
};

namespace detail {

inline std::string lit_concept(int lit) {
  return lit > 0 ? "Ax" + std::to_string(lit) : "Axn" + std::to_string(-lit);
}

inline void add_gadget_conflict(KnowledgeBase& kb) {
  if (kb.dialect == Dialect::ElBot) {
    kb.tbox.push_back(Axiom::sub(
        Concept::make_and({Concept::make_name("X1gad"), Concept::make_name("X2gad")}),
        Concept::bot()));
    kb.abox.push_back(Assertion::concept_of("X1gad", "bgad"));
    kb.abox.push_back(Assertion::concept_of("X2gad", "bgad"));
  } else {
    kb.tbox.push_back(
        Axiom::sub(Concept::make_name("B1gad"), Concept::negate(Concept::make_name("B2gad"))));
    kb.abox.push_back(Assertion::concept_of("B1gad", "bgad"));
    kb.abox.push_back(Assertion::concept_of("B2gad", "bgad"));
  }
  kb.abox = make_assertion_set(kb.abox);
}

inline Concept conj_of(std::vector<Concept> parts) {
  if (parts.empty()) return Concept::top();
  if (parts.size() == 1) return parts[0];
  return Concept::make_and(std::move(parts));
}

}  // namespace detail

// Satisfiability of phi as brave-hypothesis existence over the literal
// concepts: a variable assignment and a hypothesis over {Ax, Axn, m} pick the
// same thing, and the clause/goal axioms fire exactly on satisfying picks.
inline GeneratedInstance gen_sat(const CnfFormula& cnf) {
  if (cnf.clauses.empty()) throw ValidationError("the CNF must have at least one clause");
  KnowledgeBase kb;
  kb.dialect = Dialect::ElBot;
  for (int x = 1; x <= cnf.num_vars; ++x)
    kb.tbox.push_back(Axiom::sub(Concept::make_and({Concept::make_name(detail::lit_concept(x)),
                                                    Concept::make_name(detail::lit_concept(-x))}),
                                 Concept::bot()));
  std::vector<Concept> clause_concepts;
  for (std::size_t j = 0; j < cnf.clauses.size(); ++j) {
    std::string ac = "Ac" + std::to_string(j + 1);
    for (int lit : cnf.clauses[j])
      kb.tbox.push_back(
          Axiom::sub(Concept::make_name(detail::lit_concept(lit)), Concept::make_name(ac)));
    clause_concepts.push_back(Concept::make_name(ac));
  }
  kb.tbox.push_back(Axiom::sub(detail::conj_of(clause_concepts), Concept::make_name("Aphi")));
  detail::add_gadget_conflict(kb);

  GeneratedInstance inst;
  inst.signature.individuals.insert("m");
  for (int x = 1; x <= cnf.num_vars; ++x) {
    inst.signature.concepts.insert(detail::lit_concept(x));
    inst.signature.concepts.insert(detail::lit_concept(-x));
  }
  Biq alpha{Concept::make_name("Aphi"), "m"};
  inst.problem = make_problem(kb, alpha, Semantics::Brave);
  return inst;
}

// Validity of (exists Y)(forall Z) not(phi) as AR-hypothesis existence over
// {Ay, Ayn, m}: a hypothesis fixes the existential assignment, repairs range
// over the universal one, and the goal concept fires exactly when phi stays
// refuted everywhere.
inline GeneratedInstance gen_qbf2(const Qbf2Formula& qbf) {
  if (qbf.exists_vars.empty() || qbf.forall_vars.empty())
    throw ValidationError("both quantifier blocks must be nonempty");
  for (int y : qbf.exists_vars)
    for (int z : qbf.forall_vars)
      if (y == z) throw ValidationError("quantifier blocks must be disjoint");

  KnowledgeBase kb;
  kb.dialect = Dialect::ElBot;
  std::vector<int> all_vars = qbf.exists_vars;
  all_vars.insert(all_vars.end(), qbf.forall_vars.begin(), qbf.forall_vars.end());
  for (int x : all_vars)
    kb.tbox.push_back(Axiom::sub(Concept::make_and({Concept::make_name(detail::lit_concept(x)),
                                                    Concept::make_name(detail::lit_concept(-x))}),
                                 Concept::bot()));
  std::vector<Concept> clause_concepts;
  for (std::size_t j = 0; j < qbf.matrix.clauses.size(); ++j) {
    std::string ac = "Ac" + std::to_string(j + 1);
    for (int lit : qbf.matrix.clauses[j])
      kb.tbox.push_back(
          Axiom::sub(Concept::make_name(detail::lit_concept(lit)), Concept::make_name(ac)));
    clause_concepts.push_back(Concept::make_name(ac));
  }
  kb.tbox.push_back(Axiom::sub(detail::conj_of(clause_concepts), Concept::make_name("Aphi")));
  kb.tbox.push_back(Axiom::sub(
      Concept::make_and({Concept::make_name("Aphi"), Concept::make_name("Aphin")}), Concept::bot()));
  std::vector<Concept> v_concepts;
  for (int y : qbf.exists_vars) {
    std::string vy = "Vy" + std::to_string(y);
    kb.tbox.push_back(Axiom::sub(Concept::make_name(detail::lit_concept(y)), Concept::make_name(vy)));
    kb.tbox.push_back(
        Axiom::sub(Concept::make_name(detail::lit_concept(-y)), Concept::make_name(vy)));
    v_concepts.push_back(Concept::make_name(vy));
  }
  v_concepts.push_back(Concept::make_name("Aphin"));
  kb.tbox.push_back(Axiom::sub(Concept::make_and(std::move(v_concepts)), Concept::make_name("C")));

  for (int z : qbf.forall_vars) {
    kb.abox.push_back(Assertion::concept_of(detail::lit_concept(z), "m"));
    kb.abox.push_back(Assertion::concept_of(detail::lit_concept(-z), "m"));
  }
  kb.abox.push_back(Assertion::concept_of("Aphin", "m"));
  kb.abox = make_assertion_set(kb.abox);

  GeneratedInstance inst;
  inst.signature.individuals.insert("m");
  for (int y : qbf.exists_vars) {
    inst.signature.concepts.insert(detail::lit_concept(y));
    inst.signature.concepts.insert(detail::lit_concept(-y));
  }
  Biq alpha{Concept::make_name("C"), "m"};
  inst.problem = make_problem(kb, alpha, Semantics::Ar);
  return inst;
}

// s-t reachability as brave verification/existence: vertex concepts chained
// along the edges, observation A<t>(a), candidate hypothesis {A<s>(a)}.
inline GeneratedInstance gen_reach(const DiGraph& g) {
  KnowledgeBase kb;
  kb.dialect = Dialect::DlLiteCore;
  for (const auto& [u, v] : g.edges) {
    if (u == v) continue;  // self-loops never affect reachability
    kb.tbox.push_back(Axiom::sub(Concept::make_name("A" + u), Concept::make_name("A" + v)));
  }
  detail::add_gadget_conflict(kb);

  GeneratedInstance inst;
  inst.signature.concepts.insert("A" + g.source);
  inst.signature.individuals.insert("a");
  inst.hypothesis = AssertionSet{Assertion::concept_of("A" + g.source, "a")};
  Biq alpha{Concept::make_name("A" + g.target), "a"};
  inst.problem = make_problem(kb, alpha, Semantics::Brave);
  return inst;
}

// MUS checking as AR verification: clause individuals carry role edges to the
// variables they mention (P for positive, N for negative); the hypothesis
// adds U-edges from `a` to the clauses of psi. A repair avoids entailing A(a)
// exactly when a variable assignment covers every clause of psi, so the
// hypothesis verifies iff psi is unsatisfiable and is subset-minimal iff psi
// is a MUS.
inline GeneratedInstance gen_cnf_ar(const CnfFormula& cnf, const std::vector<int>& psi_clauses) {
  if (cnf.clauses.empty()) throw ValidationError("the CNF must have at least one clause");
  if (psi_clauses.empty()) throw ValidationError("the clause subset must be nonempty");
  for (int j : psi_clauses)
    if (j < 1 || j > static_cast<int>(cnf.clauses.size()))
      throw ValidationError("clause index " + std::to_string(j) + " out of range");

  KnowledgeBase kb;
  kb.dialect = Dialect::DlLiteCore;
  kb.tbox.push_back(Axiom::sub(Concept::exists(RoleExpr{"P", true, false}),
                               Concept::negate(Concept::exists(RoleExpr{"N", true, false}))));
  kb.tbox.push_back(Axiom::sub(Concept::exists(RoleExpr{"P", false, false}),
                               Concept::negate(Concept::exists(RoleExpr{"U", true, false}))));
  kb.tbox.push_back(Axiom::sub(Concept::exists(RoleExpr{"N", false, false}),
                               Concept::negate(Concept::exists(RoleExpr{"U", true, false}))));
  kb.tbox.push_back(Axiom::sub(Concept::exists(RoleExpr{"U", false, false}),
                               Concept::make_name("A")));
  for (std::size_t j = 0; j < cnf.clauses.size(); ++j) {
    std::string cj = "c" + std::to_string(j + 1);
    for (int lit : cnf.clauses[j]) {
      std::string xi = "x" + std::to_string(lit > 0 ? lit : -lit);
      kb.abox.push_back(Assertion::role_of(lit > 0 ? "P" : "N", cj, xi));
    }
  }
  detail::add_gadget_conflict(kb);

  GeneratedInstance inst;
  inst.signature.roles.insert("U");
  inst.signature.individuals.insert("a");
  AssertionSet hyp;
  for (int j : psi_clauses) hyp.push_back(Assertion::role_of("U", "a", "c" + std::to_string(j)));
  inst.hypothesis = make_assertion_set(std::move(hyp));
  for (int j : psi_clauses) inst.signature.individuals.insert("c" + std::to_string(j));
  Biq alpha{Concept::make_name("A"), "a"};
  inst.problem = make_problem(kb, alpha, Semantics::Ar);
  return inst;
}

// Cardinality-minimality variant: phi is padded with a fresh variable chain
// so that a designated singleton {U(a, c_last)} is a hypothesis iff phi is
// unsatisfiable; being a singleton it is then cardinality-minimal.
inline GeneratedInstance gen_cnf_ar_padded(const CnfFormula& cnf) {
  if (cnf.clauses.empty()) throw ValidationError("the CNF must have at least one clause");
  CnfFormula padded;
  padded.num_vars = cnf.num_vars + 2;
  const int x1 = cnf.num_vars + 1, x2 = cnf.num_vars + 2;
  for (const auto& clause : cnf.clauses) {
    std::vector<int> c = clause;
    c.push_back(x1);
    padded.clauses.push_back(std::move(c));
  }
  padded.clauses.push_back({-x1, x2});
  padded.clauses.push_back({-x2});

  const int k = static_cast<int>(cnf.clauses.size());
  // U-edges for every clause except the last padded one, which becomes the
  // hypothesis.
  KnowledgeBase kb;
  kb.dialect = Dialect::DlLiteCore;
  kb.tbox.push_back(Axiom::sub(Concept::exists(RoleExpr{"P", true, false}),
                               Concept::negate(Concept::exists(RoleExpr{"N", true, false}))));
  kb.tbox.push_back(Axiom::sub(Concept::exists(RoleExpr{"P", false, false}),
                               Concept::negate(Concept::exists(RoleExpr{"U", true, false}))));
  kb.tbox.push_back(Axiom::sub(Concept::exists(RoleExpr{"N", false, false}),
                               Concept::negate(Concept::exists(RoleExpr{"U", true, false}))));
  kb.tbox.push_back(Axiom::sub(Concept::exists(RoleExpr{"U", false, false}),
                               Concept::make_name("A")));
  for (std::size_t j = 0; j < padded.clauses.size(); ++j) {
    std::string cj = "c" + std::to_string(j + 1);
    for (int lit : padded.clauses[j]) {
      std::string xi = "x" + std::to_string(lit > 0 ? lit : -lit);
      kb.abox.push_back(Assertion::role_of(lit > 0 ? "P" : "N", cj, xi));
    }
  }
  for (int j = 1; j <= k + 1; ++j)
    kb.abox.push_back(Assertion::role_of("U", "a", "c" + std::to_string(j)));
  detail::add_gadget_conflict(kb);

  GeneratedInstance inst;
  inst.signature.roles.insert("U");
  inst.signature.individuals.insert("a");
  inst.signature.individuals.insert("c" + std::to_string(k + 2));
  inst.hypothesis =
      AssertionSet{Assertion::role_of("U", "a", "c" + std::to_string(k + 2))};
  Biq alpha{Concept::make_name("A"), "a"};
  inst.problem = make_problem(kb, alpha, Semantics::Ar);
  return inst;
}

// ---------------------------------------------------------------------------
// Seeded random KB generation

struct RandomKbParams {
  Dialect dialect = Dialect::ElBot;
  int n_concepts = 6;
  int n_roles = 2;
  int n_individuals = 3;
  int n_axioms = 8;
  int n_assertions = 8;
  double disjointness_ratio = 0.3;
  bool require_inconsistent = false;
  int max_retries = 200;
};

namespace detail {

// Deterministic across platforms; std::uniform_int_distribution is not.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace detail

inline KnowledgeBase gen_random_kb(const RandomKbParams& params, std::uint64_t seed) {
  detail::SplitMix64 rng(seed);
  auto concept_name = [&](int i) { return "C" + std::to_string(i + 1); };
  auto role_name = [&](int i) { return "r" + std::to_string(i + 1); };
  auto individual_name = [&](int i) { return "a" + std::to_string(i + 1); };
  auto rand_concept = [&]() {
    return Concept::make_name(concept_name(static_cast<int>(rng.below(params.n_concepts))));
  };
  auto rand_basic = [&]() {
    if (params.n_roles == 0) return rand_concept();
    double u = rng.unit();
    if (u < 0.7) return rand_concept();
    RoleExpr r{role_name(static_cast<int>(rng.below(params.n_roles))), u >= 0.9, false};
    return Concept::exists(r);
  };

  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    KnowledgeBase kb;
    kb.dialect = params.dialect;
    for (int i = 0; i < params.n_axioms; ++i) {
      bool negative = rng.unit() < params.disjointness_ratio;
      if (params.dialect == Dialect::ElBot) {
        if (negative) {
          kb.tbox.push_back(
              Axiom::sub(Concept::make_and({rand_concept(), rand_concept()}), Concept::bot()));
          continue;
        }
        double u = rng.unit();
        if (params.n_roles == 0) u = u * 0.7;  // only conjunction-free shapes available
        if (u < 0.4) {
          kb.tbox.push_back(Axiom::sub(rand_concept(), rand_concept()));
        } else if (u < 0.7) {
          kb.tbox.push_back(
              Axiom::sub(Concept::make_and({rand_concept(), rand_concept()}), rand_concept()));
        } else if (u < 0.85) {
          RoleExpr r{role_name(static_cast<int>(rng.below(params.n_roles))), false, false};
          kb.tbox.push_back(Axiom::sub(rand_concept(), Concept::exists(r, rand_concept())));
        } else {
          RoleExpr r{role_name(static_cast<int>(rng.below(params.n_roles))), false, false};
          kb.tbox.push_back(Axiom::sub(Concept::exists(r, rand_concept()), rand_concept()));
        }
      } else {
        bool role_axiom = params.dialect == Dialect::DlLiteR && params.n_roles > 0 &&
                          rng.unit() < 0.2;
        if (role_axiom) {
          RoleExpr l{role_name(static_cast<int>(rng.below(params.n_roles))), rng.unit() < 0.2,
                     false};
          RoleExpr r{role_name(static_cast<int>(rng.below(params.n_roles))), rng.unit() < 0.2,
                     negative};
          kb.tbox.push_back(Axiom::rsub(l, r));
        } else {
          Concept lhs = rand_basic();
          Concept rhs = rand_basic();
          kb.tbox.push_back(Axiom::sub(lhs, negative ? Concept::negate(rhs) : rhs));
        }
      }
    }
    for (int i = 0; i < params.n_assertions; ++i) {
      bool role = params.n_roles > 0 && rng.unit() < 0.3;
      if (role) {
        kb.abox.push_back(Assertion::role_of(
            role_name(static_cast<int>(rng.below(params.n_roles))),
            individual_name(static_cast<int>(rng.below(params.n_individuals))),
            individual_name(static_cast<int>(rng.below(params.n_individuals)))));
      } else {
        kb.abox.push_back(Assertion::concept_of(
            concept_name(static_cast<int>(rng.below(params.n_concepts))),
            individual_name(static_cast<int>(rng.below(params.n_individuals)))));
      }
    }
    kb.abox = make_assertion_set(kb.abox);
    validate_kb(kb);
    NormalizedTBox nt = normalize(kb);
    if (is_incoherent_tbox(nt)) continue;
    if (params.require_inconsistent && is_consistent(nt, kb.abox)) continue;
    return kb;
  }
  throw BudgetError("random KB generation exhausted its retry budget");
}

}  // namespace abduct
