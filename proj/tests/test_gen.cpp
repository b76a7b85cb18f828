#include <catch2/catch_amalgamated.hpp>

#include "abduct/gen.hpp"
#include "abduct/io.hpp"
#include "helpers.hpp"

using namespace abduct;
using testutil::inst;
using testutil::rel;

TEST_CASE("DIMACS parsing") {
  CnfFormula cnf = parse_dimacs("c comment\np cnf 3 2\n1 -2 0\n3 0\n");
  REQUIRE(cnf.num_vars == 3);
  REQUIRE(cnf.clauses == std::vector<std::vector<int>>{{1, -2}, {3}});
  REQUIRE_THROWS_AS(parse_dimacs("1 0\n"), ParseError);
  REQUIRE_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), ParseError);
  REQUIRE_THROWS_AS(parse_dimacs("p cnf 1 1\n1\n"), ParseError);
}

TEST_CASE("QDIMACS parsing") {
  Qbf2Formula qbf = parse_qdimacs("p cnf 3 2\ne 1 0\na 2 3 0\n-1 2 0\n3 0\n");
  REQUIRE(qbf.exists_vars == std::vector<int>{1});
  REQUIRE(qbf.forall_vars == std::vector<int>{2, 3});
  REQUIRE(qbf.matrix.clauses.size() == 2);
  REQUIRE_THROWS_AS(parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 0\n"), ParseError);
  REQUIRE_THROWS_AS(parse_qdimacs("p cnf 2 1\ne 1 0\n1 0\n"), ParseError);
}

TEST_CASE("digraph parsing") {
  DiGraph g = parse_digraph("s t\ns v\nv t\n");
  REQUIRE(g.source == "s");
  REQUIRE(g.target == "t");
  REQUIRE(g.edges.size() == 2);
  REQUIRE_THROWS_AS(parse_digraph(""), ParseError);
  REQUIRE_THROWS_AS(parse_digraph("s\n"), ParseError);
}

TEST_CASE("satisfiability instances") {
  CnfFormula sat1;  // {{x1}}
  sat1.num_vars = 1;
  sat1.clauses = {{1}};
  GeneratedInstance inst1 = gen_sat(sat1);
  REQUIRE(inst1.problem.semantics == Semantics::Brave);
  ExistsResult r1 = exists_hypothesis_over(inst1.problem, CandidateSpace::over(inst1.signature));
  REQUIRE(r1.exists);
  REQUIRE(r1.witness == AssertionSet{inst("Ax1", "m")});

  CnfFormula unsat;  // {{x1}, {-x1}}
  unsat.num_vars = 1;
  unsat.clauses = {{1}, {-1}};
  REQUIRE(!exists_hypothesis_over(gen_sat(unsat).problem,
                                  CandidateSpace::over(gen_sat(unsat).signature))
               .exists);

  CnfFormula unsat2;  // {{x1,x2},{-x1},{-x2}}
  unsat2.num_vars = 2;
  unsat2.clauses = {{1, 2}, {-1}, {-2}};
  GeneratedInstance inst2 = gen_sat(unsat2);
  REQUIRE(!exists_hypothesis_over(inst2.problem, CandidateSpace::over(inst2.signature)).exists);
}

TEST_CASE("2-QBF instances") {
  // (exists y)(forall z) not({{-y},{z}}): true with y = 1
  Qbf2Formula qbf;
  qbf.exists_vars = {1};
  qbf.forall_vars = {2};
  qbf.matrix.num_vars = 2;
  qbf.matrix.clauses = {{-1}, {2}};
  GeneratedInstance gi = gen_qbf2(qbf);
  REQUIRE(gi.problem.semantics == Semantics::Ar);
  ExistsResult r = exists_hypothesis_over(gi.problem, CandidateSpace::over(gi.signature));
  REQUIRE(testutil::qbf2_valid(qbf));
  REQUIRE(r.exists);
  REQUIRE(r.witness == AssertionSet{inst("Ax1", "m")});

  // matrix unsatisfiable: not(phi) always true
  Qbf2Formula taut;
  taut.exists_vars = {1};
  taut.forall_vars = {2};
  taut.matrix.num_vars = 2;
  taut.matrix.clauses = {{1}, {-1}};
  REQUIRE(testutil::qbf2_valid(taut));
  REQUIRE(exists_hypothesis_over(gen_qbf2(taut).problem,
                                 CandidateSpace::over(gen_qbf2(taut).signature))
              .exists);

  // phi = {{y}}: not(phi) true exactly under y = 0
  Qbf2Formula needs_neg;
  needs_neg.exists_vars = {1};
  needs_neg.forall_vars = {2};
  needs_neg.matrix.num_vars = 2;
  needs_neg.matrix.clauses = {{1}};
  GeneratedInstance gneg = gen_qbf2(needs_neg);
  ExistsResult rneg = exists_hypothesis_over(gneg.problem, CandidateSpace::over(gneg.signature));
  REQUIRE(testutil::qbf2_valid(needs_neg));
  REQUIRE(rneg.exists);
  REQUIRE(rneg.witness == AssertionSet{inst("Axn1", "m")});

  // phi = {{y,z},{y,-z}}: y = 0 leaves {{z},{-z}} unsatisfiable, so valid
  Qbf2Formula split;
  split.exists_vars = {1};
  split.forall_vars = {2};
  split.matrix.num_vars = 2;
  split.matrix.clauses = {{1, 2}, {1, -2}};
  REQUIRE(testutil::qbf2_valid(split));
  ExistsResult rsplit = exists_hypothesis_over(gen_qbf2(split).problem,
                                               CandidateSpace::over(gen_qbf2(split).signature));
  REQUIRE(rsplit.exists);
  REQUIRE(rsplit.witness == AssertionSet{inst("Axn1", "m")});

  // false instance: a tautological matrix clause makes not(phi) unachievable
  Qbf2Formula f;
  f.exists_vars = {1};
  f.forall_vars = {2};
  f.matrix.num_vars = 2;
  f.matrix.clauses = {{2, -2}};
  REQUIRE(!testutil::qbf2_valid(f));
  REQUIRE(!exists_hypothesis_over(gen_qbf2(f).problem,
                                  CandidateSpace::over(gen_qbf2(f).signature))
               .exists);
}

TEST_CASE("enumeration over a SAT instance yields the satisfying pick first") {
  CnfFormula cnf;
  cnf.num_vars = 1;
  cnf.clauses = {{1}};
  GeneratedInstance gi = gen_sat(cnf);
  CandidateSpace space = CandidateSpace::over(gi.signature, 1);
  std::vector<AssertionSet> found;
  enumerate_hypotheses(gi.problem, space, [&](const AssertionSet& h, const Verdict&) {
    found.push_back(h);
    return true;
  });
  REQUIRE(!found.empty());
  REQUIRE(found.front() == AssertionSet{inst("Ax1", "m")});
}

TEST_CASE("reachability instances") {
  GeneratedInstance path = gen_reach(parse_digraph("s t\ns v\nv t\n"));
  REQUIRE(path.problem.kb.dialect == Dialect::DlLiteCore);
  REQUIRE(is_hypothesis(path.problem, *path.hypothesis));
  REQUIRE(exists_hypothesis_over(path.problem, CandidateSpace::over(path.signature)).exists);

  GeneratedInstance split = gen_reach(parse_digraph("s t\nt v\n"));
  REQUIRE(!is_hypothesis(split.problem, *split.hypothesis));
  REQUIRE(!exists_hypothesis_over(split.problem, CandidateSpace::over(split.signature)).exists);

  // s = t: reachable via the empty path; validation must reject the problem
  // since the observation is its own hypothesis inside the signature...
  // the instance stays valid because the base KB does not entail it.
  GeneratedInstance self = gen_reach(parse_digraph("s s\ns v\n"));
  REQUIRE(is_hypothesis(self.problem, *self.hypothesis));
}

TEST_CASE("MUS verification instances") {
  CnfFormula phi;  // {{x}, {-x}}
  phi.num_vars = 1;
  phi.clauses = {{1}, {-1}};
  GeneratedInstance gi = gen_cnf_ar(phi, {1, 2});
  REQUIRE(gi.problem.semantics == Semantics::Ar);
  Verdict v = verify(gi.problem, *gi.hypothesis, {{Criterion::Subset}, std::nullopt, false});
  REQUIRE(v.is_hypothesis);
  REQUIRE(v.minimal.at(Criterion::Subset));

  CnfFormula phi2;  // {{x}, {-x}, {y}}: hypothesis but not subset-minimal
  phi2.num_vars = 2;
  phi2.clauses = {{1}, {-1}, {2}};
  GeneratedInstance gi2 = gen_cnf_ar(phi2, {1, 2, 3});
  Verdict v2 = verify(gi2.problem, *gi2.hypothesis, {{Criterion::Subset}, std::nullopt, false});
  REQUIRE(v2.is_hypothesis);
  REQUIRE(!v2.minimal.at(Criterion::Subset));

  CnfFormula sat;  // {{x}}: satisfiable, not a hypothesis
  sat.num_vars = 1;
  sat.clauses = {{1}};
  GeneratedInstance gi3 = gen_cnf_ar(sat, {1});
  REQUIRE(!is_hypothesis(gi3.problem, *gi3.hypothesis));
}

TEST_CASE("padded cardinality-minimality instances") {
  CnfFormula unsat;
  unsat.num_vars = 1;
  unsat.clauses = {{1}, {-1}};
  GeneratedInstance gi = gen_cnf_ar_padded(unsat);
  Verdict v = verify(gi.problem, *gi.hypothesis, {{Criterion::Cardinality}, std::nullopt, false});
  REQUIRE(v.is_hypothesis);
  REQUIRE(v.minimal.at(Criterion::Cardinality));

  CnfFormula sat;
  sat.num_vars = 1;
  sat.clauses = {{1}};
  GeneratedInstance gs = gen_cnf_ar_padded(sat);
  REQUIRE(!is_hypothesis(gs.problem, *gs.hypothesis));
}

TEST_CASE("generated instances validate as problems") {
  // construction already runs make_problem; spot-check the promise conditions
  CnfFormula phi;
  phi.num_vars = 2;
  phi.clauses = {{1, -2}};
  GeneratedInstance gi = gen_sat(phi);
  REQUIRE(!is_consistent(gi.problem.kb));
  REQUIRE(!entails(gi.problem.kb, gi.problem.observation, gi.problem.semantics));
}

TEST_CASE("random KBs are deterministic per seed") {
  RandomKbParams params;
  REQUIRE(serialize_kb(gen_random_kb(params, 1)) == serialize_kb(gen_random_kb(params, 1)));
  REQUIRE(serialize_kb(gen_random_kb(params, 1)) != serialize_kb(gen_random_kb(params, 2)));
  params.dialect = Dialect::DlLiteR;
  REQUIRE(serialize_kb(gen_random_kb(params, 9)) == serialize_kb(gen_random_kb(params, 9)));
}

TEST_CASE("random generation respects constraints") {
  RandomKbParams no_neg;
  no_neg.disjointness_ratio = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    REQUIRE(is_consistent(gen_random_kb(no_neg, seed)));

  RandomKbParams incons;
  incons.require_inconsistent = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    REQUIRE(!is_consistent(gen_random_kb(incons, seed)));

  RandomKbParams impossible;
  impossible.disjointness_ratio = 0.0;
  impossible.require_inconsistent = true;
  impossible.max_retries = 5;
  REQUIRE_THROWS_AS(gen_random_kb(impossible, 1), BudgetError);
}

TEST_CASE("inconsistency rate over the seed sweep") {
  // pinned regression value: measured once over seeds 1..100 with defaults
  constexpr int kPinnedInconsistentCount = 69;
  int inconsistent = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    if (!is_consistent(gen_random_kb({}, seed))) ++inconsistent;
  REQUIRE(inconsistent >= 30);
  REQUIRE(inconsistent == kPinnedInconsistentCount);
}

TEST_CASE("mini reduction sweep") {
  // all CNFs over 2 variables with up to 2 nonempty clauses
  std::vector<std::vector<int>> clause_pool;
  for (int a : {1, -1, 2, -2}) clause_pool.push_back({a});
  clause_pool.push_back({1, 2});
  clause_pool.push_back({1, -2});
  clause_pool.push_back({-1, 2});
  clause_pool.push_back({-1, -2});
  for (std::size_t i = 0; i < clause_pool.size(); ++i)
    for (std::size_t j = i; j < clause_pool.size(); ++j) {
      CnfFormula cnf;
      cnf.num_vars = 2;
      cnf.clauses = {clause_pool[i]};
      if (j != i) cnf.clauses.push_back(clause_pool[j]);
      GeneratedInstance gi = gen_sat(cnf);
      bool exists = exists_hypothesis_over(gi.problem, CandidateSpace::over(gi.signature)).exists;
      REQUIRE(exists == testutil::truth_table_sat(cnf));

      std::vector<int> all;
      for (int c = 1; c <= static_cast<int>(cnf.clauses.size()); ++c) all.push_back(c);
      GeneratedInstance ar = gen_cnf_ar(cnf, all);
      REQUIRE(is_hypothesis(ar.problem, *ar.hypothesis) == !testutil::truth_table_sat(cnf));
    }
}
