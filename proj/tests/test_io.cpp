#include <catch2/catch_amalgamated.hpp>

#include "abduct/io.hpp"
#include "abduct/gen.hpp"
#include "helpers.hpp"

using namespace abduct;
using testutil::inst;
using testutil::rel;

TEST_CASE("parse a minimal document") {
  KnowledgeBase kb = parse_kb("(dialect elbot)(tbox (sub (and B1 B2) Bot))(abox (inst B1 a))");
  REQUIRE(kb.dialect == Dialect::ElBot);
  REQUIRE(kb.tbox.size() == 1);
  REQUIRE(kb.abox.size() == 1);
  REQUIRE(kb.abox[0] == inst("B1", "a"));
  REQUIRE(kb.tbox[0].lhs.kind == Concept::Kind::And);
  REQUIRE(kb.tbox[0].rhs.kind == Concept::Kind::Bot);
}

TEST_CASE("role inclusions are rejected outside dllite-r") {
  REQUIRE_THROWS_AS(parse_kb("(dialect dllite-core)(tbox (rsub r s))(abox)"), DialectError);
  REQUIRE_THROWS_AS(parse_kb("(dialect elbot)(tbox (rsub r s))(abox)"), DialectError);
  REQUIRE_NOTHROW(parse_kb("(dialect dllite-r)(tbox (rsub r s))(abox)"));
}

TEST_CASE("the example family file parses to 5 axioms and 5 assertions") {
  KnowledgeBase kb = testutil::load_kb("family_a3.kb");
  REQUIRE(kb.tbox.size() == 5);
  REQUIRE(kb.abox.size() == 5);
}

TEST_CASE("dialect grammar restrictions") {
  // negation, inverses and conjunctions land in the right dialects only
  REQUIRE_THROWS_AS(parse_kb("(dialect elbot)(tbox (sub A (not B)))(abox)"), DialectError);
  REQUIRE_THROWS_AS(parse_kb("(dialect elbot)(tbox (sub (some (inv r)) B))(abox)"), DialectError);
  REQUIRE_THROWS_AS(parse_kb("(dialect dllite-core)(tbox (sub (and A B) C))(abox)"), DialectError);
  REQUIRE_THROWS_AS(parse_kb("(dialect dllite-core)(tbox (sub (some r A) B))(abox)"), DialectError);
  REQUIRE_THROWS_AS(parse_kb("(dialect dllite-core)(tbox (sub (not A) B))(abox)"), DialectError);
  REQUIRE_NOTHROW(parse_kb("(dialect dllite-r)(tbox (sub (some (inv r)) (not A)))(abox)"));
  REQUIRE_NOTHROW(parse_kb("(dialect dllite-r)(tbox (rsub r (not s)))(abox)"));
  REQUIRE_THROWS_AS(parse_kb("(dialect dllite-r)(tbox (rsub (not r) s))(abox)"), DialectError);
}

TEST_CASE("parse errors carry positions and name rules") {
  try {
    parse_kb("(dialect elbot)(tbox\n  (sub A ))(abox)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.line() == 2);
  }
  REQUIRE_THROWS_AS(parse_kb("(dialect elbot)(tbox (frob A B))(abox)"), ParseError);
  REQUIRE_THROWS_AS(parse_kb("(dialect elbot)(tbox)(abox (inst __q1 a))"), ParseError);
  REQUIRE_THROWS_AS(parse_kb("(dialect elbot)(tbox)(abox (inst 1A a))"), ParseError);
  REQUIRE_THROWS_AS(parse_kb("(dialect elbot)(tbox)(abox (inst Top a))"), ParseError);
  REQUIRE_THROWS_AS(parse_kb("(dialect martian)(tbox)(abox)"), ParseError);
  REQUIRE_THROWS_AS(parse_kb("(dialect elbot)(tbox)(abox"), ParseError);
}

TEST_CASE("serialization is canonical") {
  KnowledgeBase empty;
  empty.dialect = Dialect::ElBot;
  REQUIRE(serialize_kb(empty) == "(dialect elbot)\n(tbox)\n(abox)\n");

  // duplicate assertions collapse
  KnowledgeBase kb = parse_kb("(dialect elbot)(tbox)(abox (inst B a) (inst B a) (inst A a))");
  REQUIRE(kb.abox.size() == 2);
  REQUIRE(serialize_kb(kb) == "(dialect elbot)\n(tbox)\n(abox\n  (inst A a)\n  (inst B a)\n)\n");
}

TEST_CASE("round trips") {
  for (const char* fixture : {"family_a1.kb", "family_a2.kb", "family_a3.kb", "nonconvex.kb",
                              "dllite_ab.kb"}) {
    KnowledgeBase kb = testutil::load_kb(fixture);
    std::string once = serialize_kb(kb);
    KnowledgeBase back = parse_kb(once);
    REQUIRE(back == kb);
    REQUIRE(serialize_kb(back) == once);
  }
}

TEST_CASE("round trips on random KBs") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomKbParams params;
    params.dialect = seed % 3 == 0   ? Dialect::ElBot
                     : seed % 3 == 1 ? Dialect::DlLiteCore
                                     : Dialect::DlLiteR;
    KnowledgeBase kb = gen_random_kb(params, seed);
    std::string once = serialize_kb(kb);
    KnowledgeBase back = parse_kb(once);
    REQUIRE(back == kb);
    REQUIRE(serialize_kb(back) == once);
  }
}

TEST_CASE("signature_of") {
  KnowledgeBase kb = testutil::load_kb("family_a1.kb");
  Signature sig = signature_of(kb);
  REQUIRE(sig.concepts == std::set<std::string>{"B1", "B2", "C1", "C2", "D", "E"});
  REQUIRE(sig.roles.empty());
  REQUIRE(sig.individuals == std::set<std::string>{"a"});

  KnowledgeBase empty;
  REQUIRE(signature_of(empty) == Signature{});

  KnowledgeBase role_only = parse_kb("(dialect elbot)(tbox)(abox (rel r a b))");
  Signature rsig = signature_of(role_only);
  REQUIRE(rsig.concepts.empty());
  REQUIRE(rsig.roles == std::set<std::string>{"r"});
  REQUIRE(rsig.individuals == std::set<std::string>{"a", "b"});
}

TEST_CASE("signature is monotone under abox union") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    KnowledgeBase kb = gen_random_kb({}, seed);
    KnowledgeBase grown = gen_random_kb({}, seed + 1000);
    KnowledgeBase merged = kb;
    merged.abox = set_union(kb.abox, grown.abox);
    Signature small = signature_of(kb);
    Signature big = signature_of(merged);
    REQUIRE(std::includes(big.concepts.begin(), big.concepts.end(), small.concepts.begin(),
                          small.concepts.end()));
    REQUIRE(std::includes(big.roles.begin(), big.roles.end(), small.roles.begin(),
                          small.roles.end()));
    REQUIRE(std::includes(big.individuals.begin(), big.individuals.end(),
                          small.individuals.begin(), small.individuals.end()));
  }
}

TEST_CASE("signature, abox and query files") {
  Signature sig = parse_signature("(signature (concepts A B) (roles r) (individuals a))");
  REQUIRE(sig.concepts == std::set<std::string>{"A", "B"});
  REQUIRE(sig.roles == std::set<std::string>{"r"});
  REQUIRE(sig.individuals == std::set<std::string>{"a"});
  REQUIRE(parse_signature(serialize_signature(sig)) == sig);

  AssertionSet abox = parse_abox("(abox (rel r a b) (inst A a))");
  REQUIRE(abox == AssertionSet{inst("A", "a"), rel("r", "a", "b")});
  REQUIRE(parse_abox(serialize_abox(abox)) == abox);

  Biq q = parse_biq("(biq (some r D) m)");
  REQUIRE(!q.atomic());
  REQUIRE(q.individual == "m");
  REQUIRE(parse_biq(serialize_biq(q)) == q);
  REQUIRE(parse_biq("(biq D a)").atomic());
}
