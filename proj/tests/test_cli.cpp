#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  std::string out_path = "cli_out_" + std::to_string(++counter) + ".tmp";
  std::string err_path = "cli_err_" + std::to_string(counter) + ".tmp";
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(ABDUCT_CLI_PATH) + " " + args +
                    " > " + out_path + " 2> " + err_path;
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

std::string fx(const std::string& name) { return testutil::fixture_path(name); }

std::string golden_path(const std::string& name) {
  return std::string(ABDUCT_SOURCE_DIR) + "/tests/golden/" + name;
}

void check_golden(const std::string& name, const std::string& args) {
  CliResult first = run_cli(args);
  INFO("command: " << args);
  INFO("stderr: " << first.err);
  REQUIRE(first.exit_code == 0);
  CliResult second = run_cli(args);
  REQUIRE(first.out == second.out);  // determinism across runs
  std::string expected = slurp(golden_path(name));
  if (expected.empty() && std::getenv("ABDUCT_WRITE_GOLDEN")) {
    std::ofstream out(golden_path(name), std::ios::binary);
    out << first.out;
    return;
  }
  INFO("golden file: " << name);
  REQUIRE(first.out == expected);
}

}  // namespace

TEST_CASE("cli golden outputs") {
  check_golden("check_a2.json", "check --kb " + fx("family_a2.kb") + " --output json");
  check_golden("conflicts_a2.json", "conflicts --kb " + fx("family_a2.kb") + " --output json");
  check_golden("repairs_a2.json", "repairs --kb " + fx("family_a2.kb") + " --output json");
  check_golden("entail_ar_a2.json", "entail --kb " + fx("family_a2.kb") +
                                        " --semantics ar --query \"(biq D a)\" --output json");
  check_golden("entail_brave_a2.json", "entail --kb " + fx("family_a2.kb") +
                                           " --semantics brave --query \"(biq D a)\" --output json");
  check_golden("exists_a2.json", "abduce exists --kb " + fx("family_a2.kb") +
                                     " --semantics ar --query \"(biq D a)\" --output json");
  check_golden("verify_nonconvex_a1.json",
               "abduce verify --kb " + fx("nonconvex.kb") +
                   " --semantics ar --query \"(biq D a)\" --hypothesis " +
                   fx("nonconvex_a1.hyp") + " --minimality subset --output json");
  check_golden("verify_nonconvex_a2.json",
               "abduce verify --kb " + fx("nonconvex.kb") +
                   " --semantics ar --query \"(biq D a)\" --hypothesis " +
                   fx("nonconvex_a2.hyp") + " --output json");
  check_golden("enumerate_nonconvex.json",
               "abduce enumerate --kb " + fx("nonconvex.kb") +
                   " --semantics ar --query \"(biq D a)\" --signature " +
                   fx("nonconvex_sig.sig") + " --max-size 2 --output json");
}

TEST_CASE("cli entailment answers on the example family") {
  CliResult a1 = run_cli("entail --kb " + fx("family_a1.kb") +
                         " --semantics ar --query \"(biq D a)\" --output json");
  REQUIRE(a1.exit_code == 0);
  REQUIRE(a1.out.find("\"entails\":true") != std::string::npos);
  CliResult a2 = run_cli("entail --kb " + fx("family_a2.kb") +
                         " --semantics ar --query \"(biq D a)\" --output json");
  REQUIRE(a2.exit_code == 0);  // boolean answers never leak into exit codes
  REQUIRE(a2.out.find("\"entails\":false") != std::string::npos);
}

TEST_CASE("cli exists reports the trivial witness") {
  CliResult r = run_cli("abduce exists --kb " + fx("family_a2.kb") +
                        " --semantics ar --query \"(biq D a)\" --output json");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("\"exists\":true") != std::string::npos);
  REQUIRE(r.out.find("[[\"inst\",\"D\",\"a\"]]") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  // promise violation: the observation is already AR-entailed
  CliResult promise = run_cli("abduce exists --kb " + fx("family_a1.kb") +
                              " --semantics ar --query \"(biq D a)\" --output json");
  REQUIRE(promise.exit_code == 1);
  REQUIRE(promise.err.find("\"code\":\"validation\"") != std::string::npos);

  // malformed input
  CliResult parse = run_cli("entail --kb " + fx("family_a1.kb") +
                            " --semantics ar --query \"(biq D\" --output json");
  REQUIRE(parse.exit_code == 1);

  // budget exceeded via the environment override
  CliResult budget = run_cli("repairs --kb " + fx("family_a2.kb") + " --output json",
                             "ABDUCT_BUDGET_REPAIRS=2");
  REQUIRE(budget.exit_code == 2);
  REQUIRE(budget.err.find("\"code\":\"budget\"") != std::string::npos);

  // answered negatively still exits 0
  CliResult no = run_cli("check --kb " + fx("family_a2.kb") + " --output json");
  REQUIRE(no.exit_code == 0);
  REQUIRE(no.out.find("\"consistent\":false") != std::string::npos);
}

TEST_CASE("cli text output stays terse") {
  CliResult r = run_cli("check --kb " + fx("family_a1.kb"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out == "inconsistent\n");
}

TEST_CASE("cli generators write instance files") {
  std::string dir = "cli_gen_tmp";
  int rc = std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
  REQUIRE(rc == 0);
  std::ofstream cnf(dir + "/f.cnf");
  cnf << "p cnf 1 2\n1 0\n-1 0\n";
  cnf.close();
  CliResult r = run_cli("gen sat --cnf " + dir + "/f.cnf --out-prefix " + dir + "/inst --output json");
  REQUIRE(r.exit_code == 0);
  abduct::KnowledgeBase kb = abduct::parse_kb(slurp(dir + "/inst.kb"));
  REQUIRE(!abduct::is_consistent(kb));
  abduct::Biq q = abduct::parse_biq(slurp(dir + "/inst.query"));
  REQUIRE(q.atomic());
  abduct::Signature sig = abduct::parse_signature(slurp(dir + "/inst.sig"));
  REQUIRE(sig.concepts == std::set<std::string>{"Ax1", "Axn1"});

  CliResult rnd1 = run_cli("gen random --seed 5 --out " + dir + "/a.kb --output json");
  CliResult rnd2 = run_cli("gen random --seed 5 --out " + dir + "/b.kb --output json");
  REQUIRE(rnd1.exit_code == 0);
  REQUIRE(slurp(dir + "/a.kb") == slurp(dir + "/b.kb"));
  rc = std::system(("rm -rf " + dir).c_str());
  REQUIRE(rc == 0);
}

TEST_CASE("cli oracle subcommand mirrors the engine") {
  CliResult engine = run_cli("repairs --kb " + fx("family_a2.kb") + " --output json");
  CliResult oracle = run_cli("oracle repairs --kb " + fx("family_a2.kb") + " --output json");
  REQUIRE(oracle.exit_code == 0);
  REQUIRE(engine.out == oracle.out);
}
