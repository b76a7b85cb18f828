// Command-line surface over the library: consistency, conflicts, repairs,
// entailment under classical/brave/AR semantics, abduction (existence,
// verification, enumeration), instance generators and the brute-force oracle.
//
// Exit codes: 0 = answered (whatever the boolean), 1 = invalid input or
// promise violation, 2 = budget exceeded, 3 = internal error. Boolean answers
// never leak into exit codes; scripts must parse the output.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abduct/abduction.hpp"
#include "abduct/gen.hpp"
#include "abduct/io.hpp"
#include "abduct/json_io.hpp"
#include "abduct/oracle.hpp"
#include "abduct/repair.hpp"

namespace {

using namespace abduct;

struct Options {
  std::string kb_path;
  std::string query_inline;
  std::string query_path;
  std::string semantics = "ar";
  std::string signature_path;
  std::string hypothesis_path;
  std::string minimality;
  bool require_conflict_confining = false;
  std::optional<std::size_t> max_size;
  std::size_t fresh_individuals = 0;
  std::string output = "text";
  Budget budget;
  OracleBudget oracle_budget;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
}

KnowledgeBase load_kb(const Options& opt) {
  if (opt.kb_path.empty()) throw ValidationError("--kb is required");
  return parse_kb(read_file(opt.kb_path));
}

Biq load_query(const Options& opt) {
  if (!opt.query_inline.empty() && !opt.query_path.empty())
    throw ValidationError("--query and --query-file are mutually exclusive");
  if (!opt.query_inline.empty()) return parse_biq(opt.query_inline);
  if (!opt.query_path.empty()) return parse_biq(read_file(opt.query_path));
  throw ValidationError("a query is required (--query or --query-file)");
}

Semantics parse_semantics(const std::string& s) {
  if (s == "classical") return Semantics::Classical;
  if (s == "brave") return Semantics::Brave;
  if (s == "ar") return Semantics::Ar;
  throw ValidationError("unknown semantics '" + s + "' (classical|brave|ar)");
}

std::optional<Criterion> parse_criterion(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "subset") return Criterion::Subset;
  if (s == "card") return Criterion::Cardinality;
  if (s == "conf-subset") return Criterion::ConflictSubset;
  if (s == "conf-card") return Criterion::ConflictCardinality;
  throw ValidationError("unknown minimality criterion '" + s +
                        "' (subset|card|conf-subset|conf-card)");
}

std::optional<CandidateSpace> load_space(const Options& opt) {
  if (opt.signature_path.empty()) return std::nullopt;
  return CandidateSpace::over(parse_signature(read_file(opt.signature_path)), opt.max_size);
}

void emit(const Options& opt, const Json& payload, const std::string& text) {
  if (opt.output == "json")
    std::cout << dump_line(payload);
  else
    std::cout << text;
}

std::string render_family(const AssertionSetFamily& family) {
  std::string out;
  for (const AssertionSet& set : family) {
    out += "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (i) out += ", ";
      out += serialize_assertion(set[i]);
    }
    out += "}\n";
  }
  return out;
}

std::string render_set(const std::optional<AssertionSet>& set) {
  if (!set) return "none";
  std::string out = "{";
  for (std::size_t i = 0; i < set->size(); ++i) {
    if (i) out += ", ";
    out += serialize_assertion((*set)[i]);
  }
  return out + "}";
}

// --- subcommand bodies ------------------------------------------------------

int run_check(const Options& opt) {
  bool consistent = is_consistent(load_kb(opt));
  emit(opt, Json{{"consistent", consistent}}, consistent ? "consistent\n" : "inconsistent\n");
  return 0;
}

int run_conflicts(const Options& opt) {
  AssertionSetFamily family = conflicts(load_kb(opt));
  emit(opt, Json{{"conflicts", to_json(family)}}, render_family(family));
  return 0;
}

int run_repairs(const Options& opt) {
  AssertionSetFamily family = repairs(load_kb(opt), opt.budget);
  emit(opt, Json{{"repairs", to_json(family)}}, render_family(family));
  return 0;
}

int run_entail(const Options& opt) {
  Biq q = load_query(opt);  // flag conflicts surface before any engine work
  KnowledgeBase kb = load_kb(opt);
  Semantics sem = parse_semantics(opt.semantics);
  std::optional<AssertionSet> witness;
  bool answer;
  bool explosion = false;
  if (sem == Semantics::Classical) {
    EntailmentResult r = entails_biq(kb, q);
    answer = r.entailed;
    explosion = r.explosion;
  } else {
    answer = entails(kb, q, sem, opt.budget, &witness);
  }
  emit(opt,
       Json{{"entails", answer},
            {"explosion", explosion},
            {"semantics", opt.semantics},
            {"witness", to_json(witness)}},
       std::string(answer ? "entailed" : "not entailed") +
           (witness ? " (witness repair " + render_set(witness) + ")" : "") + "\n");
  return 0;
}

int run_abduce_exists(const Options& opt) {
  Biq q = load_query(opt);
  KnowledgeBase kb = load_kb(opt);
  AbductionProblem p = make_problem(kb, q, parse_semantics(opt.semantics), opt.budget);
  std::optional<CandidateSpace> space = load_space(opt);
  if (!space && opt.fresh_individuals > 0)
    throw ValidationError("--fresh-individuals needs --signature");
  if (space && opt.fresh_individuals > 0) {
    Signature sig = space->signature;
    for (std::size_t i = 1; i <= opt.fresh_individuals; ++i) {
      std::string name = "fI" + std::to_string(i);
      while (sig.individuals.count(name)) name += "x";
      sig.individuals.insert(name);
    }
    space = CandidateSpace::over(sig, opt.max_size);
  }
  ExistsResult r = space ? exists_hypothesis_over(p, *space, opt.budget)
                         : exists_hypothesis(p, opt.budget);
  emit(opt,
       Json{{"exists", r.exists},
            {"fresh_individual", p.fresh_individual},
            {"witness", to_json(r.witness)}},
       std::string(r.exists ? "exists" : "no hypothesis exists") +
           (r.witness ? " (witness " + render_set(r.witness) + ")" : "") + "\n");
  return 0;
}

int run_abduce_verify(const Options& opt) {
  Biq q = load_query(opt);
  KnowledgeBase kb = load_kb(opt);
  AbductionProblem p = make_problem(kb, q, parse_semantics(opt.semantics), opt.budget);
  if (opt.hypothesis_path.empty()) throw ValidationError("--hypothesis is required");
  AssertionSet h = parse_abox(read_file(opt.hypothesis_path));
  VerifyOptions vopts;
  vopts.space = load_space(opt);
  vopts.require_conflict_confining = opt.require_conflict_confining;
  if (auto crit = parse_criterion(opt.minimality)) vopts.criteria.push_back(*crit);
  Verdict v = verify(p, h, vopts, opt.budget);
  std::string text = std::string(v.is_hypothesis ? "hypothesis" : "not a hypothesis");
  for (const auto& [crit, flag] : v.minimal)
    text += std::string("; ") + to_string(crit) + "-minimal: " + (flag ? "yes" : "no");
  text += std::string("; conflict-confining: ") + (v.conflict_confining ? "yes" : "no");
  if (v.counterexample) text += "; counterexample " + render_set(v.counterexample);
  emit(opt, to_json(v), text + "\n");
  return 0;
}

int run_abduce_enumerate(const Options& opt) {
  Biq q = load_query(opt);
  KnowledgeBase kb = load_kb(opt);
  AbductionProblem p = make_problem(kb, q, parse_semantics(opt.semantics), opt.budget);
  if (opt.signature_path.empty()) throw ValidationError("--signature is required");
  CandidateSpace space =
      CandidateSpace::over(parse_signature(read_file(opt.signature_path)), opt.max_size);
  Json arr = Json::array();
  std::string text;
  enumerate_hypotheses(
      p, space,
      [&](const AssertionSet& h, const Verdict& v) {
        arr.push_back(Json{{"hypothesis", to_json(h)}, {"verdict", to_json(v)}});
        text += render_set(h) + "\n";
        return true;
      },
      opt.budget, opt.require_conflict_confining);
  emit(opt, Json{{"hypotheses", arr}}, text.empty() ? "none\n" : text);
  return 0;
}

// --- generators --------------------------------------------------------------

int emit_instance(const Options& opt, const GeneratedInstance& inst, const std::string& prefix) {
  Json written = Json::object();
  write_file(prefix + ".kb", serialize_kb(inst.problem.kb));
  written["kb"] = prefix + ".kb";
  write_file(prefix + ".query", serialize_biq(inst.problem.observation));
  written["query"] = prefix + ".query";
  write_file(prefix + ".sig", serialize_signature(inst.signature));
  written["signature"] = prefix + ".sig";
  if (inst.hypothesis) {
    write_file(prefix + ".hyp", serialize_abox(*inst.hypothesis));
    written["hypothesis"] = prefix + ".hyp";
  }
  emit(opt, Json{{"semantics", to_string(inst.problem.semantics)}, {"written", written}},
       "wrote " + prefix + ".{kb,query,sig" + (inst.hypothesis ? ",hyp" : "") + "}\n");
  return 0;
}

// --- error rendering ---------------------------------------------------------

int fail(const Options& opt, const std::string& code, const std::string& message, int exit_code) {
  if (opt.output == "json")
    std::cerr << dump_line(Json{{"error", Json{{"code", code}, {"message", message}}}});
  else
    std::cerr << "error: " << message << "\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ABox abduction under repair semantics for EL-bot and DL-Lite"};
  app.require_subcommand(1);

  Options opt;
  if (const char* env = std::getenv("ABDUCT_BUDGET_REPAIRS"))
    opt.budget.max_repairs = std::strtoull(env, nullptr, 10);

  auto add_common = [&](CLI::App* cmd, bool with_kb = true) {
    if (with_kb) cmd->add_option("--kb", opt.kb_path, "knowledge base file");
    cmd->add_option("--output", opt.output, "output format (text|json)")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--max-repairs", opt.budget.max_repairs, "repair enumeration cap");
    cmd->add_option("--max-subsets", opt.budget.max_subsets, "hypothesis search cap");
  };
  auto add_query = [&](CLI::App* cmd) {
    cmd->add_option("--query", opt.query_inline, "query, e.g. \"(biq D a)\"");
    cmd->add_option("--query-file", opt.query_path, "file containing the query");
    cmd->add_option("--semantics", opt.semantics, "classical|brave|ar");
  };

  CLI::App* check = app.add_subcommand("check", "decide consistency");
  add_common(check);

  CLI::App* confl = app.add_subcommand("conflicts", "list all conflicts");
  add_common(confl);

  CLI::App* reps = app.add_subcommand("repairs", "list all repairs");
  add_common(reps);

  CLI::App* entail_cmd = app.add_subcommand("entail", "decide entailment");
  add_common(entail_cmd);
  add_query(entail_cmd);

  CLI::App* abduce = app.add_subcommand("abduce", "abduction problems");
  abduce->require_subcommand(1);

  CLI::App* aex = abduce->add_subcommand("exists", "decide hypothesis existence");
  add_common(aex);
  add_query(aex);
  aex->add_option("--signature", opt.signature_path, "restrict hypotheses to this signature");
  aex->add_option("--max-size", [&opt](const std::vector<std::string>& vals) {
    opt.max_size = std::stoull(vals[0]);
    return true;
  }, "hypothesis size bound");
  aex->add_option("--fresh-individuals", opt.fresh_individuals,
                  "add a pool of fresh individuals to the signature");

  CLI::App* aver = abduce->add_subcommand("verify", "verify a candidate hypothesis");
  add_common(aver);
  add_query(aver);
  aver->add_option("--hypothesis", opt.hypothesis_path, "hypothesis ABox file");
  aver->add_option("--minimality", opt.minimality, "subset|card|conf-subset|conf-card");
  aver->add_flag("--require-conflict-confining", opt.require_conflict_confining,
                 "restrict competing hypotheses to conflict-confining ones");
  aver->add_option("--signature", opt.signature_path, "candidate space for minimality search");
  aver->add_option("--max-size", [&opt](const std::vector<std::string>& vals) {
    opt.max_size = std::stoull(vals[0]);
    return true;
  }, "candidate size bound");

  CLI::App* aenum = abduce->add_subcommand("enumerate", "enumerate all hypotheses over a signature");
  add_common(aenum);
  add_query(aenum);
  aenum->add_option("--signature", opt.signature_path, "candidate signature (required)");
  aenum->add_option("--max-size", [&opt](const std::vector<std::string>& vals) {
    opt.max_size = std::stoull(vals[0]);
    return true;
  }, "hypothesis size bound");
  aenum->add_flag("--require-conflict-confining", opt.require_conflict_confining,
                  "only yield conflict-confining hypotheses");

  CLI::App* gen = app.add_subcommand("gen", "generate benchmark instances");
  gen->require_subcommand(1);
  std::string in_path, out_prefix, clause_list;
  bool padded = false;
  RandomKbParams rnd;
  std::uint64_t seed = 0;
  std::string rnd_dialect = "elbot";

  CLI::App* gsat = gen->add_subcommand("sat", "satisfiability instance from DIMACS");
  add_common(gsat, false);
  gsat->add_option("--cnf", in_path, "DIMACS CNF file")->required();
  gsat->add_option("--out-prefix", out_prefix, "output path prefix")->required();

  CLI::App* gqbf = gen->add_subcommand("qbf2", "2-QBF instance from QDIMACS");
  add_common(gqbf, false);
  gqbf->add_option("--qdimacs", in_path, "QDIMACS file (e block, then a block)")->required();
  gqbf->add_option("--out-prefix", out_prefix, "output path prefix")->required();

  CLI::App* greach = gen->add_subcommand("reach", "reachability instance from an edge list");
  add_common(greach, false);
  greach->add_option("--graph", in_path, "edge list file ('s t' header, then edges)")->required();
  greach->add_option("--out-prefix", out_prefix, "output path prefix")->required();

  CLI::App* gcnf = gen->add_subcommand("cnf-ar", "MUS verification instance from DIMACS");
  add_common(gcnf, false);
  gcnf->add_option("--cnf", in_path, "DIMACS CNF file")->required();
  gcnf->add_option("--clauses", clause_list, "1-based clause subset, e.g. 1,3 (default: all)");
  gcnf->add_flag("--padded", padded, "cardinality-minimality variant");
  gcnf->add_option("--out-prefix", out_prefix, "output path prefix")->required();

  CLI::App* grnd = gen->add_subcommand("random", "seeded random knowledge base");
  add_common(grnd, false);
  grnd->add_option("--seed", seed, "64-bit seed")->required();
  grnd->add_option("--dialect", rnd_dialect, "elbot|dllite-core|dllite-r");
  grnd->add_option("--concepts", rnd.n_concepts, "concept name pool");
  grnd->add_option("--roles", rnd.n_roles, "role name pool");
  grnd->add_option("--individuals", rnd.n_individuals, "individual name pool");
  grnd->add_option("--axioms", rnd.n_axioms, "TBox size");
  grnd->add_option("--assertions", rnd.n_assertions, "ABox size before deduplication");
  grnd->add_option("--disjointness-ratio", rnd.disjointness_ratio, "share of negative axioms");
  grnd->add_flag("--require-inconsistent", rnd.require_inconsistent,
                 "resample until the KB is inconsistent");
  grnd->add_option("--out", out_prefix, "output KB path")->required();

  // mirrors of the engine answers through literal subset enumeration
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force reference answers");
  oracle->group("");  // hidden from help
  oracle->require_subcommand(1);
  CLI::App* oconf = oracle->add_subcommand("conflicts", "");
  add_common(oconf);
  CLI::App* oreps = oracle->add_subcommand("repairs", "");
  add_common(oreps);
  CLI::App* oent = oracle->add_subcommand("entail", "");
  add_common(oent);
  add_query(oent);
  CLI::App* omin = oracle->add_subcommand("minimal", "");
  add_common(omin);
  add_query(omin);
  omin->add_option("--signature", opt.signature_path, "candidate signature (required)");
  omin->add_option("--minimality", opt.minimality, "subset|card|conf-subset|conf-card");
  omin->add_option("--max-size", [&opt](const std::vector<std::string>& vals) {
    opt.max_size = std::stoull(vals[0]);
    return true;
  }, "hypothesis size bound");
  omin->add_option("--max-abox", opt.oracle_budget.max_abox, "oracle ABox budget");
  omin->add_option("--max-candidates", opt.oracle_budget.max_candidates,
                   "oracle candidate budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (check->parsed()) return run_check(opt);
    if (confl->parsed()) return run_conflicts(opt);
    if (reps->parsed()) return run_repairs(opt);
    if (entail_cmd->parsed()) return run_entail(opt);
    if (abduce->parsed()) {
      if (aex->parsed()) return run_abduce_exists(opt);
      if (aver->parsed()) return run_abduce_verify(opt);
      if (aenum->parsed()) return run_abduce_enumerate(opt);
    }
    if (gen->parsed()) {
      if (gsat->parsed()) return emit_instance(opt, gen_sat(parse_dimacs(read_file(in_path))), out_prefix);
      if (gqbf->parsed())
        return emit_instance(opt, gen_qbf2(parse_qdimacs(read_file(in_path))), out_prefix);
      if (greach->parsed())
        return emit_instance(opt, gen_reach(parse_digraph(read_file(in_path))), out_prefix);
      if (gcnf->parsed()) {
        CnfFormula cnf = parse_dimacs(read_file(in_path));
        if (padded) return emit_instance(opt, gen_cnf_ar_padded(cnf), out_prefix);
        std::vector<int> subset;
        if (clause_list.empty()) {
          for (int j = 1; j <= static_cast<int>(cnf.clauses.size()); ++j) subset.push_back(j);
        } else {
          std::istringstream ss(clause_list);
          std::string tok;
          while (std::getline(ss, tok, ',')) subset.push_back(std::stoi(tok));
        }
        return emit_instance(opt, gen_cnf_ar(cnf, subset), out_prefix);
      }
      if (grnd->parsed()) {
        if (rnd_dialect == "elbot")
          rnd.dialect = Dialect::ElBot;
        else if (rnd_dialect == "dllite-core")
          rnd.dialect = Dialect::DlLiteCore;
        else if (rnd_dialect == "dllite-r")
          rnd.dialect = Dialect::DlLiteR;
        else
          throw ValidationError("unknown dialect '" + rnd_dialect + "'");
        KnowledgeBase kb = gen_random_kb(rnd, seed);
        write_file(out_prefix, serialize_kb(kb));
        emit(opt, Json{{"written", Json{{"kb", out_prefix}}}, {"consistent", is_consistent(kb)}},
             "wrote " + out_prefix + "\n");
        return 0;
      }
    }
    if (oracle->parsed()) {
      if (oconf->parsed()) {
        AssertionSetFamily family = oracle_conflicts(load_kb(opt), opt.oracle_budget);
        emit(opt, Json{{"conflicts", to_json(family)}}, render_family(family));
        return 0;
      }
      if (oreps->parsed()) {
        AssertionSetFamily family = oracle_repairs(load_kb(opt), opt.oracle_budget);
        emit(opt, Json{{"repairs", to_json(family)}}, render_family(family));
        return 0;
      }
      if (oent->parsed()) {
        bool answer = oracle_entails(load_kb(opt), load_query(opt), parse_semantics(opt.semantics),
                                     opt.oracle_budget);
        emit(opt, Json{{"entails", answer}, {"semantics", opt.semantics}},
             std::string(answer ? "entailed" : "not entailed") + "\n");
        return 0;
      }
      if (omin->parsed()) {
        KnowledgeBase kb = load_kb(opt);
        AbductionProblem p =
            make_problem(kb, load_query(opt), parse_semantics(opt.semantics), opt.budget);
        if (opt.signature_path.empty()) throw ValidationError("--signature is required");
        CandidateSpace space =
            CandidateSpace::over(parse_signature(read_file(opt.signature_path)), opt.max_size);
        AssertionSetFamily family =
            oracle_minimal_hypotheses(p, space, parse_criterion(opt.minimality), opt.oracle_budget);
        emit(opt, Json{{"hypotheses", to_json(family)}}, render_family(family));
        return 0;
      }
    }
    return fail(opt, "internal", "no subcommand dispatched", 3);
  } catch (const BudgetError& e) {
    return fail(opt, "budget", e.what(), 2);
  } catch (const ParseError& e) {
    return fail(opt, "parse", e.what(), 1);
  } catch (const DialectError& e) {
    return fail(opt, "dialect", e.what(), 1);
  } catch (const ValidationError& e) {
    return fail(opt, "validation", e.what(), 1);
  } catch (const InternalError& e) {
    return fail(opt, "internal", e.what(), 3);
  } catch (const std::exception& e) {
    return fail(opt, "internal", e.what(), 3);
  }
}
