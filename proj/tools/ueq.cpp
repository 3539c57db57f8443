#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ueq/comm.hpp"
#include "ueq/errors.hpp"
#include "ueq/grammar.hpp"
#include "ueq/report.hpp"

namespace {

// Exit codes: 0 consistent-with-equal / success, 1 proven different,
// 2 usage, parse, alphabet or guard errors, 3 promise violated.
struct CliExit {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    throw CliExit{2};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Loaded {
  ueq::CheckInput input;
  ueq::Grammar grammar;
};

Loaded load_grammar(const std::string& path) {
  std::string text = read_file(path);
  ueq::Grammar g;
  try {
    g = ueq::parse_grammar(text);
  } catch (const ueq::ParseError& e) {
    std::cerr << path << ": error: " << e.what() << "\n";
    throw CliExit{2};
  }
  ueq::Diagnostics diags = ueq::validate(g);
  for (const ueq::Diagnostic& d : diags.items)
    std::cerr << path << ": "
              << (d.severity == ueq::Severity::Error ? "error" : "warning")
              << ": " << d.message << "\n";
  if (diags.has_errors()) throw CliExit{2};
  return {{path, ueq::fnv1a64_hex(text), ueq::to_cnf(g)}, std::move(g)};
}

int cmd_normalize(const std::string& path) {
  Loaded l = load_grammar(path);
  const ueq::CnfGrammar& cnf = l.input.cnf;
  std::cout << "# CNF of " << path << ": size " << ueq::grammar_size(cnf)
            << "\n";
  std::cout << "# generates empty word: "
            << (cnf.generates_empty_word ? "true" : "false") << "\n";
  if (cnf.empty_language()) std::cout << "# language is empty\n";
  std::cout << ueq::render_grammar(ueq::cnf_to_grammar(cnf));
  return 0;
}

int cmd_smt(const std::string& p1, const std::string& p2,
            const std::string& out_path) {
  Loaded a = load_grammar(p1);
  Loaded b = load_grammar(p2);
  std::string sentence = ueq::emit_smt_sentence(a.input.cnf, b.input.cnf);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return 2;
  }
  out << sentence;
  std::cout << "SMT sentence written to " << out_path << "\n";
  return 0;
}

int cmd_check(const std::string& p1, const std::string& p2,
              const ueq::CheckOptions& opts, bool json) {
  Loaded a = load_grammar(p1);
  Loaded b = load_grammar(p2);
  if (opts.emit_smt_path) {
    std::string sentence = ueq::emit_smt_sentence(a.input.cnf, b.input.cnf);
    std::ofstream out(*opts.emit_smt_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << *opts.emit_smt_path << "'\n";
      return 2;
    }
    out << sentence;
  }
  ueq::EquivalenceReport rep = ueq::run_check(a.input, b.input, opts);
  std::cout << (json ? rep.to_json_text() : rep.human_text());
  switch (rep.overall) {
    case ueq::OverallKind::ConsistentWithEqual: return 0;
    case ueq::OverallKind::ProvenDifferent: return 1;
    case ueq::OverallKind::PromiseViolated: return 3;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivalence laboratory for unambiguous context-free grammars"};
  app.require_subcommand(1);

  std::string norm_file;
  CLI::App* normalize =
      app.add_subcommand("normalize", "convert a grammar to Chomsky normal form");
  normalize->add_option("file", norm_file, "grammar file")->required();

  std::string check_g1, check_g2;
  ueq::CheckOptions opts;
  std::string smt_out;
  bool json = false;
  CLI::App* check = app.add_subcommand(
      "check", "run every equivalence strategy on two grammars");
  check->add_option("g1", check_g1, "first grammar file")->required();
  check->add_option("g2", check_g2, "second grammar file")->required();
  check->add_option("--max-len", opts.max_len,
                    "length bound for word-level stages");
  check->add_option("--degree", opts.degree,
                    "total-degree bound for exact Parikh coefficients");
  check->add_option("--dim", opts.dim, "matrix dimension d");
  check->add_option("--trials", opts.trials, "matrix assignments per test");
  check->add_option("--samples", opts.samples,
                    "sample points for the numeric comparison");
  check->add_option("--prime", opts.prime, "field modulus (prime)");
  check->add_option("--seed", opts.seed, "seed for every randomized stage");
  check->add_option("--tol", opts.tol, "numeric comparison tolerance");
  check->add_option("--emit-smt", smt_out,
                    "also write the commutative-image SMT sentence here");
  check->add_flag("--json", json, "structured single-document report");

  int demo_dim = 2;
  std::uint64_t demo_prime = 2147483647ULL;
  std::uint64_t demo_seed = 0;
  CLI::App* demo = app.add_subcommand(
      "identity-demo", "polynomial-identity walkthrough at dimension d");
  demo->add_option("--dim", demo_dim, "matrix dimension (1..4)")->required();
  demo->add_option("--prime", demo_prime, "field modulus (prime)");
  demo->add_option("--seed", demo_seed, "seed");

  std::string smt_g1, smt_g2, smt_path;
  CLI::App* smt = app.add_subcommand(
      "smt", "emit the commutative-image equality sentence (SMT-LIB 2, NRA)");
  smt->add_option("g1", smt_g1, "first grammar file")->required();
  smt->add_option("g2", smt_g2, "second grammar file")->required();
  smt->add_option("-o,--output", smt_path, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (normalize->parsed()) return cmd_normalize(norm_file);
    if (check->parsed()) {
      if (!smt_out.empty()) opts.emit_smt_path = smt_out;
      return cmd_check(check_g1, check_g2, opts, json);
    }
    if (demo->parsed()) {
      std::cout << ueq::identity_demo(demo_dim, demo_prime, demo_seed);
      return 0;
    }
    if (smt->parsed()) return cmd_smt(smt_g1, smt_g2, smt_path);
  } catch (const CliExit& e) {
    return e.code;
  } catch (const ueq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
