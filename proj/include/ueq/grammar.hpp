#ifndef UEQ_GRAMMAR_HPP
#define UEQ_GRAMMAR_HPP

#include <string>
#include <string_view>
#include <vector>

#include "ueq/errors.hpp"

namespace ueq {

/// One production. An empty right-hand side denotes the empty word.
struct Rule {
  std::string lhs;
  std::vector<std::string> rhs;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/**
 * A context-free grammar as written by the user.
 *
 * Symbol order is significant: `terminals` is the alphabet in declaration
 * (first-appearance) order and fixes the letter order used by every
 * lexicographic comparison downstream. Terminal and nonterminal name spaces
 * are disjoint (lowercase-initial vs uppercase-initial tokens).
 */
struct Grammar {
  std::vector<std::string> terminals;
  std::vector<std::string> nonterminals;
  std::vector<Rule> rules;
  std::string start;

  bool is_terminal(std::string_view name) const;
  bool is_nonterminal(std::string_view name) const;

  friend bool operator==(const Grammar&, const Grammar&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  // 1-based source position; 0 when the finding is not tied to a location.
  int line = 0;
  int column = 0;
};

struct Diagnostics {
  std::vector<Diagnostic> items;

  bool has_errors() const;
  bool empty() const { return items.empty(); }
};

/**
 * A grammar in Chomsky normal form with interned symbols.
 *
 * The body never derives the empty word; whether the original language
 * contains it is recorded out-of-band in `generates_empty_word`. Rule ids
 * refer to `nonterminals` / `terminals` by index. `terminals` keeps the
 * source grammar's full alphabet in declaration order even when conversion
 * drops every rule mentioning some letter: the alphabet is part of the
 * language's signature, not of the rule set.
 */
struct CnfGrammar {
  struct BinRule {
    int lhs, left, right;
    friend bool operator==(const BinRule&, const BinRule&) = default;
  };
  struct TermRule {
    int lhs, terminal;
    friend bool operator==(const TermRule&, const TermRule&) = default;
  };

  std::vector<std::string> terminals;
  std::vector<std::string> nonterminals;
  std::vector<BinRule> binary_rules;
  std::vector<TermRule> terminal_rules;
  int start = 0;
  bool generates_empty_word = false;

  /// Index of a letter in the alphabet, or -1.
  int terminal_id(std::string_view name) const;
  int nonterminal_count() const { return static_cast<int>(nonterminals.size()); }

  /// True iff L(g) = ∅ — the distinguished result of converting a grammar
  /// whose start symbol derives nothing.
  bool empty_language() const {
    return binary_rules.empty() && terminal_rules.empty() && !generates_empty_word;
  }
};

/// Number of rules, the size |G| of a CNF grammar.
int grammar_size(const CnfGrammar& g);

/**
 * Parse the grammar file format: rules `Lhs -> sym sym | sym ...` separated
 * by newlines or `;`, `#` comments, lowercase-initial terminals,
 * uppercase-initial nonterminals, `eps` for an empty right-hand side.
 * The start symbol is the lhs of the first rule. Throws ParseError.
 */
Grammar parse_grammar(std::string_view text);

/// Inverse printer: one rule per line, `eps` for empty right-hand sides.
/// parse_grammar(render_grammar(g)) == g whenever g's declaration order
/// equals first-appearance order (always true for parsed grammars).
std::string render_grammar(const Grammar& g);

/// Errors for undefined nonterminals and malformed symbol references,
/// warnings for unreachable or unproductive nonterminals.
Diagnostics validate(const Grammar& g);

/**
 * Chomsky normal form conversion: ε-rule elimination (recording whether
 * ε ∈ L(g)), unit-rule elimination, terminal lifting, binarization, removal
 * of unproductive and unreachable symbols, rule deduplication. Fresh names
 * are deterministic functions of the input. Requires validate(g) to report
 * no errors. An empty language comes back as an empty rule body with
 * generates_empty_word == false, not as an error.
 */
CnfGrammar to_cnf(const Grammar& g);

/// View a CNF grammar as a plain Grammar (used by the renderer).
Grammar cnf_to_grammar(const CnfGrammar& g);

/**
 * Letter-id translation table from `second`'s alphabet into `first`'s.
 * Two-grammar operations compare words in the first grammar's letter order;
 * the second grammar must use a subset-compatible alphabet. Throws
 * AlphabetMismatch otherwise. Entry j is the first-grammar id of second's
 * letter j.
 */
std::vector<int> alphabet_embedding(const CnfGrammar& first,
                                    const CnfGrammar& second);

}  // namespace ueq

#endif  // UEQ_GRAMMAR_HPP
