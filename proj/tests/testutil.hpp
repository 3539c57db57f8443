#ifndef UEQ_TESTS_TESTUTIL_HPP
#define UEQ_TESTS_TESTUTIL_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ueq/grammar.hpp"
#include "ueq/oracle.hpp"

namespace testutil {

inline ueq::Grammar parse(const std::string& text) {
  return ueq::parse_grammar(text);
}

inline ueq::CnfGrammar cnf(const std::string& text) {
  return ueq::to_cnf(ueq::parse_grammar(text));
}

// The classic pair {a, ab} and {a, ba}: different languages, equal commutative images.
inline const char* kPairAb = "S1 -> A1 B1 | a ; A1 -> a ; B1 -> b";
inline const char* kPairBa = "S2 -> B2 A2 | a ; A2 -> a ; B2 -> b";

// Dyck language over a/b standing in for ( and ).
inline const char* kDyck = "S -> a S b S | eps";

// Ambiguous on purpose: every word a^n with n >= 3 has several trees.
inline const char* kAmbiguous = "S -> S S | a";

// A five-word finite language {ab, ba, bba, ccde, bab}.
inline const char* kFiveWords =
    "S -> a b | b a | b b a | c c d e | b a b";

/**
 * Independent membership oracle on the ORIGINAL grammar: the set of words
 * of length <= max_len derivable from the start symbol, via a bottom-up
 * word-set fixpoint. Shares no code with the CNF conversion or CYK.
 */
inline std::set<std::vector<std::string>> enumerate_language_bruteforce(
    const ueq::Grammar& g, std::size_t max_len) {
  using WordS = std::vector<std::string>;
  std::map<std::string, std::set<WordS>> derivable;
  for (const std::string& nt : g.nonterminals) derivable[nt];

  auto is_terminal = [&](const std::string& s) { return g.is_terminal(s); };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const ueq::Rule& r : g.rules) {
      // All concatenations of choices for each rhs symbol, length-capped.
      std::set<WordS> partial{WordS{}};
      for (const std::string& sym : r.rhs) {
        std::set<WordS> next;
        if (is_terminal(sym)) {
          for (const WordS& w : partial) {
            if (w.size() + 1 > max_len) continue;
            WordS e = w;
            e.push_back(sym);
            next.insert(std::move(e));
          }
        } else {
          for (const WordS& w : partial)
            for (const WordS& tail : derivable[sym]) {
              if (w.size() + tail.size() > max_len) continue;
              WordS e = w;
              e.insert(e.end(), tail.begin(), tail.end());
              next.insert(std::move(e));
            }
        }
        partial = std::move(next);
        if (partial.empty()) break;
      }
      for (const WordS& w : partial)
        if (derivable[r.lhs].insert(w).second) changed = true;
    }
  }
  return derivable[g.start];
}

inline std::vector<std::string> word_names(const ueq::CnfGrammar& g,
                                           const ueq::Word& w) {
  std::vector<std::string> out;
  for (int a : w) out.push_back(g.terminals.at(a));
  return out;
}

inline ueq::Word word_of(const ueq::CnfGrammar& g, const std::string& letters) {
  std::vector<std::string> names;
  for (char c : letters) names.emplace_back(1, c);
  return ueq::make_word(g, names);
}

}  // namespace testutil

#endif  // UEQ_TESTS_TESTUTIL_HPP
