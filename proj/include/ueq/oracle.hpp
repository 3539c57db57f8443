#ifndef UEQ_ORACLE_HPP
#define UEQ_ORACLE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ueq/bigint.hpp"
#include "ueq/grammar.hpp"

namespace ueq {

/// A word over a grammar's alphabet: letter ids in declaration order.
/// Two-grammar operations express words in the FIRST grammar's ids.
using Word = std::vector<int>;

/// Build a Word from letter names; throws ForeignSymbol on unknown letters.
Word make_word(const CnfGrammar& g, const std::vector<std::string>& letters);

/// Render a word for reports: letters are concatenated when the whole
/// alphabet is single-character, space-separated otherwise. The empty word
/// prints as "eps".
std::string format_word(const CnfGrammar& g, const Word& w);

struct DifferenceWitness {
  Word word;  // in the first grammar's letter ids; empty = the empty word
  bool in_first = false;
  bool in_second = false;
};

/**
 * Number of distinct parse trees of w, exactly. Membership is count > 0;
 * for unambiguous grammars every member has count 1. Requires |w| >= 1
 * (the empty word lives in the generates_empty_word flag).
 */
BigInt cyk_parse_count(const CnfGrammar& g, const Word& w);

struct SliceResult {
  std::vector<Word> words;  // lexicographic in the grammar's letter order
  bool truncated = false;
};

/**
 * All words of L(g) of length exactly n, in lexicographic order, truncated
 * at `limit`. Slices are sets: an ambiguous word still appears once.
 */
SliceResult enumerate_slice(const CnfGrammar& g, int n,
                            std::size_t limit = static_cast<std::size_t>(-1));

/**
 * The first difference between L(g1) and L(g2): lexicographically smallest
 * of the shortest words in the symmetric difference, with the empty word
 * (length 0) compared first via the grammars' flags. Searches lengths up to
 * max_len; nullopt when no difference shows. Letter order and word ids are
 * g1's; throws AlphabetMismatch unless alphabet(g2) ⊆ alphabet(g1).
 */
std::optional<DifferenceWitness> first_difference(const CnfGrammar& g1,
                                                  const CnfGrammar& g2,
                                                  int max_len);

/**
 * Desk-scale audit of the unambiguity promise: the shortest-then-lex word
 * of length <= max_len with more than one parse tree, if any. nullopt does
 * NOT certify unambiguity beyond max_len.
 */
std::optional<Word> check_unambiguous_upto(const CnfGrammar& g, int max_len);

/**
 * Entry n = number of derivations of length-n words (= slice size under the
 * unambiguity promise), for n = 0..max_len. Entry 0 is always 0: the empty
 * word is tracked by the flag, not the body.
 */
std::vector<BigInt> count_words_by_length(const CnfGrammar& g, int max_len);

}  // namespace ueq

#endif  // UEQ_ORACLE_HPP
