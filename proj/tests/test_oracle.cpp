#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "testutil.hpp"
#include "ueq/ncpoly.hpp"
#include "ueq/oracle.hpp"

using namespace ueq;

TEST_CASE("cyk_parse_count: the {a,ab} grammar accepts ab once") {
  CnfGrammar c = testutil::cnf(testutil::kPairAb);
  CHECK(cyk_parse_count(c, testutil::word_of(c, "ab")) == 1);
  CHECK(cyk_parse_count(c, testutil::word_of(c, "a")) == 1);
  CHECK(cyk_parse_count(c, testutil::word_of(c, "ba")) == 0);
}

TEST_CASE("cyk_parse_count: foreign symbols are rejected") {
  CnfGrammar c = testutil::cnf("S -> a");
  CHECK_THROWS_AS(make_word(c, {"z"}), ForeignSymbol);
  CHECK_THROWS_AS(cyk_parse_count(c, Word{7}), ForeignSymbol);
}

TEST_CASE("cyk_parse_count: ambiguous grammar counts trees exactly") {
  CnfGrammar c = testutil::cnf(testutil::kAmbiguous);  // S -> S S | a
  CHECK(cyk_parse_count(c, testutil::word_of(c, "aa")) == 1);
  CHECK(cyk_parse_count(c, testutil::word_of(c, "aaa")) == 2);
  CHECK(cyk_parse_count(c, testutil::word_of(c, "aaaa")) == 5);
  // Catalan growth: C_{n-1} trees for a^n; n = 40 exceeds 64-bit counters.
  Word w(40, 0);
  CHECK(cyk_parse_count(c, w) == BigInt("680425371729975800390"));
}

TEST_CASE("enumerate_slice: Dyck slice 4 in lex order") {
  CnfGrammar c = testutil::cnf(testutil::kDyck);
  SliceResult s = enumerate_slice(c, 4);
  REQUIRE(s.words.size() == 2);
  CHECK(format_word(c, s.words[0]) == "aabb");
  CHECK(format_word(c, s.words[1]) == "abab");
  CHECK(!s.truncated);
}

TEST_CASE("enumerate_slice: empty slice and truncation") {
  CnfGrammar c = testutil::cnf(testutil::kDyck);
  CHECK(enumerate_slice(c, 3).words.empty());
  SliceResult t = enumerate_slice(c, 8, 2);
  CHECK(t.words.size() == 2);
  CHECK(t.truncated);
}

TEST_CASE("enumerate_slice: the {a,ba} grammar has slice 2 = [ba]") {
  CnfGrammar c = testutil::cnf(testutil::kPairBa);
  SliceResult s = enumerate_slice(c, 2);
  REQUIRE(s.words.size() == 1);
  CHECK(format_word(c, s.words[0]) == "ba");
}

TEST_CASE("first_difference: the {a,ab}/{a,ba} pair differs at ab") {
  CnfGrammar g1 = testutil::cnf(testutil::kPairAb);
  CnfGrammar g2 = testutil::cnf(testutil::kPairBa);
  auto w = first_difference(g1, g2, 5);
  REQUIRE(w.has_value());
  CHECK(format_word(g1, w->word) == "ab");
  CHECK(w->in_first);
  CHECK(!w->in_second);
}

TEST_CASE("first_difference: identical grammars have none") {
  CnfGrammar g = testutil::cnf(testutil::kDyck);
  CHECK(!first_difference(g, g, 10).has_value());
}

TEST_CASE("first_difference: empty-word flags compared first") {
  CnfGrammar g1 = testutil::cnf("S -> a | eps");
  CnfGrammar g2 = testutil::cnf("S -> a");
  auto w = first_difference(g1, g2, 3);
  REQUIRE(w.has_value());
  CHECK(w->word.empty());
  CHECK(w->in_first);
  CHECK(!w->in_second);
}

TEST_CASE("first_difference: permutation pair yields the identity word") {
  auto [even, odd] = standard_identity_language_pair(2);
  CnfGrammar g1 = to_cnf(even);
  CnfGrammar g2 = to_cnf(odd);
  auto w = first_difference(g1, g2, 6);
  REQUIRE(w.has_value());
  CHECK(w->word.size() == 4);
  CHECK(format_word(g1, w->word) == "x1 x2 x3 x4");
  CHECK(w->in_first);  // identity permutation is even

  // Brute-force confirmation over all 24 permutation words: every length-4
  // difference exists and x1x2x3x4 is the least.
  std::vector<Word> all;
  std::vector<int> perm{0, 1, 2, 3};
  do {
    all.push_back(Word(perm.begin(), perm.end()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(all.begin(), all.end());
  CHECK(all.front() == w->word);
  for (const Word& u : all) {
    // g2 declares its letters in another order, so convert through names.
    Word u2 = make_word(g2, testutil::word_names(g1, u));
    CHECK((cyk_parse_count(g1, u) > 0) != (cyk_parse_count(g2, u2) > 0));
  }
}

TEST_CASE("first_difference: letter order comes from the first grammar") {
  // b precedes a in g1's declaration order, so "bb" beats "ab".
  CnfGrammar g1 = testutil::cnf("S -> b b | a a | a b");
  CnfGrammar g2 = testutil::cnf("T -> a b");
  auto w = first_difference(g1, g2, 4);
  REQUIRE(w.has_value());
  CHECK(format_word(g1, w->word) == "bb");
}

TEST_CASE("check_unambiguous_upto: finds the shortest-then-lex witness") {
  CnfGrammar amb = testutil::cnf(testutil::kAmbiguous);
  auto w = check_unambiguous_upto(amb, 3);
  REQUIRE(w.has_value());
  CHECK(format_word(amb, *w) == "aaa");  // aa still has a single tree

  CHECK(!check_unambiguous_upto(testutil::cnf(testutil::kPairAb), 8));
  CHECK(!check_unambiguous_upto(testutil::cnf(testutil::kDyck), 8));
}

TEST_CASE("count_words_by_length: Dyck gives Catalan numbers") {
  CnfGrammar c = testutil::cnf(testutil::kDyck);
  std::vector<BigInt> counts = count_words_by_length(c, 10);
  std::vector<long> expect{0, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42};
  REQUIRE(counts.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(counts[i] == expect[i]);
}

TEST_CASE("count_words_by_length: empty language and the {a,ab} grammar") {
  std::vector<BigInt> zeros = count_words_by_length(testutil::cnf("S -> S"), 6);
  for (const BigInt& c : zeros) CHECK(c == 0);

  std::vector<BigInt> ex3 =
      count_words_by_length(testutil::cnf(testutil::kPairAb), 6);
  CHECK(ex3[1] == 1);
  CHECK(ex3[2] == 1);
  CHECK(ex3[0] + ex3[3] + ex3[4] + ex3[5] + ex3[6] == 0);
}

TEST_CASE("slice sizes equal derivation counts on unambiguous corpus") {
  for (const char* text :
       {testutil::kPairAb, testutil::kDyck, testutil::kFiveWords,
        "S -> a S a | b S b | a | b | eps"}) {
    CAPTURE(text);
    CnfGrammar c = testutil::cnf(text);
    REQUIRE(!check_unambiguous_upto(c, 8).has_value());
    std::vector<BigInt> counts = count_words_by_length(c, 8);
    for (int n = 1; n <= 8; ++n)
      CHECK(counts[n] ==
            static_cast<long long>(enumerate_slice(c, n).words.size()));
  }
}

TEST_CASE("no difference below the first difference") {
  // g1 = {a, aa, aaa}, g2 = {a, aa}: first difference has length 3.
  CnfGrammar g1 = testutil::cnf("S -> a | a a | a a a");
  CnfGrammar g2 = testutil::cnf("S -> a | a a");
  CHECK(!first_difference(g1, g2, 2).has_value());
  auto w = first_difference(g1, g2, 3);
  REQUIRE(w.has_value());
  CHECK(w->word.size() == 3);
  // Cross-check by exhaustive slice comparison below length 3.
  for (int n = 1; n <= 2; ++n)
    CHECK(enumerate_slice(g1, n).words == enumerate_slice(g2, n).words);
}

TEST_CASE("cyk_parse_count is invariant under nonterminal renumbering") {
  CnfGrammar c = testutil::cnf(testutil::kDyck);
  const int nts = c.nonterminal_count();
  std::vector<int> perm(nts);
  std::iota(perm.begin(), perm.end(), 0);
  std::rotate(perm.begin(), perm.begin() + 1, perm.end());

  CnfGrammar renamed = c;
  renamed.nonterminals.assign(nts, "");
  for (int i = 0; i < nts; ++i)
    renamed.nonterminals[perm[i]] = "N" + std::to_string(i);
  for (auto& r : renamed.binary_rules) {
    r.lhs = perm[r.lhs];
    r.left = perm[r.left];
    r.right = perm[r.right];
  }
  for (auto& r : renamed.terminal_rules) r.lhs = perm[r.lhs];
  renamed.start = perm[c.start];

  for (int n = 1; n <= 8; ++n)
    for (const Word& w : enumerate_slice(c, n).words)
      CHECK(cyk_parse_count(c, w) == cyk_parse_count(renamed, w));
  std::vector<BigInt> a = count_words_by_length(c, 8);
  std::vector<BigInt> b = count_words_by_length(renamed, 8);
  CHECK(a == b);
}
