#include "ueq/oracle.hpp"

#include <algorithm>
#include <map>

#include "ueq/errors.hpp"

namespace ueq {

namespace {

// Per-nonterminal rule indices, built once per operation.
struct RuleIndex {
  std::vector<std::vector<const CnfGrammar::BinRule*>> binary;  // by lhs
  std::vector<std::vector<int>> letters;                        // by lhs

  explicit RuleIndex(const CnfGrammar& g)
      : binary(g.nonterminal_count()), letters(g.nonterminal_count()) {
    for (const auto& r : g.binary_rules) binary[r.lhs].push_back(&r);
    for (const auto& r : g.terminal_rules) letters[r.lhs].push_back(r.terminal);
    for (auto& v : letters) std::sort(v.begin(), v.end());
  }
};

}  // namespace

Word make_word(const CnfGrammar& g, const std::vector<std::string>& letters) {
  Word w;
  w.reserve(letters.size());
  for (const std::string& s : letters) {
    int id = g.terminal_id(s);
    if (id < 0) throw ForeignSymbol("letter '" + s + "' is not in the alphabet");
    w.push_back(id);
  }
  return w;
}

std::string format_word(const CnfGrammar& g, const Word& w) {
  if (w.empty()) return "eps";
  bool compact = std::all_of(g.terminals.begin(), g.terminals.end(),
                             [](const std::string& t) { return t.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0 && !compact) out += ' ';
    out += g.terminals.at(w[i]);
  }
  return out;
}

BigInt cyk_parse_count(const CnfGrammar& g, const Word& w) {
  if (w.empty()) throw Error("cyk_parse_count: the empty word is handled by the grammar's flag");
  const int n = static_cast<int>(w.size());
  const int nts = g.nonterminal_count();
  for (int a : w)
    if (a < 0 || a >= static_cast<int>(g.terminals.size()))
      throw ForeignSymbol("word contains a letter id outside the alphabet");

  // count[l][i][A]: derivations of w[i..i+l) from A.
  std::vector<std::vector<std::vector<BigInt>>> count(
      n + 1, std::vector<std::vector<BigInt>>(n, std::vector<BigInt>(nts)));
  for (int i = 0; i < n; ++i)
    for (const auto& r : g.terminal_rules)
      if (r.terminal == w[i]) count[1][i][r.lhs] = 1;
  for (int l = 2; l <= n; ++l)
    for (int i = 0; i + l <= n; ++i)
      for (const auto& r : g.binary_rules) {
        BigInt acc = 0;
        for (int k = 1; k < l; ++k) {
          const BigInt& left = count[k][i][r.left];
          if (left == 0) continue;
          acc += left * count[l - k][i + k][r.right];
        }
        if (acc != 0) count[l][i][r.lhs] += acc;
      }
  return count[n][0][g.start];
}

namespace {

// Memoized slice table: words(A, n) sorted lexicographically, deduplicated.
class SliceTable {
public:
  SliceTable(const CnfGrammar& g, std::size_t budget)
      : g_(g), index_(g), budget_(budget) {}

  const std::vector<Word>& words(int nt, int len) {
    auto key = std::make_pair(nt, len);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    std::vector<Word> out;
    if (len == 1) {
      for (int a : index_.letters[nt]) out.push_back(Word{a});
    } else if (len >= 2) {
      // Each (rule, split) block is already sorted: left words share a
      // length, so concatenation preserves lexicographic order.
      std::vector<Word> acc;
      for (const auto* r : index_.binary[nt])
        for (int k = 1; k < len; ++k) {
          const std::vector<Word>& ls = words(r->left, k);
          if (ls.empty()) continue;
          const std::vector<Word>& rs = words(r->right, len - k);
          if (rs.empty()) continue;
          for (const Word& u : ls)
            for (const Word& v : rs) {
              Word w = u;
              w.insert(w.end(), v.begin(), v.end());
              acc.push_back(std::move(w));
            }
        }
      std::sort(acc.begin(), acc.end());
      acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
      out = std::move(acc);
    }
    stored_ += out.size();
    if (stored_ > budget_)
      throw GuardExceeded("slice enumeration exceeded its word budget");
    return memo_.emplace(key, std::move(out)).first->second;
  }

private:
  const CnfGrammar& g_;
  RuleIndex index_;
  std::map<std::pair<int, int>, std::vector<Word>> memo_;
  std::size_t stored_ = 0;
  std::size_t budget_;
};

constexpr std::size_t kSliceBudget = 5'000'000;

}  // namespace

SliceResult enumerate_slice(const CnfGrammar& g, int n, std::size_t limit) {
  if (n < 1) throw Error("enumerate_slice requires n >= 1");
  SliceResult result;
  if (g.nonterminal_count() == 0) return result;
  SliceTable table(g, kSliceBudget);
  const std::vector<Word>& slice = table.words(g.start, n);
  if (slice.size() > limit) {
    result.words.assign(slice.begin(), slice.begin() + limit);
    result.truncated = true;
  } else {
    result.words = slice;
  }
  return result;
}

namespace {

Word remap_word(const Word& w, const std::vector<int>& embedding) {
  Word out;
  out.reserve(w.size());
  for (int a : w) out.push_back(embedding.at(a));
  return out;
}

}  // namespace

std::optional<DifferenceWitness> first_difference(const CnfGrammar& g1,
                                                  const CnfGrammar& g2,
                                                  int max_len) {
  if (max_len < 1) throw Error("first_difference requires max_len >= 1");
  std::vector<int> embedding = alphabet_embedding(g1, g2);

  if (g1.generates_empty_word != g2.generates_empty_word)
    return DifferenceWitness{{}, g1.generates_empty_word,
                             g2.generates_empty_word};

  for (int n = 1; n <= max_len; ++n) {
    std::vector<Word> s1 = enumerate_slice(g1, n).words;
    std::vector<Word> s2 = enumerate_slice(g2, n).words;
    // g2 words re-enter g1's letter order, which may permute them.
    for (Word& w : s2) w = remap_word(w, embedding);
    std::sort(s2.begin(), s2.end());

    std::size_t i = 0, j = 0;
    while (i < s1.size() || j < s2.size()) {
      if (j == s2.size() || (i < s1.size() && s1[i] < s2[j]))
        return DifferenceWitness{s1[i], true, false};
      if (i == s1.size() || s2[j] < s1[i])
        return DifferenceWitness{s2[j], false, true};
      ++i;
      ++j;
    }
  }
  return std::nullopt;
}

std::optional<Word> check_unambiguous_upto(const CnfGrammar& g, int max_len) {
  if (max_len < 1) throw Error("check_unambiguous_upto requires max_len >= 1");
  std::vector<BigInt> derivations = count_words_by_length(g, max_len);
  for (int n = 1; n <= max_len; ++n) {
    if (derivations[n] == 0) continue;
    SliceResult slice = enumerate_slice(g, n);
    // Derivations exceed distinct words exactly when some word has >1 tree.
    if (!slice.truncated &&
        derivations[n] == static_cast<long long>(slice.words.size()))
      continue;
    for (const Word& w : slice.words)
      if (cyk_parse_count(g, w) > 1) return w;
  }
  return std::nullopt;
}

std::vector<BigInt> count_words_by_length(const CnfGrammar& g, int max_len) {
  if (max_len < 0) throw Error("count_words_by_length requires max_len >= 0");
  const int nts = g.nonterminal_count();
  // cnt[n][A]: derivations of length-n words from A.
  std::vector<std::vector<BigInt>> cnt(max_len + 1,
                                       std::vector<BigInt>(std::max(nts, 1)));
  if (nts == 0) return std::vector<BigInt>(max_len + 1);
  if (max_len >= 1)
    for (const auto& r : g.terminal_rules) cnt[1][r.lhs] += 1;
  for (int n = 2; n <= max_len; ++n)
    for (const auto& r : g.binary_rules)
      for (int k = 1; k < n; ++k) {
        if (cnt[k][r.left] == 0) continue;
        cnt[n][r.lhs] += cnt[k][r.left] * cnt[n - k][r.right];
      }

  std::vector<BigInt> out(max_len + 1);
  for (int n = 1; n <= max_len; ++n) out[n] = cnt[n][g.start];
  return out;
}

}  // namespace ueq
