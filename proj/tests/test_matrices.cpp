#include <doctest.h>

#include <cmath>
#include <set>

#include "testutil.hpp"
#include "ueq/matrices.hpp"
#include "ueq/ncpoly.hpp"
#include "ueq/oracle.hpp"
#include "ueq/rng.hpp"

using namespace ueq;

namespace {

constexpr std::uint64_t kPrime = 1'000'000'007ULL;

MatF matrix_mod(std::initializer_list<std::uint64_t> entries, int d,
                std::uint64_t p) {
  MatF m(d, d);
  auto it = entries.begin();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Fp(*it++, p);
  return m;
}

}  // namespace

TEST_CASE("is_prime: classifies the fixtures") {
  CHECK(is_prime(2));
  CHECK(is_prime(kPrime));
  CHECK(is_prime(2147483647ULL));
  CHECK(is_prime(998244353ULL));
  CHECK(!is_prime(1));
  CHECK(!is_prime(4));
  CHECK(!is_prime(2147483647ULL * 2));
}

TEST_CASE("Fp matrices multiply exactly through Eigen") {
  const std::uint64_t p = 97;
  MatF a = matrix_mod({1, 2, 3, 4}, 2, p);
  MatF b = matrix_mod({5, 6, 7, 8}, 2, p);
  MatF c = a * b;
  CHECK(c(0, 0) == Fp(19, p));
  CHECK(c(1, 1) == Fp(50, p));
  CHECK(a * b != b * a);  // noncommutativity witnessed
}

TEST_CASE("random_field_matrix: deterministic in the seed, prime-checked") {
  std::mt19937_64 e1(42), e2(42);
  MatF a = random_field_matrix(2, 101, e1);
  MatF b = random_field_matrix(2, 101, e2);
  CHECK(a == b);

  std::mt19937_64 e3(0);
  MatF c = random_field_matrix(1, 2, e3);
  CHECK((c(0, 0) == Fp(0) || c(0, 0) == Fp(1)));

  std::mt19937_64 e4(0);
  CHECK_THROWS_AS(random_field_matrix(3, 4, e4), NotPrime);
}

TEST_CASE("random_real_matrix_small: norm stays below the bound") {
  std::mt19937_64 eng(7);
  for (int i = 0; i < 20; ++i) {
    MatR m = random_real_matrix_small(2, 1.0 / 32, eng);
    CHECK(l1_norm(m) < 1.0 / 32);
    CHECK(l1_norm(m) > 0.0);
  }
  std::mt19937_64 e1(9), e2(9);
  CHECK(random_real_matrix_small(3, 0.5, e1) ==
        random_real_matrix_small(3, 0.5, e2));
}

TEST_CASE("slice_signatures: the {a,ab}/{a,ba} pair realizes X_a X_b vs X_b X_a") {
  CnfGrammar g1 = testutil::cnf(testutil::kPairAb);
  CnfGrammar g2 = testutil::cnf(testutil::kPairBa);
  std::mt19937_64 eng(5);
  LetterAssignment<Fp> a = random_field_assignment(2, 2, kPrime, eng);

  SliceSignature<Fp> s1 = slice_signatures(g1, a, 2);
  SliceSignature<Fp> s2 =
      slice_signatures(g2, restrict_assignment(a, alphabet_embedding(g1, g2)),
                       2);
  CHECK(s1.start_at(1) == a.matrices[0]);  // the word "a"
  CHECK(s2.start_at(1) == a.matrices[0]);
  MatF ab = a.matrices[0] * a.matrices[1];
  MatF ba = a.matrices[1] * a.matrices[0];
  CHECK(s1.start_at(2) == ab);
  CHECK(s2.start_at(2) == ba);
  CHECK(s1.start_at(2) != s2.start_at(2));
}

TEST_CASE("slice_signatures: identity matrices recover Catalan counts") {
  CnfGrammar dyck = testutil::cnf(testutil::kDyck);
  const int d = 3;
  LetterAssignment<Fp> a;
  a.dim = d;
  a.matrices.assign(2, MatF::Identity(d, d) * Fp(1, kPrime));
  SliceSignature<Fp> sig = slice_signatures(dyck, a, 10);
  std::vector<std::uint64_t> catalan{0, 1, 0, 2, 0, 5, 0, 14, 0, 42};
  for (int n = 1; n <= 10; ++n) {
    MatF expect = MatF::Identity(d, d) * Fp(catalan[n - 1], kPrime);
    CHECK(sig.start_at(n) == expect);
  }
}

TEST_CASE("slice_signatures equal the derivation-weighted brute force") {
  // DP consistency: M_S[n] = Σ_w count(w) · X_{w_1}···X_{w_n} over the slice.
  for (const char* text :
       {testutil::kPairAb, testutil::kDyck, testutil::kAmbiguous,
        testutil::kFiveWords, "S -> a S a | b S b | a | b | eps"}) {
    CAPTURE(text);
    CnfGrammar g = testutil::cnf(text);
    for (int d = 1; d <= 3; ++d) {
      std::mt19937_64 eng = seeded_engine(2024, d);
      LetterAssignment<Fp> a = random_field_assignment(
          static_cast<int>(g.terminals.size()), d, kPrime, eng);
      SliceSignature<Fp> sig = slice_signatures(g, a, 6);
      for (int n = 1; n <= 6; ++n) {
        MatF expect = MatF::Zero(d, d);
        for (const Word& w : enumerate_slice(g, n).words) {
          MatF prod = MatF::Identity(d, d);
          for (int letter : w) prod = prod * a.matrices[letter];
          expect += Fp::from_bigint(cyk_parse_count(g, w), kPrime) * prod;
        }
        CHECK(sig.at(n, g.start) == expect);
      }
    }
  }
}

TEST_CASE("slice_signatures are homogeneous of degree n") {
  CnfGrammar g = testutil::cnf(testutil::kDyck);
  std::mt19937_64 eng(77);
  LetterAssignment<Fp> a = random_field_assignment(2, 2, kPrime, eng);
  Fp lambda(12345, kPrime);
  LetterAssignment<Fp> scaled = a;
  for (MatF& m : scaled.matrices) m = m * lambda;

  SliceSignature<Fp> s = slice_signatures(g, a, 6);
  SliceSignature<Fp> t = slice_signatures(g, scaled, 6);
  Fp factor(1, kPrime);
  for (int n = 1; n <= 6; ++n) {
    factor = factor * lambda;
    MatF expect = s.start_at(n) * factor;
    CHECK(t.start_at(n) == expect);
  }
}

TEST_CASE("matrix_series_fixed_point: finite language sums exactly") {
  CnfGrammar g = testutil::cnf(testutil::kPairAb);
  std::mt19937_64 eng(3);
  LetterAssignment<double> a = random_real_assignment_small(2, 2, 1.0 / 32, eng);
  MatrixFixedPointResult r = matrix_series_fixed_point(g, a);
  REQUIRE(r.converged);
  MatR expect = a.matrices[0] + a.matrices[0] * a.matrices[1];
  CHECK((r.values[g.start] - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("matrix_series_fixed_point: zero matrices stay zero") {
  CnfGrammar g = testutil::cnf(testutil::kDyck);
  LetterAssignment<double> a;
  a.dim = 2;
  a.matrices.assign(2, MatR::Zero(2, 2));
  MatrixFixedPointResult r = matrix_series_fixed_point(g, a);
  REQUIRE(r.converged);
  for (const MatR& m : r.values) CHECK(m.isZero(0.0));
}

TEST_CASE("matrix_series_fixed_point: scalar collapse matches Catalan") {
  CnfGrammar g = testutil::cnf(testutil::kDyck);
  const double eps =
      1.0 / (static_cast<double>(grammar_size(g)) * grammar_size(g) * 2);
  const double t = eps / 4;
  LetterAssignment<double> a;
  a.dim = 2;
  a.matrices.assign(2, MatR::Identity(2, 2) * (t / 2));  // ℓ¹ norm = t < eps
  MatrixFixedPointResult r = matrix_series_fixed_point(g, a);
  REQUIRE(r.converged);
  double expect = 0.0, c = 1.0, x = t / 2;
  for (int n = 0; n <= 24; ++n) {
    if (n > 0) expect += c * std::pow(x, 2 * n);
    c = c * 2 * (2 * n + 1) / (n + 2);
  }
  CHECK(std::abs(r.values[g.start](0, 0) - expect) < 1e-12);
  CHECK(std::abs(r.values[g.start](0, 1)) < 1e-15);
}

TEST_CASE("matrix_series_fixed_point: rejects norms outside the radius") {
  CnfGrammar g = testutil::cnf(testutil::kDyck);
  LetterAssignment<double> a;
  a.dim = 2;
  a.matrices.assign(2, MatR::Identity(2, 2));  // ℓ¹ norm 2, way too large
  CHECK_THROWS_AS(matrix_series_fixed_point(g, a), Error);
}

TEST_CASE("d_similarity_test: the {a,ab}/{a,ba} pair is distinguished at length 2") {
  CnfGrammar g1 = testutil::cnf(testutil::kPairAb);
  CnfGrammar g2 = testutil::cnf(testutil::kPairBa);
  SimilarityVerdict v =
      d_similarity_test(g1, g2, 2, 4, 5, 1'000'000'007ULL, 42);
  CHECK(v.distinguished);
  CHECK(v.length == 2);
  CHECK(v.trial == 0);
}

TEST_CASE("d_similarity_test: a grammar against itself") {
  CnfGrammar g = testutil::cnf(testutil::kDyck);
  SimilarityVerdict v = d_similarity_test(g, g, 3, 8, 4, kPrime, 1);
  CHECK(!v.distinguished);
}

TEST_CASE("d_similarity_test: empty-word flags decide length 0") {
  CnfGrammar g1 = testutil::cnf("S -> a | eps");
  CnfGrammar g2 = testutil::cnf("S -> a");
  SimilarityVerdict v = d_similarity_test(g1, g2, 2, 4, 2, kPrime, 0);
  CHECK(v.distinguished);
  CHECK(v.length == 0);
}

TEST_CASE("d_similarity_test: the Amitsur-Levitski false positive") {
  auto [even, odd] = standard_identity_language_pair(2);
  CnfGrammar g1 = to_cnf(even);
  CnfGrammar g2 = to_cnf(odd);
  // The pair differs at length 4 ...
  REQUIRE(first_difference(g1, g2, 4).has_value());
  // ... yet 2x2 substitution cannot see it (the difference polynomial is the
  // standard identity), while 3x3 substitution distinguishes immediately.
  SimilarityVerdict at2 = d_similarity_test(g1, g2, 2, 8, 25, kPrime, 9);
  CHECK(!at2.distinguished);
  SimilarityVerdict at3 = d_similarity_test(g1, g2, 3, 8, 3, kPrime, 9);
  CHECK(at3.distinguished);
  CHECK(at3.length == 4);
}

TEST_CASE("d_similarity_test: rejects composite moduli") {
  CnfGrammar g = testutil::cnf("S -> a");
  CHECK_THROWS_AS(d_similarity_test(g, g, 2, 2, 1, 15, 0), NotPrime);
}

TEST_CASE("d_similarity soundness: distinguished lengths have real slices") {
  CnfGrammar g1 = testutil::cnf("S -> a b | b a | a a a");
  CnfGrammar g2 = testutil::cnf("S -> a b | a b a");
  SimilarityVerdict v = d_similarity_test(g1, g2, 2, 6, 3, kPrime, 4);
  REQUIRE(v.distinguished);
  std::vector<Word> s1 = enumerate_slice(g1, v.length).words;
  std::vector<Word> s2 = enumerate_slice(g2, v.length).words;
  for (Word& w : s2) {
    Word m;
    for (int a : w)
      m.push_back(alphabet_embedding(g1, g2).at(a));
    w = std::move(m);
  }
  std::sort(s2.begin(), s2.end());
  CHECK(s1 != s2);
}

TEST_CASE("theorem1_applicability: small symmetric differences") {
  CnfGrammar g1 = testutil::cnf(testutil::kPairAb);   // {a, ab}
  CnfGrammar g2 = testutil::cnf(testutil::kPairBa);  // {a, ba}
  Theorem1Report r = theorem1_applicability(g1, g2, 3, 4);
  CHECK(r.applies);  // every slice differs in at most 2 < 2^2 words
  CHECK(!r.first_violation);
  CHECK(r.remark_applies);
  REQUIRE(r.first_differing_length.has_value());
  CHECK(*r.first_differing_length == 2);
}

TEST_CASE("theorem1_applicability: identical grammars apply vacuously") {
  CnfGrammar g = testutil::cnf(testutil::kDyck);
  Theorem1Report r = theorem1_applicability(g, g, 3, 6);
  CHECK(r.applies);
  CHECK(!r.first_differing_length);
  CHECK(!r.remark_applies);
}

TEST_CASE("theorem1_applicability: the permutation pair is too fat for d = 2") {
  auto [even, odd] = standard_identity_language_pair(2);
  CnfGrammar g1 = to_cnf(even);
  CnfGrammar g2 = to_cnf(odd);
  Theorem1Report r = theorem1_applicability(g1, g2, 2, 4);
  CHECK(!r.applies);  // 24 >= 2^1 at length 4
  REQUIRE(r.first_violation.has_value());
  CHECK(*r.first_violation == 4);
}

TEST_CASE("sparse-difference criterion: such pairs are always caught") {
  // Pairs of distinct finite languages whose slice symmetric differences
  // stay below 2^{d-1} = 4 must be distinguished by d = 3 substitution.
  std::vector<std::pair<const char*, const char*>> pairs = {
      {"S -> a | a b | b b a", "S -> a | b a | b b a"},
      {"S -> a a | b", "S -> a a | b | a b a"},
      {"S -> a b a | a a | b", "S -> a b a | a a"},
      {"S -> a | b a b | a a a a", "S -> a | b a b | a b b a"},
      {"S -> b | a b | b a", "S -> b | a b | b b"},
  };
  for (auto [t1, t2] : pairs) {
    CAPTURE(t1);
    CAPTURE(t2);
    CnfGrammar g1 = testutil::cnf(t1);
    CnfGrammar g2 = testutil::cnf(t2);
    Theorem1Report th = theorem1_applicability(g1, g2, 3, 6);
    REQUIRE(th.applies);
    REQUIRE(th.first_differing_length.has_value());
    SimilarityVerdict v = d_similarity_test(g1, g2, 3, 6, 8, kPrime, 11);
    CHECK(v.distinguished);
  }
}
