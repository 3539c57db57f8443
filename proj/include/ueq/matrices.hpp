#ifndef UEQ_MATRICES_HPP
#define UEQ_MATRICES_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ueq/errors.hpp"
#include "ueq/fp.hpp"
#include "ueq/grammar.hpp"
#include "ueq/oracle.hpp"
#include "ueq/rng.hpp"

namespace ueq {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using MatF = DenseMatrix<Fp>;     // entries in a prime field
using MatR = DenseMatrix<double>; // real entries, for the full-series path

/// Entrywise ℓ¹ norm Σ|A_ij|, the smallness measure for matrix points.
template <class Derived>
double l1_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.derived().cwiseAbs().sum();
}

/// One matrix per letter of some alphabet, all square of the same size.
template <class Scalar>
struct LetterAssignment {
  int dim = 0;
  std::vector<DenseMatrix<Scalar>> matrices;
};

/// View an assignment over an extended alphabet through the embedding of a
/// smaller one (entry j picks the matrix of the embedded letter).
template <class Scalar>
LetterAssignment<Scalar> restrict_assignment(
    const LetterAssignment<Scalar>& a, const std::vector<int>& embedding) {
  LetterAssignment<Scalar> out;
  out.dim = a.dim;
  out.matrices.reserve(embedding.size());
  for (int id : embedding) out.matrices.push_back(a.matrices.at(id));
  return out;
}

/// Uniform d×d matrix over F_p, reproducible from the engine state.
inline MatF random_field_matrix(int dim, std::uint64_t p,
                                std::mt19937_64& eng) {
  if (dim < 1) throw Error("matrix dimension must be >= 1");
  if (!is_prime(p)) throw NotPrime("modulus " + std::to_string(p) +
                                   " is not prime");
  MatF m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Fp(uniform_mod(eng, p), p);
  return m;
}

/// Random real d×d matrix rescaled to a uniformly drawn ℓ¹ norm in
/// (0, eps_norm), so the smallness hypothesis holds by construction.
inline MatR random_real_matrix_small(int dim, double eps_norm,
                                     std::mt19937_64& eng) {
  if (dim < 1) throw Error("matrix dimension must be >= 1");
  if (!(eps_norm > 0)) throw Error("eps_norm must be positive");
  MatR m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = 2.0 * uniform_unit(eng) - 1.0;
  double norm = l1_norm(m);
  if (norm == 0.0) {
    m(0, 0) = 1.0;
    norm = 1.0;
  }
  double target =
      eps_norm * (static_cast<double>(uniform_mod(eng, 65535) + 1) / 65536.0);
  m *= target / norm;
  return m;
}

inline LetterAssignment<Fp> random_field_assignment(int letters, int dim,
                                                    std::uint64_t p,
                                                    std::mt19937_64& eng) {
  LetterAssignment<Fp> a;
  a.dim = dim;
  for (int i = 0; i < letters; ++i)
    a.matrices.push_back(random_field_matrix(dim, p, eng));
  return a;
}

inline LetterAssignment<double> random_real_assignment_small(
    int letters, int dim, double eps_norm, std::mt19937_64& eng) {
  LetterAssignment<double> a;
  a.dim = dim;
  for (int i = 0; i < letters; ++i)
    a.matrices.push_back(random_real_matrix_small(dim, eps_norm, eng));
  return a;
}

/**
 * Per-length matrix sums: M_C[n] = Σ over derivations of C yielding
 * length-n words of X_{w_1}···X_{w_n}, the homogeneous pieces of the
 * substituted series. Computed by the defining recurrence
 *
 *   M_C[1] = Σ_{C -> a} X_a
 *   M_C[n] = Σ_{C -> DE} Σ_{k=1}^{n-1} M_D[k] · M_E[n-k]
 *
 * so ambiguous grammars yield derivation-weighted sums.
 */
template <class Scalar>
struct SliceSignature {
  int dim = 0;
  int max_len = 0;
  // by_length[n][nt], n = 1..max_len (index 0 unused)
  std::vector<std::vector<DenseMatrix<Scalar>>> by_length;
  int start = 0;

  const DenseMatrix<Scalar>& at(int n, int nt) const {
    return by_length.at(n).at(nt);
  }
  const DenseMatrix<Scalar>& start_at(int n) const { return at(n, start); }
};

template <class Scalar>
SliceSignature<Scalar> slice_signatures(const CnfGrammar& g,
                                        const LetterAssignment<Scalar>& a,
                                        int max_len) {
  if (max_len < 1) throw Error("slice_signatures requires max_len >= 1");
  if (a.matrices.size() != g.terminals.size())
    throw Error("assignment size does not match the grammar's alphabet");
  const int d = a.dim;
  const int nts = std::max(g.nonterminal_count(), 1);

  SliceSignature<Scalar> sig;
  sig.dim = d;
  sig.max_len = max_len;
  sig.start = g.start;
  sig.by_length.assign(
      max_len + 1,
      std::vector<DenseMatrix<Scalar>>(nts, DenseMatrix<Scalar>::Zero(d, d)));

  for (const auto& r : g.terminal_rules)
    sig.by_length[1][r.lhs] += a.matrices[r.terminal];
  for (int n = 2; n <= max_len; ++n)
    for (const auto& r : g.binary_rules)
      for (int k = 1; k < n; ++k)
        sig.by_length[n][r.lhs].noalias() +=
            sig.by_length[k][r.left] * sig.by_length[n - k][r.right];
  return sig;
}

struct MatrixFixedPointResult {
  std::vector<MatR> values;  // one per nonterminal
  bool converged = false;
  long iterations = 0;
};

/**
 * Kleene iteration of the matrix-valued equation system from zero matrices.
 * The scalar majorant series converges whenever every ‖X_a‖₁ stays below
 * 1/(|G|²·|Σ|) (ℓ¹ is submultiplicative), which is enforced on entry.
 */
inline MatrixFixedPointResult matrix_series_fixed_point(
    const CnfGrammar& g, const LetterAssignment<double>& a, double tol = 1e-12,
    long max_iter = 1'000'000) {
  if (a.matrices.size() != g.terminals.size())
    throw Error("assignment size does not match the grammar's alphabet");
  const long size = std::max(grammar_size(g), 1);
  const double eps =
      1.0 / (static_cast<double>(size) * size *
             static_cast<double>(std::max<std::size_t>(g.terminals.size(), 1)));
  for (const MatR& m : a.matrices)
    if (!(l1_norm(m) < eps))
      throw Error("matrix_series_fixed_point: an assignment matrix has "
                  "ℓ¹ norm outside the convergence radius");

  const int d = a.dim;
  const int nts = std::max(g.nonterminal_count(), 1);
  MatrixFixedPointResult res;
  std::vector<MatR> cur(nts, MatR::Zero(d, d)), next(nts, MatR::Zero(d, d));
  for (long it = 1; it <= max_iter; ++it) {
    double change = 0.0;
    for (int c = 0; c < nts; ++c) next[c].setZero();
    for (const auto& r : g.binary_rules)
      next[r.lhs].noalias() += cur[r.left] * cur[r.right];
    for (const auto& r : g.terminal_rules)
      next[r.lhs] += a.matrices[r.terminal];
    for (int c = 0; c < nts; ++c)
      change = std::max(change, (next[c] - cur[c]).cwiseAbs().maxCoeff());
    cur.swap(next);
    res.iterations = it;
    if (change < tol) {
      res.converged = true;
      break;
    }
  }
  res.values = std::move(cur);
  return res;
}

struct SimilarityVerdict {
  bool distinguished = false;
  // When distinguished: the slice length (0 = empty-word flags) and the
  // 0-based trial whose assignment separated the signatures.
  int length = -1;
  int trial = -1;
  int dim = 0;
  int max_len = 0;
  int trials = 0;
  std::uint64_t prime = 0;
  std::uint64_t seed = 0;
};

/**
 * Randomized refutation of d-similarity: draw fresh letter matrices over
 * F_p per trial and compare the start-symbol slice signatures of both
 * grammars for every length up to max_len (empty-word flags first). A
 * mismatch is sound — the degree-n difference polynomial evaluates to a
 * nonzero matrix — while exhausting all trials is only evidence. Per-trial
 * engines derive deterministically from (seed, trial).
 */
inline SimilarityVerdict d_similarity_test(const CnfGrammar& g1,
                                           const CnfGrammar& g2, int dim,
                                           int max_len, int trials,
                                           std::uint64_t p,
                                           std::uint64_t seed) {
  if (dim < 1 || trials < 1 || max_len < 1)
    throw Error("d_similarity_test requires dim, max_len, trials >= 1");
  if (!is_prime(p))
    throw NotPrime("modulus " + std::to_string(p) + " is not prime");
  std::vector<int> embedding = alphabet_embedding(g1, g2);

  SimilarityVerdict v;
  v.dim = dim;
  v.max_len = max_len;
  v.trials = trials;
  v.prime = p;
  v.seed = seed;

  if (g1.generates_empty_word != g2.generates_empty_word) {
    v.distinguished = true;
    v.length = 0;
    v.trial = 0;
    return v;
  }

  const int letters = static_cast<int>(g1.terminals.size());
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 eng = seeded_engine(seed, static_cast<std::uint64_t>(t));
    LetterAssignment<Fp> a = random_field_assignment(letters, dim, p, eng);
    SliceSignature<Fp> s1 = slice_signatures(g1, a, max_len);
    SliceSignature<Fp> s2 =
        slice_signatures(g2, restrict_assignment(a, embedding), max_len);
    for (int n = 1; n <= max_len; ++n)
      if (s1.start_at(n) != s2.start_at(n)) {
        v.distinguished = true;
        v.length = n;
        v.trial = t;
        return v;
      }
  }
  return v;
}

struct Theorem1Report {
  bool applies = true;  // every slice symmetric difference < 2^{d-1}
  std::optional<int> first_violation;
  std::optional<int> first_differing_length;  // 0 = empty-word flags
  // The weaker sufficient condition: some slice differs, in fewer than
  // 2^{d-1} words.
  bool remark_applies = false;
};

/**
 * Checks the hypotheses under which languages that differ are provably not
 * d-similar: every n-slice symmetric difference smaller than 2^{d-1}. Slice
 * sets come from exhaustive enumeration, so this is desk-scale only.
 */
inline Theorem1Report theorem1_applicability(const CnfGrammar& g1,
                                             const CnfGrammar& g2, int dim,
                                             int max_len) {
  if (dim < 1 || dim > 60)
    throw Error("theorem1_applicability requires 1 <= dim <= 60");
  std::vector<int> embedding = alphabet_embedding(g1, g2);
  const std::uint64_t bound = std::uint64_t{1} << (dim - 1);

  Theorem1Report report;
  auto record = [&](int n, std::uint64_t symdiff) {
    if (symdiff > 0 && !report.first_differing_length)
      report.first_differing_length = n;
    if (symdiff >= bound) {
      report.applies = false;
      if (!report.first_violation) report.first_violation = n;
    } else if (symdiff > 0) {
      report.remark_applies = true;
    }
  };

  record(0, g1.generates_empty_word != g2.generates_empty_word ? 1 : 0);
  for (int n = 1; n <= max_len; ++n) {
    std::vector<Word> s1 = enumerate_slice(g1, n).words;
    std::vector<Word> s2 = enumerate_slice(g2, n).words;
    for (Word& w : s2) {
      Word m;
      m.reserve(w.size());
      for (int a : w) m.push_back(embedding.at(a));
      w = std::move(m);
    }
    std::sort(s2.begin(), s2.end());
    std::uint64_t symdiff = 0;
    std::size_t i = 0, j = 0;
    while (i < s1.size() || j < s2.size()) {
      if (j == s2.size() || (i < s1.size() && s1[i] < s2[j])) {
        ++symdiff;
        ++i;
      } else if (i == s1.size() || s2[j] < s1[i]) {
        ++symdiff;
        ++j;
      } else {
        ++i;
        ++j;
      }
    }
    record(n, symdiff);
  }
  return report;
}

}  // namespace ueq

#endif  // UEQ_MATRICES_HPP
