#ifndef UEQ_NCPOLY_HPP
#define UEQ_NCPOLY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ueq/bigint.hpp"
#include "ueq/grammar.hpp"
#include "ueq/matrices.hpp"

namespace ueq {

/// A word over variable ids; the empty word is the constant monomial.
using Monomial = std::vector<int>;

/**
 * Polynomial in noncommuting variables with exact integer coefficients.
 * Stored normalized: no zero coefficients.
 */
class NcPoly {
public:
  NcPoly() = default;

  static NcPoly zero() { return NcPoly(); }
  static NcPoly variable(int id);
  static NcPoly constant(BigInt c);
  static NcPoly monomial(Monomial m, BigInt c = 1);

  bool is_zero() const { return terms_.empty(); }
  /// Largest monomial length (0 for constants and for the zero polynomial).
  int degree() const;
  /// Largest variable id 1 + (0 when no variable occurs).
  int variable_span() const;
  const std::map<Monomial, BigInt>& terms() const { return terms_; }
  BigInt coefficient(const Monomial& m) const;
  /// Every stored coefficient lies in {-1, +1} (vacuously true for zero) —
  /// the shape slice differences of unambiguous grammar pairs must have.
  bool coefficients_in_pm_one() const;

  NcPoly& operator+=(const NcPoly& o);
  NcPoly& operator-=(const NcPoly& o);
  friend NcPoly operator+(NcPoly a, const NcPoly& b) { return a += b; }
  friend NcPoly operator-(NcPoly a, const NcPoly& b) { return a -= b; }
  friend NcPoly operator*(const NcPoly& a, const NcPoly& b);
  NcPoly operator-() const;
  friend bool operator==(const NcPoly&, const NcPoly&) = default;

  /// Human-readable form, terms ordered by (degree, lex). Variable names
  /// default to X1, X2, ...; single-character names print compactly.
  std::string to_string(const std::vector<std::string>& names = {}) const;

private:
  void add_term(const Monomial& m, const BigInt& c);
  std::map<Monomial, BigInt> terms_;
};

/// Free-function spellings of the ring operations.
inline NcPoly nc_add(const NcPoly& p, const NcPoly& q) { return p + q; }
inline NcPoly nc_mul(const NcPoly& p, const NcPoly& q) { return p * q; }

/// Homomorphic substitution: variable i becomes subst[i]. Throws when a
/// variable of p has no image.
NcPoly nc_substitute(const NcPoly& p, const std::vector<NcPoly>& subst);

/// Evaluate on real matrices: Σ coeff · X_{m_1}···X_{m_k}, the constant
/// monomial contributing coeff · I.
MatR nc_eval(const NcPoly& p, const std::vector<MatR>& assignment);

/// Evaluate over F_modulus; coefficients are reduced into the field.
MatF nc_eval(const NcPoly& p, const std::vector<MatF>& assignment,
             std::uint64_t modulus);

/**
 * The standard identity Σ_{σ ∈ S_{2d}} sgn(σ) X_{σ(1)}···X_{σ(2d)}:
 * (2d)! monomials, multilinear, coefficients ±1, and identically zero on
 * d×d matrices over any commutative ring. The factorial guard protects
 * desk-scale use. Permutations come from Heap's algorithm, whose single
 * swaps flip the tracked sign.
 */
NcPoly standard_identity(int d, std::size_t monomial_cap = 500'000);

/**
 * Σ_{σ ∈ S_d} sgn(σ) [X1^{σ(1)}, X2]···[X1^{σ(d)}, X2], fully expanded over
 * the two variables; exponents range over 1..d, the only reading consistent
 * with summation over S_d.
 */
NcPoly razmyslov_identity(int d);

/// Square matrix with polynomial entries.
struct NcMatrix {
  std::vector<std::vector<NcPoly>> entries;
  int size() const { return static_cast<int>(entries.size()); }
};

/// Sign-free permutation sum Σ_σ X_{1,σ(1)}···X_{n,σ(n)} over noncommuting
/// entries (row order matters).
NcPoly nc_determinant(const NcMatrix& m);

struct IdentityTestVerdict {
  bool refuted = false;  // a random assignment evaluated to a nonzero matrix
  int trial = -1;
  int dim = 0;
  int trials = 0;
  std::uint64_t modulus = 0;
  std::uint64_t seed = 0;
};

/**
 * Evaluate p on `trials` random d×d assignments over F_modulus. Any nonzero
 * value soundly refutes "p is an identity for d×d matrices"; all-zero runs
 * are evidence only. Trial engines derive from (seed, trial).
 */
IdentityTestVerdict is_identity_probabilistic(const NcPoly& p, int dim,
                                              int trials,
                                              std::uint64_t modulus,
                                              std::uint64_t seed);

inline std::size_t monomial_count(const NcPoly& p) { return p.terms().size(); }

/// Identities for d×d matrices need at least 2^{d-1} monomials; a candidate
/// below the bound that keeps evaluating to zero is suspicious.
bool meets_lower_bound(const NcPoly& p, int d);

/**
 * The Amitsur-Levitski false-positive pair: over letters x1..x_{2d}, the
 * first grammar generates exactly the even-permutation words of length 2d,
 * the second the odd ones. Both are finite (hence unambiguous) and
 * different, yet their only differing slice realizes the standard identity,
 * so d×d substitution cannot separate them.
 */
std::pair<Grammar, Grammar> standard_identity_language_pair(
    int d, std::size_t word_cap = 500'000);

/// The degree-n difference polynomial Σ_{w ∈ s1\s2} w - Σ_{w ∈ s2\s1} w
/// over letter variables (first grammar's ids), built from enumerated
/// slices.
NcPoly slice_difference_poly(const CnfGrammar& g1, const CnfGrammar& g2,
                             int n);

}  // namespace ueq

#endif  // UEQ_NCPOLY_HPP
