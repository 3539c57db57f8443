#ifndef UEQ_COMM_HPP
#define UEQ_COMM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ueq/bigint.hpp"
#include "ueq/grammar.hpp"

namespace ueq {

/**
 * The polynomial equation system satisfied by the commutative images of a
 * CNF grammar's nonterminals: for each unknown C,
 *
 *   f(C) = Σ_{C -> DE} f(D)·f(E) + Σ_{C -> a} a
 *
 * Every monomial is degree-2 in unknowns or a single letter variable.
 */
struct GfSystem {
  struct Equation {
    std::vector<std::pair<int, int>> quadratic;  // (D, E) unknown ids
    std::vector<int> letters;                    // letter-variable ids
  };
  std::vector<std::string> unknowns;          // nonterminal names
  std::vector<std::string> letter_variables;  // the alphabet
  std::vector<Equation> equations;            // one per unknown
  int start = 0;
};

GfSystem build_gf_system(const CnfGrammar& g);

/**
 * The radius inside which both grammars' series provably converge:
 * 1 / (max(|G1|, |G2|)^2 · |Σ|), exact. Degenerate empty rule bodies count
 * as size 1 so the radius stays finite. Throws on an empty alphabet and on
 * incompatible alphabets.
 */
BigRat convergence_epsilon(const CnfGrammar& g1, const CnfGrammar& g2);

/// Nonnegative rational values, one per letter of the system's alphabet.
struct EvalPoint {
  std::vector<BigRat> values;
};

struct FixedPointResult {
  std::vector<double> values;  // one per unknown
  bool converged = false;
  long iterations = 0;
};

/**
 * Kleene iteration from the all-zeros assignment, applying every equation
 * simultaneously until the largest coordinate change drops below tol or
 * max_iter is hit. Iterates are monotone nondecreasing because every
 * coefficient is nonnegative at nonnegative points. Callers are responsible
 * for keeping the point inside the convergence radius.
 */
FixedPointResult eval_fixed_point(const GfSystem& sys, const EvalPoint& point,
                                  double tol = 1e-12,
                                  long max_iter = 1'000'000);

/// Coefficients of the commutative image: dense letter-count vector -> count.
using ParikhMap = std::map<std::vector<int>, BigInt>;

/**
 * Exact truncation of comm(L(g)): the coefficient of every monomial of
 * total degree <= max_total_degree, by dynamic programming over
 * (nonterminal, Parikh vector). Includes the empty word's constant term
 * when the grammar's flag is set. Exponential in |Σ|; fine at desk scale.
 */
ParikhMap parikh_coefficients(const CnfGrammar& g, int max_total_degree);

/// Re-index a Parikh map into an alphabet extension (see alphabet_embedding).
ParikhMap remap_parikh(const ParikhMap& m, const std::vector<int>& embedding,
                       int alphabet_size);

struct CommNumericVerdict {
  bool pointwise_equal = true;
  // Populated when a sample point separates the two series:
  int sample = -1;
  double delta = 0.0;
  double threshold = 0.0;
  EvalPoint point;
};

/**
 * Evaluates both equation systems at seeded sample points in (0, ε)^Σ and
 * compares the start values. A Distinguished verdict certifies that the
 * commutative images differ at some degree <= degree_cut: |Δ| must exceed
 * tol plus a geometric tail bound 2·r^{D+1}/(1-r), r = p²·|Σ|·x_max, which
 * dominates both series' coefficients beyond degree D under the p^{2n}
 * parse-tree bound. PointwiseEqual is evidence, not proof. Sample
 * coordinates are exact rationals ε·k/(65536·2^j) with the octave j cycling
 * over the sample index, so both large and small radii get probed — the
 * window where a low-degree difference beats the tail bound sits at small
 * radii. Throws NotConverged if an evaluation fails to settle.
 */
CommNumericVerdict comm_equal_numeric(const CnfGrammar& g1,
                                      const CnfGrammar& g2, int samples,
                                      double tol, std::uint64_t seed,
                                      int degree_cut = 8);

enum class SubsetVerdict { Equal, NotEqual };

/**
 * Under the promise L(g1) ⊆ L(g2), commutative-image equality decides
 * language equality: a strict inclusion bumps some coefficient. NotEqual is
 * sound unconditionally; Equal is sound only under the promise.
 */
SubsetVerdict subset_equivalence(const CnfGrammar& g1, const CnfGrammar& g2,
                                 int samples, double tol, std::uint64_t seed);

/**
 * SMT-LIB 2 sentence (logic NRA) whose unsatisfiability is equivalent to
 * comm(L(g1)) = comm(L(g2)): universally quantified letters and unknowns,
 * smallness hypotheses |a| < ε written as the two strict inequalities
 * (a·den < num) and (-a·den < num), one equation per system line, and the
 * negated implication as the goal. No solver is bundled.
 */
std::string emit_smt_sentence(const CnfGrammar& g1, const CnfGrammar& g2);

}  // namespace ueq

#endif  // UEQ_COMM_HPP
