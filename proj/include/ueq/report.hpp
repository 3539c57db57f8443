#ifndef UEQ_REPORT_HPP
#define UEQ_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ueq/comm.hpp"
#include "ueq/grammar.hpp"
#include "ueq/matrices.hpp"
#include "ueq/oracle.hpp"

namespace ueq {

struct CheckOptions {
  int max_len = 14;
  int degree = 8;
  int dim = 3;
  int trials = 8;
  int samples = 100;
  std::uint64_t prime = 2147483647ULL;  // 2^31 - 1
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::optional<std::string> emit_smt_path;
};

struct CheckInput {
  std::string path;  // "<memory>" when not file-backed
  std::string hash;  // fnv1a-64 of the source bytes, hex
  CnfGrammar cnf;
};

enum class OverallKind { ProvenDifferent, ConsistentWithEqual, PromiseViolated };

/**
 * Outcome of the full strategy pipeline. Every stage's verdict is kept even
 * once a difference is proven: the disagreement patterns (equal commutative
 * images yet different languages, indistinguishable matrix slices yet a
 * concrete witness) are the interesting part. ProvenDifferent always rides
 * on machine-checkable evidence — a witness word replayable through
 * cyk_parse_count, or an exact count/coefficient/slice mismatch replayable
 * from the recorded seed.
 */
struct EquivalenceReport {
  struct Input {
    std::string path, hash;
    int cnf_size = 0;
    bool generates_empty_word = false;
  };
  Input g1, g2;
  std::vector<std::string> alphabet;

  struct PromiseAudit {
    int max_len = 0;
    bool aborted = false;  // slice budget exhausted; audit incomplete
    std::optional<std::string> g1_witness, g2_witness;
    bool violated() const { return g1_witness || g2_witness; }
  };
  PromiseAudit promise_audit;

  struct FirstDifference {
    int max_len = 0;
    bool searched = true;  // false when the slice budget aborted the search
    std::optional<DifferenceWitness> witness;
    std::string witness_text;  // rendered in g1's alphabet
  };
  FirstDifference first_difference;

  struct CountsByLength {
    int max_len = 0;
    bool equal = true;
    int first_mismatch = -1;
    std::string g1_count, g2_count;  // decimal, at the first mismatch
  };
  CountsByLength counts;

  struct ParikhExact {
    int degree = 0;
    bool equal = true;
    std::string mismatch_monomial;  // e.g. "a^2 b" when differing
    std::string g1_coeff, g2_coeff;
  };
  ParikhExact parikh;

  SimilarityVerdict matrix_slice;
  // Extra moduli tried after an IndistinguishableUpTo verdict; a bad prime
  // can hide a genuine difference, so quiet outcomes get re-checked.
  std::vector<std::uint64_t> confirmation_primes;

  struct CommNumeric {
    int samples = 0;
    double tol = 0.0;
    int degree_cut = 0;
    CommNumericVerdict verdict;
    std::string point_text;  // the distinguishing point, exact rationals
  };
  CommNumeric comm_numeric;

  std::optional<std::string> smt_path;

  OverallKind overall = OverallKind::ConsistentWithEqual;
  std::string overall_witness;   // word or mismatch description
  std::string overall_evidence;  // stage that proved the difference
  std::vector<std::string> notes;

  /// Single-document structured rendering with stable field names.
  std::string to_json_text(int indent = 2) const;
  /// Line-per-stage rendering for terminals.
  std::string human_text() const;
};

/// Run every strategy in order: empty-word flags, first difference, counts
/// by length, exact Parikh coefficients, matrix-slice test, numeric
/// commutative-image comparison, optional SMT emission.
EquivalenceReport run_check(const CheckInput& g1, const CheckInput& g2,
                            const CheckOptions& opts);

/// FNV-1a 64-bit content hash, hex.
std::string fnv1a64_hex(std::string_view bytes);

/// The identity-demo transcript for `dim`: standard-identity statistics,
/// vanishing/non-vanishing evaluations, the permutation-language pair, and
/// the sparse-difference applicability check.
std::string identity_demo(int dim, std::uint64_t prime, std::uint64_t seed);

}  // namespace ueq

#endif  // UEQ_REPORT_HPP
