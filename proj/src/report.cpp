#include "ueq/report.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ueq/errors.hpp"
#include "ueq/ncpoly.hpp"

namespace ueq {

using nlohmann::json;

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

namespace {

std::string monomial_text(const std::vector<int>& counts,
                          const std::vector<std::string>& alphabet) {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (!out.empty()) out += ' ';
    out += alphabet[i];
    if (counts[i] > 1) out += "^" + std::to_string(counts[i]);
  }
  return out.empty() ? "1" : out;
}

std::string rat_text(const BigRat& r) {
  std::string out = numerator(r).str();
  if (denominator(r) != 1) out += "/" + denominator(r).str();
  return out;
}

}  // namespace

EquivalenceReport run_check(const CheckInput& in1, const CheckInput& in2,
                            const CheckOptions& opts) {
  const CnfGrammar& g1 = in1.cnf;
  const CnfGrammar& g2 = in2.cnf;
  std::vector<int> embedding = alphabet_embedding(g1, g2);

  EquivalenceReport rep;
  rep.g1 = {in1.path, in1.hash, grammar_size(g1), g1.generates_empty_word};
  rep.g2 = {in2.path, in2.hash, grammar_size(g2), g2.generates_empty_word};
  rep.alphabet = g1.terminals;

  // Promise audit: a found witness voids every count-based conclusion.
  rep.promise_audit.max_len = opts.max_len;
  try {
    if (auto w = check_unambiguous_upto(g1, opts.max_len))
      rep.promise_audit.g1_witness = format_word(g1, *w);
    if (auto w = check_unambiguous_upto(g2, opts.max_len))
      rep.promise_audit.g2_witness = format_word(g2, *w);
  } catch (const GuardExceeded&) {
    rep.promise_audit.aborted = true;
    rep.notes.push_back(
        "promise audit aborted: slice enumeration exceeded its budget");
  }

  // First difference, empty-word flags compared first inside.
  rep.first_difference.max_len = opts.max_len;
  try {
    rep.first_difference.witness = first_difference(g1, g2, opts.max_len);
    if (rep.first_difference.witness)
      rep.first_difference.witness_text =
          format_word(g1, rep.first_difference.witness->word);
  } catch (const GuardExceeded&) {
    rep.first_difference.searched = false;
    rep.notes.push_back(
        "first-difference search aborted: slice enumeration exceeded its "
        "budget");
  }

  // Derivation counts per length (equals slice sizes under the promise).
  rep.counts.max_len = opts.max_len;
  {
    std::vector<BigInt> c1 = count_words_by_length(g1, opts.max_len);
    std::vector<BigInt> c2 = count_words_by_length(g2, opts.max_len);
    for (int n = 0; n <= opts.max_len; ++n)
      if (c1[n] != c2[n]) {
        rep.counts.equal = false;
        rep.counts.first_mismatch = n;
        rep.counts.g1_count = c1[n].str();
        rep.counts.g2_count = c2[n].str();
        break;
      }
  }

  // Exact Parikh coefficients up to the degree bound.
  rep.parikh.degree = opts.degree;
  {
    ParikhMap m1 = parikh_coefficients(g1, opts.degree);
    ParikhMap m2 = remap_parikh(parikh_coefficients(g2, opts.degree),
                                embedding,
                                static_cast<int>(g1.terminals.size()));
    auto it1 = m1.begin();
    auto it2 = m2.begin();
    while (it1 != m1.end() || it2 != m2.end()) {
      const std::vector<int>* v = nullptr;
      BigInt a = 0, b = 0;
      if (it2 == m2.end() || (it1 != m1.end() && it1->first < it2->first)) {
        v = &it1->first;
        a = it1->second;
        ++it1;
      } else if (it1 == m1.end() || it2->first < it1->first) {
        v = &it2->first;
        b = it2->second;
        ++it2;
      } else {
        if (it1->second != it2->second) {
          v = &it1->first;
          a = it1->second;
          b = it2->second;
        }
        ++it1;
        if (v == nullptr) ++it2;
      }
      if (v != nullptr) {
        rep.parikh.equal = false;
        rep.parikh.mismatch_monomial = monomial_text(*v, g1.terminals);
        rep.parikh.g1_coeff = a.str();
        rep.parikh.g2_coeff = b.str();
        break;
      }
    }
  }

  // Matrix-slice similarity over F_p. A difference polynomial with ±1
  // coefficients vanishes mod p only for finitely many primes, so a quiet
  // verdict is confirmed over two further moduli.
  rep.matrix_slice = d_similarity_test(g1, g2, opts.dim, opts.max_len,
                                       opts.trials, opts.prime, opts.seed);
  if (!rep.matrix_slice.distinguished) {
    for (std::uint64_t backup : {1'000'000'007ULL, 998244353ULL}) {
      if (backup == opts.prime) continue;
      rep.confirmation_primes.push_back(backup);
      SimilarityVerdict v = d_similarity_test(
          g1, g2, opts.dim, opts.max_len, opts.trials, backup, opts.seed);
      if (v.distinguished) {
        rep.matrix_slice = v;
        rep.notes.push_back(
            "matrix slices quiet mod " + std::to_string(opts.prime) +
            " but distinguished mod " + std::to_string(backup) +
            "; treat the original modulus as a bad prime");
        break;
      }
    }
  }

  // Numeric comparison of the commutative images.
  rep.comm_numeric.samples = opts.samples;
  rep.comm_numeric.tol = opts.tol;
  rep.comm_numeric.degree_cut = opts.degree;
  rep.comm_numeric.verdict = comm_equal_numeric(
      g1, g2, opts.samples, opts.tol, opts.seed, opts.degree);
  if (!rep.comm_numeric.verdict.pointwise_equal) {
    std::string pt;
    for (std::size_t i = 0; i < g1.terminals.size(); ++i) {
      if (!pt.empty()) pt += ", ";
      pt += g1.terminals[i] + " = " +
            rat_text(rep.comm_numeric.verdict.point.values[i]);
    }
    rep.comm_numeric.point_text = pt;
  }

  if (opts.emit_smt_path) rep.smt_path = *opts.emit_smt_path;

  // Overall verdict. A witness word is sound with or without the promise;
  // exact count/coefficient/slice mismatches need it.
  const bool promise_violated = rep.promise_audit.violated();
  if (rep.first_difference.witness) {
    rep.overall = OverallKind::ProvenDifferent;
    rep.overall_witness = rep.first_difference.witness_text;
    rep.overall_evidence = rep.first_difference.witness->word.empty()
                               ? "epsilonFlag"
                               : "firstDifference";
  } else if (promise_violated) {
    rep.overall = OverallKind::PromiseViolated;
    rep.overall_witness = rep.promise_audit.g1_witness
                              ? *rep.promise_audit.g1_witness
                              : *rep.promise_audit.g2_witness;
  } else if (!rep.counts.equal) {
    rep.overall = OverallKind::ProvenDifferent;
    rep.overall_witness = "derivation counts differ at length " +
                          std::to_string(rep.counts.first_mismatch) + " (" +
                          rep.counts.g1_count + " vs " + rep.counts.g2_count +
                          ")";
    rep.overall_evidence = "countsByLength";
  } else if (!rep.parikh.equal) {
    rep.overall = OverallKind::ProvenDifferent;
    rep.overall_witness = "Parikh coefficient of " +
                          rep.parikh.mismatch_monomial + " differs (" +
                          rep.parikh.g1_coeff + " vs " + rep.parikh.g2_coeff +
                          ")";
    rep.overall_evidence = "parikhExact";
  } else if (rep.matrix_slice.distinguished) {
    rep.overall = OverallKind::ProvenDifferent;
    rep.overall_witness = "slice signatures differ at length " +
                          std::to_string(rep.matrix_slice.length) +
                          " (trial " + std::to_string(rep.matrix_slice.trial) +
                          ", seed " + std::to_string(opts.seed) + ")";
    rep.overall_evidence = "matrixSlice";
  } else {
    rep.overall = OverallKind::ConsistentWithEqual;
  }

  if (promise_violated && rep.overall == OverallKind::ProvenDifferent)
    rep.notes.push_back(
        "unambiguity promise violated; the difference witness itself remains "
        "sound");
  if (!rep.comm_numeric.verdict.pointwise_equal &&
      rep.parikh.equal && rep.counts.equal)
    rep.notes.push_back(
        "numeric comparison distinguished the images although the exact "
        "stages agree up to their bounds; suspect floating-point trouble");
  if (rep.overall == OverallKind::ProvenDifferent &&
      !rep.matrix_slice.distinguished)
    rep.notes.push_back(
        "matrix substitution with d = " + std::to_string(opts.dim) +
        " could not separate languages proven different: an "
        "Amitsur-Levitski-type false positive");
  if (rep.overall == OverallKind::ProvenDifferent && rep.parikh.equal &&
      rep.comm_numeric.verdict.pointwise_equal)
    rep.notes.push_back(
        "the commutative images agree although the languages differ: "
        "word order is all that separates them");
  return rep;
}

namespace {

json witness_json(const EquivalenceReport::FirstDifference& fd) {
  if (!fd.witness) return nullptr;
  return json{{"word", fd.witness_text},
              {"length", fd.witness->word.size()},
              {"inFirst", fd.witness->in_first},
              {"inSecond", fd.witness->in_second}};
}

std::string overall_kind_text(OverallKind k) {
  switch (k) {
    case OverallKind::ProvenDifferent: return "ProvenDifferent";
    case OverallKind::ConsistentWithEqual: return "ConsistentWithEqual";
    case OverallKind::PromiseViolated: return "PromiseViolated";
  }
  return "?";
}

}  // namespace

std::string EquivalenceReport::to_json_text(int indent) const {
  json j;
  j["inputs"] = {
      {"g1",
       {{"path", g1.path},
        {"hash", g1.hash},
        {"cnfSize", g1.cnf_size},
        {"generatesEmptyWord", g1.generates_empty_word}}},
      {"g2",
       {{"path", g2.path},
        {"hash", g2.hash},
        {"cnfSize", g2.cnf_size},
        {"generatesEmptyWord", g2.generates_empty_word}}},
      {"alphabet", alphabet}};
  j["promiseAudit"] = {
      {"maxLen", promise_audit.max_len},
      {"aborted", promise_audit.aborted},
      {"g1Witness", promise_audit.g1_witness ? json(*promise_audit.g1_witness)
                                             : json(nullptr)},
      {"g2Witness", promise_audit.g2_witness ? json(*promise_audit.g2_witness)
                                             : json(nullptr)}};
  j["firstDifference"] = {{"maxLen", first_difference.max_len},
                          {"searched", first_difference.searched},
                          {"witness", witness_json(first_difference)}};
  j["countsByLength"] = {{"maxLen", counts.max_len}, {"equal", counts.equal}};
  if (!counts.equal) {
    j["countsByLength"]["firstMismatch"] = counts.first_mismatch;
    j["countsByLength"]["g1"] = counts.g1_count;
    j["countsByLength"]["g2"] = counts.g2_count;
  }
  j["parikhExact"] = {{"degree", parikh.degree}, {"equal", parikh.equal}};
  if (!parikh.equal)
    j["parikhExact"]["mismatch"] = {{"monomial", parikh.mismatch_monomial},
                                    {"g1", parikh.g1_coeff},
                                    {"g2", parikh.g2_coeff}};
  j["matrixSlice"] = {
      {"dim", matrix_slice.dim},
      {"prime", std::to_string(matrix_slice.prime)},
      {"trials", matrix_slice.trials},
      {"maxLen", matrix_slice.max_len},
      {"seed", std::to_string(matrix_slice.seed)},
      {"outcome", matrix_slice.distinguished ? "DistinguishedAtLength"
                                             : "IndistinguishableUpTo"}};
  if (matrix_slice.distinguished) {
    j["matrixSlice"]["length"] = matrix_slice.length;
    j["matrixSlice"]["trial"] = matrix_slice.trial;
  }
  if (!confirmation_primes.empty()) {
    json primes = json::array();
    for (std::uint64_t p : confirmation_primes)
      primes.push_back(std::to_string(p));
    j["matrixSlice"]["confirmationPrimes"] = primes;
  }
  j["commNumeric"] = {{"samples", comm_numeric.samples},
                      {"tol", comm_numeric.tol},
                      {"degreeCut", comm_numeric.degree_cut},
                      {"verdict", comm_numeric.verdict.pointwise_equal
                                      ? "PointwiseEqual"
                                      : "Distinguished"}};
  if (!comm_numeric.verdict.pointwise_equal) {
    j["commNumeric"]["sample"] = comm_numeric.verdict.sample;
    j["commNumeric"]["delta"] = comm_numeric.verdict.delta;
    j["commNumeric"]["threshold"] = comm_numeric.verdict.threshold;
    j["commNumeric"]["point"] = comm_numeric.point_text;
  }
  j["smtEmitted"] = smt_path ? json{{"path", *smt_path}} : json(nullptr);
  j["overallVerdict"] = {{"kind", overall_kind_text(overall)}};
  if (overall != OverallKind::ConsistentWithEqual) {
    j["overallVerdict"]["witness"] = overall_witness;
    if (!overall_evidence.empty())
      j["overallVerdict"]["evidence"] = overall_evidence;
  } else {
    j["overallVerdict"]["parameters"] = {
        {"maxLen", first_difference.max_len},
        {"degree", parikh.degree},
        {"dim", matrix_slice.dim},
        {"trials", matrix_slice.trials},
        {"samples", comm_numeric.samples}};
  }
  j["notes"] = notes;
  return j.dump(indent) + "\n";
}

std::string EquivalenceReport::human_text() const {
  std::ostringstream out;
  out << "inputs:\n";
  out << "  G1: " << g1.path << " (hash " << g1.hash << ", |G| = "
      << g1.cnf_size << (g1.generates_empty_word ? ", generates eps" : "")
      << ")\n";
  out << "  G2: " << g2.path << " (hash " << g2.hash << ", |G| = "
      << g2.cnf_size << (g2.generates_empty_word ? ", generates eps" : "")
      << ")\n";
  out << "  alphabet:";
  for (const std::string& a : alphabet) out << " " << a;
  out << "\n";

  out << "promise audit (len <= " << promise_audit.max_len << "): ";
  if (promise_audit.aborted)
    out << "aborted (budget)";
  else if (!promise_audit.violated())
    out << "no ambiguity found";
  else {
    if (promise_audit.g1_witness)
      out << "G1 ambiguous at \"" << *promise_audit.g1_witness << "\" ";
    if (promise_audit.g2_witness)
      out << "G2 ambiguous at \"" << *promise_audit.g2_witness << "\"";
  }
  out << "\n";

  out << "first difference (len <= " << first_difference.max_len << "): ";
  if (!first_difference.searched)
    out << "search aborted (budget)";
  else if (first_difference.witness)
    out << "\"" << first_difference.witness_text << "\" in "
        << (first_difference.witness->in_first ? "G1" : "G2") << " only";
  else
    out << "none";
  out << "\n";

  out << "counts by length (<= " << counts.max_len << "): ";
  if (counts.equal)
    out << "equal";
  else
    out << "first mismatch at n = " << counts.first_mismatch << " ("
        << counts.g1_count << " vs " << counts.g2_count << ")";
  out << "\n";

  out << "Parikh coefficients (deg <= " << parikh.degree << "): ";
  if (parikh.equal)
    out << "equal";
  else
    out << "differ at " << parikh.mismatch_monomial << " (" << parikh.g1_coeff
        << " vs " << parikh.g2_coeff << ")";
  out << "\n";

  out << "matrix slices (d = " << matrix_slice.dim << ", p = "
      << matrix_slice.prime << ", trials = " << matrix_slice.trials
      << ", len <= " << matrix_slice.max_len << "): ";
  if (matrix_slice.distinguished)
    out << "distinguished at length " << matrix_slice.length << " (trial "
        << matrix_slice.trial << ")";
  else
    out << "indistinguishable";
  out << "\n";

  out << "commutative images (numeric, " << comm_numeric.samples
      << " samples): ";
  if (comm_numeric.verdict.pointwise_equal)
    out << "consistent with equality";
  else
    out << "distinguished at sample " << comm_numeric.verdict.sample
        << " (|delta| = " << comm_numeric.verdict.delta << " > "
        << comm_numeric.verdict.threshold << "; " << comm_numeric.point_text
        << ")";
  out << "\n";

  if (smt_path) out << "SMT sentence written to " << *smt_path << "\n";
  for (const std::string& n : notes) out << "note: " << n << "\n";

  out << "overall: ";
  switch (overall) {
    case OverallKind::ProvenDifferent:
      out << "PROVEN DIFFERENT (" << overall_witness << ")";
      break;
    case OverallKind::ConsistentWithEqual:
      out << "CONSISTENT WITH EQUAL within the tested bounds";
      break;
    case OverallKind::PromiseViolated:
      out << "PROMISE VIOLATED (ambiguous at \"" << overall_witness << "\")";
      break;
  }
  out << "\n";
  return out.str();
}

std::string identity_demo(int dim, std::uint64_t prime, std::uint64_t seed) {
  if (dim < 1 || dim > 4)
    throw GuardExceeded("identity-demo supports 1 <= dim <= 4");
  std::ostringstream out;

  NcPoly id = standard_identity(dim);
  out << "standard identity for d = " << dim << ": " << monomial_count(id)
      << " monomials of degree " << id.degree() << ", coefficients in {-1,+1}"
      << (id.coefficients_in_pm_one() ? "" : " [VIOLATED]") << "\n";
  out << "monomial lower bound for d = " << dim << " identities: 2^" << dim - 1
      << " = " << (1ull << (dim - 1)) << " -> "
      << (meets_lower_bound(id, dim) ? "met" : "NOT met") << "\n";
  if (dim == 1)
    out << "(d = 1 is the commutator X1 X2 - X2 X1: scalars commute)\n";

  const int trials = 200;
  IdentityTestVerdict at_d = is_identity_probabilistic(id, dim, trials, prime, seed);
  out << "evaluation on " << trials << " random " << dim << "x" << dim
      << " assignments mod " << prime << ": "
      << (at_d.refuted ? "NONZERO (unexpected)" : "all zero") << "\n";
  IdentityTestVerdict above =
      is_identity_probabilistic(id, dim + 1, trials, prime, seed);
  out << "evaluation on " << trials << " random " << dim + 1 << "x" << dim + 1
      << " assignments mod " << prime << ": "
      << (above.refuted ? "nonzero at trial " + std::to_string(above.trial)
                        : "all zero (unexpected)")
      << "\n";

  auto [even, odd] = standard_identity_language_pair(dim);
  CnfGrammar c1 = to_cnf(even);
  CnfGrammar c2 = to_cnf(odd);
  out << "permutation-language pair over " << 2 * dim << " letters: "
      << even.rules.size() << " + " << odd.rules.size() << " words of length "
      << 2 * dim << "\n";
  auto diff = first_difference(c1, c2, 2 * dim);
  out << "  first difference: "
      << (diff ? "\"" + format_word(c1, diff->word) + "\"" : "none") << "\n";
  SimilarityVerdict at = d_similarity_test(c1, c2, dim, 2 * dim, 8, prime, seed);
  out << "  matrix slices with d = " << dim << ": "
      << (at.distinguished
              ? "distinguished at length " + std::to_string(at.length) +
                    " (unexpected)"
              : "indistinguishable — the Amitsur-Levitski false positive")
      << "\n";
  SimilarityVerdict up =
      d_similarity_test(c1, c2, dim + 1, 2 * dim, 8, prime, seed);
  out << "  matrix slices with d = " << dim + 1 << ": "
      << (up.distinguished
              ? "distinguished at length " + std::to_string(up.length)
              : "indistinguishable (unexpected)")
      << "\n";
  Theorem1Report th = theorem1_applicability(c1, c2, dim, 2 * dim);
  out << "  sparse-difference hypotheses at d = " << dim << ": "
      << (th.applies ? "hold" : "violated at length " +
                                    std::to_string(*th.first_violation))
      << " (" << even.rules.size() + odd.rules.size()
      << " differing words vs bound " << (1ull << (dim - 1)) << ")\n";
  return out.str();
}

}  // namespace ueq
