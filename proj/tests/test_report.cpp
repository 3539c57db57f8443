#include <doctest.h>

#include <nlohmann/json.hpp>

#include "testutil.hpp"
#include "ueq/ncpoly.hpp"
#include "ueq/report.hpp"

using namespace ueq;
using nlohmann::json;

namespace {

CheckInput input_of(const char* text, const char* path) {
  return {path, fnv1a64_hex(text), testutil::cnf(text)};
}

}  // namespace

TEST_CASE("run_check: {a,ab} vs {a,ba} — different, yet comm-equal") {
  CheckOptions opts;
  EquivalenceReport rep =
      run_check(input_of(testutil::kPairAb, "left.g"),
                input_of(testutil::kPairBa, "right.g"), opts);

  CHECK(rep.overall == OverallKind::ProvenDifferent);
  CHECK(rep.overall_witness == "ab");
  CHECK(rep.overall_evidence == "firstDifference");
  CHECK(!rep.promise_audit.violated());
  CHECK(rep.counts.equal);
  CHECK(rep.parikh.equal);
  CHECK(rep.comm_numeric.verdict.pointwise_equal);
  CHECK(rep.matrix_slice.distinguished);  // d = 3 sees the order
  CHECK(rep.matrix_slice.length == 2);
  // The signature disagreement pattern gets its banner.
  bool noted = false;
  for (const std::string& n : rep.notes)
    if (n.find("word order") != std::string::npos) noted = true;
  CHECK(noted);
}

TEST_CASE("run_check: identical inputs are consistent with equal") {
  CheckOptions opts;
  opts.max_len = 10;
  EquivalenceReport rep = run_check(input_of(testutil::kDyck, "d1.g"),
                                    input_of(testutil::kDyck, "d2.g"), opts);
  CHECK(rep.overall == OverallKind::ConsistentWithEqual);
  CHECK(!rep.first_difference.witness);
  CHECK(rep.counts.equal);
  CHECK(rep.parikh.equal);
  CHECK(!rep.matrix_slice.distinguished);
  CHECK(rep.comm_numeric.verdict.pointwise_equal);
}

TEST_CASE("run_check: the permutation pair at d = 2 highlights the trap") {
  auto [even, odd] = standard_identity_language_pair(2);
  CheckInput in1{"even.g", fnv1a64_hex(render_grammar(even)), to_cnf(even)};
  CheckInput in2{"odd.g", fnv1a64_hex(render_grammar(odd)), to_cnf(odd)};
  CheckOptions opts;
  opts.dim = 2;
  opts.max_len = 8;
  EquivalenceReport rep = run_check(in1, in2, opts);

  CHECK(rep.overall == OverallKind::ProvenDifferent);
  CHECK(rep.overall_evidence == "firstDifference");
  CHECK(!rep.matrix_slice.distinguished);  // the false positive
  bool highlighted = false;
  for (const std::string& n : rep.notes)
    if (n.find("false positive") != std::string::npos) highlighted = true;
  CHECK(highlighted);
}

TEST_CASE("run_check: ambiguity yields PromiseViolated when nothing differs") {
  CheckOptions opts;
  opts.max_len = 6;
  EquivalenceReport rep =
      run_check(input_of(testutil::kAmbiguous, "amb1.g"),
                input_of(testutil::kAmbiguous, "amb2.g"), opts);
  CHECK(rep.overall == OverallKind::PromiseViolated);
  CHECK(rep.overall_witness == "aaa");
}

TEST_CASE("run_check: a concrete witness beats a promise violation") {
  CheckOptions opts;
  opts.max_len = 6;
  EquivalenceReport rep = run_check(input_of(testutil::kAmbiguous, "amb.g"),
                                    input_of("S -> a", "a.g"), opts);
  CHECK(rep.promise_audit.violated());
  CHECK(rep.overall == OverallKind::ProvenDifferent);
  CHECK(rep.overall_evidence == "firstDifference");
  CHECK(rep.overall_witness == "aa");
}

TEST_CASE("run_check: counts catch same-slice-size differences") {
  // {ab, ba} vs {ab, bb}: slice sizes match at every length, so the counts
  // stage stays quiet and the Parikh stage carries the exact evidence.
  CheckOptions opts;
  opts.max_len = 4;
  EquivalenceReport rep = run_check(input_of("S -> a b | b a", "p.g"),
                                    input_of("S -> a b | b b", "q.g"), opts);
  CHECK(rep.overall == OverallKind::ProvenDifferent);
  CHECK(rep.counts.equal);  // both have one word per length
  CHECK(!rep.parikh.equal);
}

TEST_CASE("run_check: empty-language queries are valid") {
  CheckOptions opts;
  opts.max_len = 4;
  EquivalenceReport same = run_check(input_of("S -> S", "e1.g"),
                                     input_of("T -> T T", "e2.g"), opts);
  CHECK(same.overall == OverallKind::ConsistentWithEqual);

  EquivalenceReport differ = run_check(input_of("S -> eps", "eps.g"),
                                       input_of("S -> S", "none.g"), opts);
  CHECK(differ.overall == OverallKind::ProvenDifferent);
  CHECK(differ.overall_evidence == "epsilonFlag");
  CHECK(differ.overall_witness == "eps");
}

TEST_CASE("report JSON: stable field names round-trip") {
  CheckOptions opts;
  EquivalenceReport rep =
      run_check(input_of(testutil::kPairAb, "left.g"),
                input_of(testutil::kPairBa, "right.g"), opts);
  json j = json::parse(rep.to_json_text());
  for (const char* key :
       {"inputs", "promiseAudit", "firstDifference", "countsByLength",
        "parikhExact", "matrixSlice", "commNumeric", "smtEmitted",
        "overallVerdict", "notes"})
    CHECK(j.contains(key));
  CHECK(j["inputs"]["g1"]["path"] == "left.g");
  CHECK(j["inputs"]["alphabet"] == json::array({"a", "b"}));
  CHECK(j["firstDifference"]["witness"]["word"] == "ab");
  CHECK(j["firstDifference"]["witness"]["inFirst"] == true);
  CHECK(j["matrixSlice"]["outcome"] == "DistinguishedAtLength");
  CHECK(j["commNumeric"]["verdict"] == "PointwiseEqual");
  CHECK(j["overallVerdict"]["kind"] == "ProvenDifferent");
  CHECK(j["overallVerdict"]["witness"] == "ab");
}

TEST_CASE("report JSON and human text are deterministic") {
  CheckOptions opts;
  auto once = run_check(input_of(testutil::kPairAb, "l.g"),
                        input_of(testutil::kPairBa, "r.g"), opts);
  auto twice = run_check(input_of(testutil::kPairAb, "l.g"),
                         input_of(testutil::kPairBa, "r.g"), opts);
  CHECK(once.to_json_text() == twice.to_json_text());
  CHECK(once.human_text() == twice.human_text());
}

TEST_CASE("fnv1a64_hex is stable") {
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") != fnv1a64_hex("b"));
  CHECK(fnv1a64_hex("abc").size() == 16);
}

TEST_CASE("identity_demo: dim 2 transcript and the dim guard") {
  std::string t = identity_demo(2, 2147483647ULL, 0);
  CHECK(t.find("24 monomials") != std::string::npos);
  CHECK(t.find("all zero") != std::string::npos);
  CHECK(t.find("nonzero at trial") != std::string::npos);
  CHECK(t.find("12 + 12 words") != std::string::npos);
  CHECK(t.find("false positive") != std::string::npos);
  CHECK(t.find("distinguished at length 4") != std::string::npos);

  std::string commutator = identity_demo(1, 2147483647ULL, 0);
  CHECK(commutator.find("commutator") != std::string::npos);

  CHECK_THROWS_AS(identity_demo(5, 2147483647ULL, 0), GuardExceeded);
}
