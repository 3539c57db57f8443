#include "ueq/comm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "ueq/errors.hpp"
#include "ueq/rng.hpp"

namespace ueq {

GfSystem build_gf_system(const CnfGrammar& g) {
  GfSystem sys;
  sys.unknowns = g.nonterminals;
  sys.letter_variables = g.terminals;
  sys.start = g.start;
  sys.equations.resize(g.nonterminals.size());
  for (const auto& r : g.binary_rules)
    sys.equations[r.lhs].quadratic.emplace_back(r.left, r.right);
  for (const auto& r : g.terminal_rules)
    sys.equations[r.lhs].letters.push_back(r.terminal);
  return sys;
}

BigRat convergence_epsilon(const CnfGrammar& g1, const CnfGrammar& g2) {
  alphabet_embedding(g1, g2);
  if (g1.terminals.empty())
    throw Error("convergence_epsilon: empty alphabet");
  long p = std::max({grammar_size(g1), grammar_size(g2), 1});
  return BigRat(1, BigInt(p) * p * static_cast<long>(g1.terminals.size()));
}

FixedPointResult eval_fixed_point(const GfSystem& sys, const EvalPoint& point,
                                  double tol, long max_iter) {
  if (point.values.size() != sys.letter_variables.size())
    throw Error("eval_fixed_point: point dimension does not match alphabet");
  std::vector<double> x(point.values.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (point.values[i] < 0)
      throw Error("eval_fixed_point: point coordinates must be nonnegative");
    x[i] = static_cast<double>(point.values[i]);
  }

  FixedPointResult res;
  const std::size_t n = sys.unknowns.size();
  std::vector<double> cur(n, 0.0), next(n, 0.0);
  for (long it = 1; it <= max_iter; ++it) {
    double change = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      double v = 0.0;
      for (auto [d, e] : sys.equations[c].quadratic) v += cur[d] * cur[e];
      for (int a : sys.equations[c].letters) v += x[a];
      next[c] = v;
      change = std::max(change, std::abs(v - cur[c]));
    }
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

ParikhMap parikh_coefficients(const CnfGrammar& g, int max_total_degree) {
  const int nts = g.nonterminal_count();
  const int k = static_cast<int>(g.terminals.size());
  // layers[n][A]: coefficients of total degree n derivable from A.
  std::vector<std::vector<ParikhMap>> layers(
      max_total_degree + 1, std::vector<ParikhMap>(std::max(nts, 1)));

  if (max_total_degree >= 1)
    for (const auto& r : g.terminal_rules) {
      std::vector<int> v(k, 0);
      v[r.terminal] += 1;
      layers[1][r.lhs][v] += 1;
    }
  for (int n = 2; n <= max_total_degree; ++n)
    for (const auto& r : g.binary_rules)
      for (int n1 = 1; n1 < n; ++n1) {
        const ParikhMap& left = layers[n1][r.left];
        if (left.empty()) continue;
        const ParikhMap& right = layers[n - n1][r.right];
        for (const auto& [v1, c1] : left)
          for (const auto& [v2, c2] : right) {
            std::vector<int> v = v1;
            for (int i = 0; i < k; ++i) v[i] += v2[i];
            layers[n][r.lhs][v] += c1 * c2;
          }
      }

  ParikhMap out;
  if (g.generates_empty_word) out[std::vector<int>(k, 0)] = 1;
  if (nts > 0)
    for (int n = 1; n <= max_total_degree; ++n)
      for (const auto& [v, c] : layers[n][g.start]) out[v] += c;
  return out;
}

ParikhMap remap_parikh(const ParikhMap& m, const std::vector<int>& embedding,
                       int alphabet_size) {
  ParikhMap out;
  for (const auto& [v, c] : m) {
    std::vector<int> w(alphabet_size, 0);
    for (std::size_t j = 0; j < v.size(); ++j) w[embedding.at(j)] += v[j];
    out[w] += c;
  }
  return out;
}

namespace {

EvalPoint restrict_point(const EvalPoint& p, const std::vector<int>& embedding) {
  EvalPoint out;
  out.values.reserve(embedding.size());
  for (int id : embedding) out.values.push_back(p.values.at(id));
  return out;
}

}  // namespace

CommNumericVerdict comm_equal_numeric(const CnfGrammar& g1,
                                      const CnfGrammar& g2, int samples,
                                      double tol, std::uint64_t seed,
                                      int degree_cut) {
  std::vector<int> embedding = alphabet_embedding(g1, g2);
  if (g1.terminals.empty()) {
    // No letter variables: both images are the constant flag term.
    CommNumericVerdict verdict;
    verdict.pointwise_equal =
        g1.generates_empty_word == g2.generates_empty_word;
    if (!verdict.pointwise_equal) {
      verdict.sample = 0;
      verdict.delta = 1.0;
      verdict.threshold = tol;
    }
    return verdict;
  }
  const BigRat eps = convergence_epsilon(g1, g2);
  const std::size_t k = g1.terminals.size();
  const long p = std::max({grammar_size(g1), grammar_size(g2), 1});

  GfSystem sys1 = build_gf_system(g1);
  GfSystem sys2 = build_gf_system(g2);

  std::mt19937_64 eng(seed);
  CommNumericVerdict verdict;
  verdict.pointwise_equal = true;

  for (int s = 0; s < samples; ++s) {
    // The detection window for a genuine degree-m difference sits at small
    // radii (the tail bound explodes near ε), so radii cycle through twelve
    // octaves of (0, ε) instead of clustering uniformly near ε.
    const int octave = 1 + (s % 12);
    const BigInt scale = BigInt(65536) << (octave - 1);
    EvalPoint point;
    BigRat x_max = 0;
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t mant = 32768 + uniform_mod(eng, 32768);  // [2^15, 2^16)
      BigRat x = eps * BigRat(BigInt(mant), scale);
      x_max = std::max(x_max, x);
      point.values.push_back(std::move(x));
    }

    FixedPointResult r1 = eval_fixed_point(sys1, point);
    FixedPointResult r2 =
        eval_fixed_point(sys2, restrict_point(point, embedding));
    if (!r1.converged || !r2.converged)
      throw NotConverged("comm_equal_numeric: series evaluation hit the "
                         "iteration cap");

    double f1 = sys1.unknowns.empty() ? 0.0 : r1.values[sys1.start];
    double f2 = sys2.unknowns.empty() ? 0.0 : r2.values[sys2.start];
    // Both flags enter the constant term of the full image.
    f1 += g1.generates_empty_word ? 1.0 : 0.0;
    f2 += g2.generates_empty_word ? 1.0 : 0.0;

    // Coefficients beyond degree_cut are dominated by (p²·|Σ|·x_max)^n for
    // each series, hence the factor 2 in the geometric tail.
    double r = static_cast<double>(x_max * BigRat(p) * p *
                                   static_cast<long>(k));
    double tail =
        2.0 * std::pow(r, degree_cut + 1) / (1.0 - r);
    double threshold = tol + tail;
    double delta = std::abs(f1 - f2);
    if (delta > threshold) {
      verdict.pointwise_equal = false;
      verdict.sample = s;
      verdict.delta = delta;
      verdict.threshold = threshold;
      verdict.point = std::move(point);
      return verdict;
    }
  }
  return verdict;
}

SubsetVerdict subset_equivalence(const CnfGrammar& g1, const CnfGrammar& g2,
                                 int samples, double tol, std::uint64_t seed) {
  return comm_equal_numeric(g1, g2, samples, tol, seed).pointwise_equal
             ? SubsetVerdict::Equal
             : SubsetVerdict::NotEqual;
}

namespace {

class SmtNames {
public:
  std::string claim(const std::string& name) {
    std::string candidate = name;
    while (!used_.insert(candidate).second) candidate += "_2";
    return candidate;
  }

private:
  std::set<std::string> used_;
};

std::string sum_term(const GfSystem::Equation& eq,
                     const std::vector<std::string>& unknowns,
                     const std::vector<std::string>& letters) {
  std::vector<std::string> terms;
  for (auto [d, e] : eq.quadratic)
    terms.push_back("(* " + unknowns[d] + " " + unknowns[e] + ")");
  for (int a : eq.letters) terms.push_back(letters[a]);
  if (terms.empty()) return "0";
  if (terms.size() == 1) return terms[0];
  std::string out = "(+";
  for (const std::string& t : terms) out += " " + t;
  return out + ")";
}

}  // namespace

std::string emit_smt_sentence(const CnfGrammar& g1, const CnfGrammar& g2) {
  std::vector<int> embedding = alphabet_embedding(g1, g2);
  const bool degenerate = g1.terminals.empty();
  const BigRat eps = degenerate ? BigRat(1) : convergence_epsilon(g1, g2);
  const std::string num = numerator(eps).str();
  const std::string den = denominator(eps).str();

  SmtNames names;
  std::vector<std::string> letters;
  for (const std::string& a : g1.terminals) letters.push_back(names.claim(a));
  std::vector<std::string> unknowns1, unknowns2;
  for (const std::string& n : g1.nonterminals)
    unknowns1.push_back(names.claim(n));
  for (const std::string& n : g2.nonterminals)
    unknowns2.push_back(names.claim(n));

  // g2's equations refer to letters through the shared alphabet.
  std::vector<std::string> letters2;
  for (int id : embedding) letters2.push_back(letters[id]);

  GfSystem sys1 = build_gf_system(g1);
  GfSystem sys2 = build_gf_system(g2);

  std::ostringstream out;
  out << "; commutative-image equality sentence: unsat iff the images are "
         "equal\n";
  out << "; epsilon = ";
  if (degenerate)
    out << "n/a (empty alphabet)";
  else
    out << num << "/" << den;
  out << "; empty-word flags: "
      << (g1.generates_empty_word ? "true" : "false") << " / "
      << (g2.generates_empty_word ? "true" : "false") << "\n";
  out << "(set-logic NRA)\n";
  out << "(assert (not (forall (";
  bool first = true;
  auto quantify = [&](const std::string& v) {
    if (!first) out << " ";
    first = false;
    out << "(" << v << " Real)";
  };
  for (const std::string& v : letters) quantify(v);
  for (const std::string& v : unknowns1) quantify(v);
  for (const std::string& v : unknowns2) quantify(v);
  out << ")\n  (=> (and\n";
  for (const std::string& v : letters) {
    out << "    (< (* " << v << " " << den << ") " << num << ")\n";
    out << "    (< (* (- " << v << ") " << den << ") " << num << ")\n";
  }
  for (std::size_t c = 0; c < unknowns1.size(); ++c)
    out << "    (= " << unknowns1[c] << " "
        << sum_term(sys1.equations[c], unknowns1, letters) << ")\n";
  for (std::size_t c = 0; c < unknowns2.size(); ++c)
    out << "    (= " << unknowns2[c] << " "
        << sum_term(sys2.equations[c], unknowns2, letters2) << ")\n";
  out << "  )\n";
  // The empty word contributes 1 to the constant term of the full image.
  auto side = [](const std::string& start, bool eps) {
    return eps ? "(+ " + start + " 1)" : start;
  };
  std::string s1 = unknowns1.empty() ? "0" : unknowns1[sys1.start];
  std::string s2 = unknowns2.empty() ? "0" : unknowns2[sys2.start];
  out << "  (= " << side(s1, g1.generates_empty_word) << " "
      << side(s2, g2.generates_empty_word) << "))))\n";
  out << "(check-sat)\n";
  return out.str();
}

}  // namespace ueq
