#include "ueq/ncpoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ueq/errors.hpp"
#include "ueq/oracle.hpp"
#include "ueq/rng.hpp"

namespace ueq {

namespace {

// Heap's algorithm: every step is a single transposition, so the permutation
// sign just alternates. visit(perm, sign) runs for all n! permutations.
template <class F>
void for_each_permutation(int n, F&& visit) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> c(n, 0);
  int sign = 1;
  visit(static_cast<const std::vector<int>&>(perm), sign);
  int i = 0;
  while (i < n) {
    if (c[i] < i) {
      if (i % 2 == 0)
        std::swap(perm[0], perm[i]);
      else
        std::swap(perm[c[i]], perm[i]);
      sign = -sign;
      visit(static_cast<const std::vector<int>&>(perm), sign);
      ++c[i];
      i = 0;
    } else {
      c[i] = 0;
      ++i;
    }
  }
}

std::size_t checked_factorial(int n, std::size_t cap, const char* what) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) {
    f *= static_cast<std::size_t>(i);
    if (f > cap)
      throw GuardExceeded(std::string(what) +
                          ": factorial table exceeds the desk-scale cap");
  }
  return f;
}

}  // namespace

NcPoly NcPoly::variable(int id) { return monomial(Monomial{id}); }

NcPoly NcPoly::constant(BigInt c) { return monomial(Monomial{}, std::move(c)); }

NcPoly NcPoly::monomial(Monomial m, BigInt c) {
  NcPoly p;
  if (c != 0) p.terms_.emplace(std::move(m), std::move(c));
  return p;
}

int NcPoly::degree() const {
  std::size_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.size());
  return static_cast<int>(d);
}

int NcPoly::variable_span() const {
  int span = 0;
  for (const auto& [m, c] : terms_)
    for (int v : m) span = std::max(span, v + 1);
  return span;
}

BigInt NcPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? BigInt(0) : it->second;
}

bool NcPoly::coefficients_in_pm_one() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
    return t.second == 1 || t.second == -1;
  });
}

void NcPoly::add_term(const Monomial& m, const BigInt& c) {
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (c != 0) terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

NcPoly& NcPoly::operator+=(const NcPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

NcPoly& NcPoly::operator-=(const NcPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

NcPoly operator*(const NcPoly& a, const NcPoly& b) {
  NcPoly out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add_term(m, ca * cb);
    }
  return out;
}

NcPoly NcPoly::operator-() const {
  NcPoly out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

std::string NcPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  auto name_of = [&](int v) {
    if (v < static_cast<int>(names.size())) return names[v];
    return "X" + std::to_string(v + 1);
  };
  bool compact = true;
  for (const auto& [m, c] : terms_)
    for (int v : m)
      if (name_of(v).size() != 1) compact = false;

  std::vector<const std::pair<const Monomial, BigInt>*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->first.size() != b->first.size())
      return a->first.size() < b->first.size();
    return a->first < b->first;
  });

  std::ostringstream out;
  bool first = true;
  for (const auto* t : order) {
    const auto& [m, c] = *t;
    BigInt abs = c < 0 ? BigInt(-c) : c;
    if (first)
      out << (c < 0 ? "-" : "");
    else
      out << (c < 0 ? " - " : " + ");
    first = false;
    if (abs != 1 || m.empty()) {
      out << abs.str();
      if (!m.empty()) out << " ";
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i > 0 && !compact) out << " ";
      out << name_of(m[i]);
    }
  }
  return out.str();
}

NcPoly nc_substitute(const NcPoly& p, const std::vector<NcPoly>& subst) {
  NcPoly out;
  for (const auto& [m, c] : p.terms()) {
    NcPoly prod = NcPoly::constant(c);
    for (int v : m) {
      if (v < 0 || v >= static_cast<int>(subst.size()))
        throw Error("nc_substitute: no image for variable X" +
                    std::to_string(v + 1));
      prod = prod * subst[v];
    }
    out += prod;
  }
  return out;
}

namespace {

template <class Scalar, class CoeffFn>
DenseMatrix<Scalar> eval_impl(const NcPoly& p,
                              const std::vector<DenseMatrix<Scalar>>& a,
                              CoeffFn coeff) {
  if (a.empty()) throw Error("nc_eval: empty assignment");
  const int d = static_cast<int>(a[0].rows());
  for (const auto& m : a)
    if (m.rows() != d || m.cols() != d)
      throw Error("nc_eval: assignment matrices must share one dimension");
  if (p.variable_span() > static_cast<int>(a.size()))
    throw Error("nc_eval: assignment does not cover every variable");

  DenseMatrix<Scalar> acc = DenseMatrix<Scalar>::Zero(d, d);
  for (const auto& [m, c] : p.terms()) {
    DenseMatrix<Scalar> prod = DenseMatrix<Scalar>::Identity(d, d);
    for (int v : m) prod = prod * a[v];
    acc += coeff(c) * prod;
  }
  return acc;
}

}  // namespace

MatR nc_eval(const NcPoly& p, const std::vector<MatR>& assignment) {
  return eval_impl<double>(p, assignment, [](const BigInt& c) {
    return c.convert_to<double>();
  });
}

MatF nc_eval(const NcPoly& p, const std::vector<MatF>& assignment,
             std::uint64_t modulus) {
  return eval_impl<Fp>(p, assignment, [modulus](const BigInt& c) {
    return Fp::from_bigint(c, modulus);
  });
}

NcPoly standard_identity(int d, std::size_t monomial_cap) {
  if (d < 1) throw Error("standard_identity requires d >= 1");
  checked_factorial(2 * d, monomial_cap, "standard_identity");
  NcPoly out;
  for_each_permutation(2 * d, [&](const std::vector<int>& perm, int sign) {
    out += NcPoly::monomial(perm, sign);
  });
  return out;
}

NcPoly razmyslov_identity(int d) {
  if (d < 1) throw Error("razmyslov_identity requires d >= 1");
  checked_factorial(d, 50'000, "razmyslov_identity");
  const NcPoly x2 = NcPoly::variable(1);
  // commutators[e] = [X1^{e+1}, X2]
  std::vector<NcPoly> commutators;
  for (int e = 1; e <= d; ++e) {
    NcPoly power = NcPoly::monomial(Monomial(static_cast<std::size_t>(e), 0));
    commutators.push_back(power * x2 - x2 * power);
  }
  NcPoly out;
  for_each_permutation(d, [&](const std::vector<int>& perm, int sign) {
    NcPoly prod = NcPoly::constant(sign);
    for (int i = 0; i < d; ++i) prod = prod * commutators[perm[i]];
    out += prod;
  });
  return out;
}

NcPoly nc_determinant(const NcMatrix& m) {
  const int n = m.size();
  if (n < 1) throw Error("nc_determinant requires a nonempty matrix");
  for (const auto& row : m.entries)
    if (static_cast<int>(row.size()) != n)
      throw Error("nc_determinant requires a square matrix");
  checked_factorial(n, 500'000, "nc_determinant");
  NcPoly out;
  for_each_permutation(n, [&](const std::vector<int>& perm, int) {
    NcPoly prod = NcPoly::constant(1);
    for (int i = 0; i < n; ++i) prod = prod * m.entries[i][perm[i]];
    out += prod;
  });
  return out;
}

IdentityTestVerdict is_identity_probabilistic(const NcPoly& p, int dim,
                                              int trials,
                                              std::uint64_t modulus,
                                              std::uint64_t seed) {
  if (trials < 1) throw Error("is_identity_probabilistic requires trials >= 1");
  IdentityTestVerdict v;
  v.dim = dim;
  v.trials = trials;
  v.modulus = modulus;
  v.seed = seed;
  const int vars = std::max(p.variable_span(), 1);
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 eng = seeded_engine(seed, static_cast<std::uint64_t>(t));
    std::vector<MatF> a;
    a.reserve(vars);
    for (int i = 0; i < vars; ++i)
      a.push_back(random_field_matrix(dim, modulus, eng));
    MatF value = nc_eval(p, a, modulus);
    if (value != MatF::Zero(dim, dim)) {
      v.refuted = true;
      v.trial = t;
      return v;
    }
  }
  return v;
}

bool meets_lower_bound(const NcPoly& p, int d) {
  if (d < 1 || d > 60) throw Error("meets_lower_bound requires 1 <= d <= 60");
  return monomial_count(p) >= (std::uint64_t{1} << (d - 1));
}

std::pair<Grammar, Grammar> standard_identity_language_pair(
    int d, std::size_t word_cap) {
  if (d < 1) throw Error("standard_identity_language_pair requires d >= 1");
  checked_factorial(2 * d, word_cap, "standard_identity_language_pair");

  std::vector<std::vector<int>> even, odd;
  for_each_permutation(2 * d, [&](const std::vector<int>& perm, int sign) {
    (sign > 0 ? even : odd).push_back(perm);
  });
  std::sort(even.begin(), even.end());
  std::sort(odd.begin(), odd.end());

  auto build = [&](const std::vector<std::vector<int>>& words) {
    Grammar g;
    g.start = "S";
    g.nonterminals = {"S"};
    std::vector<bool> seen(static_cast<std::size_t>(2 * d), false);
    for (const auto& w : words) {
      Rule r;
      r.lhs = "S";
      for (int v : w) {
        r.rhs.push_back("x" + std::to_string(v + 1));
        if (!seen[v]) {
          seen[v] = true;
          g.terminals.push_back(r.rhs.back());
        }
      }
      g.rules.push_back(std::move(r));
    }
    return g;
  };
  return {build(even), build(odd)};
}

NcPoly slice_difference_poly(const CnfGrammar& g1, const CnfGrammar& g2,
                             int n) {
  std::vector<int> embedding = alphabet_embedding(g1, g2);
  std::vector<Word> s1 = enumerate_slice(g1, n).words;
  std::vector<Word> s2 = enumerate_slice(g2, n).words;
  for (Word& w : s2) {
    Word m;
    m.reserve(w.size());
    for (int a : w) m.push_back(embedding.at(a));
    w = std::move(m);
  }
  std::sort(s2.begin(), s2.end());

  NcPoly out;
  std::size_t i = 0, j = 0;
  while (i < s1.size() || j < s2.size()) {
    if (j == s2.size() || (i < s1.size() && s1[i] < s2[j])) {
      out += NcPoly::monomial(s1[i], 1);
      ++i;
    } else if (i == s1.size() || s2[j] < s1[i]) {
      out += NcPoly::monomial(s2[j], -1);
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace ueq
