#include "ueq/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace ueq {

namespace {

bool terminal_name(std::string_view s) {
  return !s.empty() && std::islower(static_cast<unsigned char>(s[0]));
}

bool nonterminal_name(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

bool symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Token {
  enum Kind { Symbol, Arrow, Pipe, Semi } kind;
  std::string text;
  int line, column;
};

// Tokens of one source line, comments stripped.
std::vector<Token> tokenize_line(const std::string& line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int col = static_cast<int>(i) + 1;
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({Token::Arrow, "->", line_no, col});
      i += 2;
    } else if (c == '|') {
      out.push_back({Token::Pipe, "|", line_no, col});
      ++i;
    } else if (c == ';') {
      out.push_back({Token::Semi, ";", line_no, col});
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && symbol_char(line[j])) ++j;
      out.push_back({Token::Symbol, line.substr(i, j - i), line_no, col});
      i = j;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'",
                       line_no, col);
    }
  }
  return out;
}

class SymbolRegistry {
public:
  explicit SymbolRegistry(Grammar& g) : g_(g) {}

  void note(const std::string& name) {
    if (!seen_.insert(name).second) return;
    if (terminal_name(name))
      g_.terminals.push_back(name);
    else
      g_.nonterminals.push_back(name);
  }

private:
  Grammar& g_;
  std::set<std::string> seen_;
};

}  // namespace

bool Grammar::is_terminal(std::string_view name) const {
  return std::find(terminals.begin(), terminals.end(), name) != terminals.end();
}

bool Grammar::is_nonterminal(std::string_view name) const {
  return std::find(nonterminals.begin(), nonterminals.end(), name) !=
         nonterminals.end();
}

bool Diagnostics::has_errors() const {
  return std::any_of(items.begin(), items.end(), [](const Diagnostic& d) {
    return d.severity == Severity::Error;
  });
}

int CnfGrammar::terminal_id(std::string_view name) const {
  auto it = std::find(terminals.begin(), terminals.end(), name);
  return it == terminals.end() ? -1
                               : static_cast<int>(it - terminals.begin());
}

int grammar_size(const CnfGrammar& g) {
  return static_cast<int>(g.binary_rules.size() + g.terminal_rules.size());
}

Grammar parse_grammar(std::string_view text) {
  Grammar g;
  SymbolRegistry registry(g);

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<Token> toks = tokenize_line(line, line_no);
    std::size_t pos = 0;
    while (pos < toks.size()) {
      if (toks[pos].kind == Token::Semi) {  // stray or trailing semicolon
        ++pos;
        continue;
      }
      // Lhs -> alt (| alt)*
      const Token& lhs_tok = toks[pos];
      if (lhs_tok.kind != Token::Symbol || !nonterminal_name(lhs_tok.text))
        throw ParseError("rule must start with a nonterminal (uppercase-initial)",
                         lhs_tok.line, lhs_tok.column);
      ++pos;
      if (pos >= toks.size() || toks[pos].kind != Token::Arrow)
        throw ParseError("expected '->' after rule left-hand side",
                         lhs_tok.line,
                         pos < toks.size() ? toks[pos].column
                                           : static_cast<int>(line.size()) + 1);
      ++pos;
      registry.note(lhs_tok.text);

      bool more_alternatives = true;
      while (more_alternatives) {
        std::vector<std::string> rhs;
        bool saw_eps = false;
        while (pos < toks.size() && toks[pos].kind == Token::Symbol) {
          if (toks[pos].text == "eps") {
            if (!rhs.empty())
              throw ParseError("'eps' must stand alone in an alternative",
                               toks[pos].line, toks[pos].column);
            saw_eps = true;
            ++pos;
            break;
          }
          rhs.push_back(toks[pos].text);
          ++pos;
        }
        if (saw_eps && pos < toks.size() && toks[pos].kind == Token::Symbol)
          throw ParseError("'eps' must stand alone in an alternative",
                           toks[pos].line, toks[pos].column);
        if (rhs.empty() && !saw_eps) {
          int col = pos < toks.size() ? toks[pos].column
                                      : static_cast<int>(line.size()) + 1;
          throw ParseError("empty alternative (use 'eps' for the empty word)",
                           line_no, col);
        }
        if (pos < toks.size() && toks[pos].kind == Token::Arrow)
          throw ParseError("unexpected '->' (missing ';' between rules?)",
                           toks[pos].line, toks[pos].column);
        for (const std::string& s : rhs) registry.note(s);
        g.rules.push_back({lhs_tok.text, std::move(rhs)});

        if (pos < toks.size() && toks[pos].kind == Token::Pipe) {
          ++pos;
        } else {
          more_alternatives = false;
          if (pos < toks.size() && toks[pos].kind == Token::Semi) ++pos;
        }
      }
    }
  }

  if (g.rules.empty()) throw ParseError("grammar contains no rules", 1, 1);
  g.start = g.rules.front().lhs;
  return g;
}

std::string render_grammar(const Grammar& g) {
  std::ostringstream out;
  for (const Rule& r : g.rules) {
    out << r.lhs << " ->";
    if (r.rhs.empty()) {
      out << " eps";
    } else {
      for (const std::string& s : r.rhs) out << ' ' << s;
    }
    out << '\n';
  }
  return out.str();
}

Diagnostics validate(const Grammar& g) {
  Diagnostics diags;
  auto error = [&](std::string msg) {
    diags.items.push_back({Severity::Error, std::move(msg), 0, 0});
  };
  auto warning = [&](std::string msg) {
    diags.items.push_back({Severity::Warning, std::move(msg), 0, 0});
  };

  std::set<std::string> terminals(g.terminals.begin(), g.terminals.end());
  std::set<std::string> nonterminals(g.nonterminals.begin(),
                                     g.nonterminals.end());

  if (!nonterminals.count(g.start))
    error("start symbol '" + g.start + "' is not a declared nonterminal");

  std::set<std::string> bad_symbols;
  for (const Rule& r : g.rules) {
    if (!nonterminals.count(r.lhs) && bad_symbols.insert(r.lhs).second)
      error("rule left-hand side '" + r.lhs + "' is not a declared nonterminal");
    for (const std::string& s : r.rhs)
      if (!terminals.count(s) && !nonterminals.count(s) &&
          bad_symbols.insert(s).second)
        error("symbol '" + s + "' is neither a terminal nor a nonterminal");
  }

  std::set<std::string> defined;
  for (const Rule& r : g.rules) defined.insert(r.lhs);
  for (const std::string& nt : g.nonterminals)
    if (!defined.count(nt)) error("undefined nonterminal '" + nt + "'");

  if (diags.has_errors()) return diags;

  // Reachability from the start symbol.
  std::set<std::string> reachable{g.start};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : g.rules) {
      if (!reachable.count(r.lhs)) continue;
      for (const std::string& s : r.rhs)
        if (nonterminals.count(s) && reachable.insert(s).second) changed = true;
    }
  }

  // Productivity: derives at least one terminal word.
  std::set<std::string> productive;
  changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : g.rules) {
      if (productive.count(r.lhs)) continue;
      bool all = std::all_of(r.rhs.begin(), r.rhs.end(),
                             [&](const std::string& s) {
                               return terminals.count(s) || productive.count(s);
                             });
      if (all) {
        productive.insert(r.lhs);
        changed = true;
      }
    }
  }

  for (const std::string& nt : g.nonterminals) {
    if (!reachable.count(nt)) warning("unreachable nonterminal '" + nt + "'");
    if (!productive.count(nt)) warning("unproductive nonterminal '" + nt + "'");
  }
  return diags;
}

namespace {

using SymRule = std::pair<std::string, std::vector<std::string>>;

class RuleList {
public:
  bool add(SymRule r) {
    if (!seen_.insert(r).second) return false;
    rules_.push_back(std::move(r));
    return true;
  }
  const std::vector<SymRule>& rules() const { return rules_; }

private:
  std::vector<SymRule> rules_;
  std::set<SymRule> seen_;
};

class FreshNames {
public:
  explicit FreshNames(const Grammar& g) {
    for (const std::string& s : g.nonterminals) used_.insert(s);
    for (const std::string& s : g.terminals) used_.insert(s);
  }

  // Deterministic: base name plus the smallest unused numeric suffix.
  std::string claim(const std::string& base) {
    if (used_.insert(base).second) return base;
    return claim_suffixed(base);
  }

  // Always suffixed: base1, base2, ... in claim order.
  std::string claim_suffixed(const std::string& base) {
    for (int k = 1;; ++k) {
      std::string candidate = base + std::to_string(k);
      if (used_.insert(candidate).second) return candidate;
    }
  }

private:
  std::set<std::string> used_;
};

std::string capitalized(const std::string& s) {
  std::string out = s;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace

CnfGrammar to_cnf(const Grammar& g) {
  {
    Diagnostics d = validate(g);
    if (d.has_errors())
      throw Error("to_cnf requires a grammar with no validation errors: " +
                  d.items.front().message);
  }
  std::set<std::string> terminal_set(g.terminals.begin(), g.terminals.end());
  auto is_term = [&](const std::string& s) { return terminal_set.count(s) > 0; };

  // Nullable nonterminals and the empty-word flag.
  std::set<std::string> nullable;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : g.rules) {
      if (nullable.count(r.lhs)) continue;
      bool all = std::all_of(r.rhs.begin(), r.rhs.end(),
                             [&](const std::string& s) {
                               return nullable.count(s) > 0;
                             });
      if (all) {
        nullable.insert(r.lhs);
        changed = true;
      }
    }
  }
  bool empty_word = nullable.count(g.start) > 0;

  // ε-elimination: every way of dropping nullable occurrences.
  RuleList no_eps;
  for (const Rule& r : g.rules) {
    std::vector<int> nullable_pos;
    for (int i = 0; i < static_cast<int>(r.rhs.size()); ++i)
      if (nullable.count(r.rhs[i])) nullable_pos.push_back(i);
    if (nullable_pos.size() > 20)
      throw GuardExceeded("ε-elimination would expand a rule with more than "
                          "2^20 variants");
    for (std::uint32_t mask = 0; mask < (1u << nullable_pos.size()); ++mask) {
      std::vector<std::string> rhs;
      std::size_t np = 0;
      for (int i = 0; i < static_cast<int>(r.rhs.size()); ++i) {
        bool drop = false;
        if (np < nullable_pos.size() && nullable_pos[np] == i) {
          drop = (mask >> np) & 1u;
          ++np;
        }
        if (!drop) rhs.push_back(r.rhs[i]);
      }
      if (!rhs.empty()) no_eps.add({r.lhs, std::move(rhs)});
    }
  }

  // Unit-rule elimination via unit closures.
  auto is_unit = [&](const SymRule& r) {
    return r.second.size() == 1 && !is_term(r.second[0]);
  };
  RuleList no_unit;
  for (const std::string& a : g.nonterminals) {
    std::vector<std::string> closure{a};
    std::set<std::string> in_closure{a};
    for (std::size_t i = 0; i < closure.size(); ++i)
      for (const SymRule& r : no_eps.rules())
        if (r.first == closure[i] && is_unit(r) &&
            in_closure.insert(r.second[0]).second)
          closure.push_back(r.second[0]);
    for (const std::string& b : closure)
      for (const SymRule& r : no_eps.rules())
        if (r.first == b && !is_unit(r)) no_unit.add({a, r.second});
  }

  // Terminal lifting inside long right-hand sides, then binarization.
  FreshNames fresh(g);
  std::map<std::string, std::string> lift;
  RuleList lifted;
  std::vector<SymRule> lift_rules;
  for (const SymRule& r : no_unit.rules()) {
    if (r.second.size() < 2) {
      lifted.add(r);
      continue;
    }
    std::vector<std::string> rhs;
    for (const std::string& s : r.second) {
      if (!is_term(s)) {
        rhs.push_back(s);
        continue;
      }
      auto it = lift.find(s);
      if (it == lift.end()) {
        std::string name = fresh.claim(capitalized(s));
        it = lift.emplace(s, name).first;
        lift_rules.push_back({name, {s}});
      }
      rhs.push_back(it->second);
    }
    lifted.add({r.first, std::move(rhs)});
  }
  for (SymRule& r : lift_rules) lifted.add(std::move(r));

  RuleList cnf_rules;
  for (const SymRule& r : lifted.rules()) {
    if (r.second.size() <= 2) {
      cnf_rules.add(r);
      continue;
    }
    std::vector<std::string> tail(r.second.begin(), r.second.end());
    std::string head = r.first;
    while (tail.size() > 2) {
      std::string cont = fresh.claim_suffixed(r.first);
      cnf_rules.add({head, {tail[0], cont}});
      tail.erase(tail.begin());
      head = cont;
    }
    cnf_rules.add({head, {tail[0], tail[1]}});
  }

  // Reduction: keep rules over productive symbols reachable from the start.
  std::set<std::string> productive;
  changed = true;
  while (changed) {
    changed = false;
    for (const SymRule& r : cnf_rules.rules()) {
      if (productive.count(r.first)) continue;
      bool ok = r.second.size() == 1
                    ? true
                    : productive.count(r.second[0]) &&
                          productive.count(r.second[1]);
      if (ok) {
        productive.insert(r.first);
        changed = true;
      }
    }
  }
  std::vector<SymRule> productive_rules;
  for (const SymRule& r : cnf_rules.rules()) {
    bool ok = productive.count(r.first) &&
              (r.second.size() == 1 || (productive.count(r.second[0]) &&
                                        productive.count(r.second[1])));
    if (ok) productive_rules.push_back(r);
  }

  std::set<std::string> reachable{g.start};
  changed = true;
  while (changed) {
    changed = false;
    for (const SymRule& r : productive_rules) {
      if (!reachable.count(r.first) || r.second.size() != 2) continue;
      if (reachable.insert(r.second[0]).second) changed = true;
      if (reachable.insert(r.second[1]).second) changed = true;
    }
  }

  CnfGrammar cnf;
  cnf.terminals = g.terminals;
  cnf.generates_empty_word = empty_word;
  std::map<std::string, int> nt_id;
  auto intern_nt = [&](const std::string& name) {
    auto it = nt_id.find(name);
    if (it != nt_id.end()) return it->second;
    int id = static_cast<int>(cnf.nonterminals.size());
    cnf.nonterminals.push_back(name);
    nt_id.emplace(name, id);
    return id;
  };
  cnf.start = intern_nt(g.start);
  std::map<std::string, int> term_id;
  for (int i = 0; i < static_cast<int>(cnf.terminals.size()); ++i)
    term_id.emplace(cnf.terminals[i], i);

  for (const SymRule& r : productive_rules) {
    if (!reachable.count(r.first)) continue;
    if (r.second.size() == 1) {
      cnf.terminal_rules.push_back(
          {intern_nt(r.first), term_id.at(r.second[0])});
    } else {
      cnf.binary_rules.push_back({intern_nt(r.first), intern_nt(r.second[0]),
                                  intern_nt(r.second[1])});
    }
  }
  return cnf;
}

Grammar cnf_to_grammar(const CnfGrammar& g) {
  Grammar out;
  out.terminals = g.terminals;
  out.nonterminals = g.nonterminals;
  out.start = g.nonterminals.empty() ? std::string("S")
                                     : g.nonterminals[g.start];

  // Rules with the start symbol on the left come first so that the rendered
  // text parses back with the same start symbol.
  auto emit = [&](bool start_only) {
    for (const auto& r : g.binary_rules)
      if ((r.lhs == g.start) == start_only)
        out.rules.push_back({g.nonterminals[r.lhs],
                             {g.nonterminals[r.left], g.nonterminals[r.right]}});
    for (const auto& r : g.terminal_rules)
      if ((r.lhs == g.start) == start_only)
        out.rules.push_back(
            {g.nonterminals[r.lhs], {g.terminals[r.terminal]}});
  };
  emit(true);
  emit(false);
  return out;
}

std::vector<int> alphabet_embedding(const CnfGrammar& first,
                                    const CnfGrammar& second) {
  std::vector<int> embedding(second.terminals.size(), -1);
  for (std::size_t j = 0; j < second.terminals.size(); ++j) {
    int id = first.terminal_id(second.terminals[j]);
    if (id < 0)
      throw AlphabetMismatch("letter '" + second.terminals[j] +
                             "' of the second grammar is not in the first "
                             "grammar's alphabet");
    embedding[j] = id;
  }
  return embedding;
}

}  // namespace ueq
