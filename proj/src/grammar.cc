#include "dmgforge/grammar.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "dmgforge/error.h"

namespace dmgforge {

std::string_view errc_name(errc code) {
  switch (code) {
    case errc::syntax: return "SyntaxError";
    case errc::invalid_grammar: return "InvalidGrammar";
    case errc::identity_rule: return "IdentityRule";
    case errc::bad_infinity: return "BadInfinity";
    case errc::and_cycle: return "AndCycle";
    case errc::invariant_violation: return "InvariantViolation";
    case errc::no_such_node: return "NoSuchNode";
    case errc::not_a_frontier_leaf: return "NotAFrontierLeaf";
    case errc::not_or_node: return "NotOrNode";
    case errc::not_and_node: return "NotAndNode";
    case errc::no_such_ordinal: return "NoSuchOrdinal";
    case errc::not_lexical_leaf: return "NotLexicalLeaf";
    case errc::lexeme_not_allowed: return "LexemeNotAllowed";
    case errc::incomplete_atad: return "IncompleteAtad";
    case errc::no_such_symbol: return "NoSuchSymbol";
    case errc::not_a_nonterminal: return "NotANonterminal";
    case errc::cycle_explosion: return "CycleExplosion";
    case errc::bad_json: return "BadJson";
  }
  return "Error";
}

// ---------------------------------------------------------------------------
// Grammar

std::optional<SymbolId> Grammar::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t Grammar::rule_count(SymbolId nt) const {
  return static_cast<std::size_t>(
      std::count_if(rules_.begin(), rules_.end(), [nt](const Rule& r) { return r.lhs == nt; }));
}

bool Grammar::is_lexical(SymbolId id) const { return !is_terminal(id) && rule_count(id) == 0; }

const std::vector<std::string>& Grammar::lexemes(SymbolId id) const {
  static const std::vector<std::string> none;
  auto it = lexical_sets_.find(id);
  return it == lexical_sets_.end() ? none : it->second;
}

bool Grammar::operator==(const Grammar& other) const {
  return symbols_ == other.symbols_ && rules_ == other.rules_ && start_ == other.start_ &&
         lexical_sets_ == other.lexical_sets_;
}

// ---------------------------------------------------------------------------
// GrammarBuilder

SymbolId GrammarBuilder::symbol(std::string_view name, SymbolKind kind) {
  if (name.empty()) throw forge_error(errc::invalid_grammar, "empty symbol name");
  if (auto found = g_.find(name)) {
    if (g_.symbol(*found).kind != kind) {
      throw forge_error(errc::invalid_grammar,
                        "symbol '" + std::string(name) + "' used both as terminal and nonterminal");
    }
    return *found;
  }
  auto id = static_cast<SymbolId>(g_.symbols_.size());
  g_.symbols_.push_back({std::string(name), kind});
  g_.by_name_.emplace(std::string(name), id);
  return id;
}

GrammarBuilder& GrammarBuilder::rule(SymbolId lhs, std::vector<SymbolId> rhs) {
  if (g_.is_terminal(lhs)) {
    throw forge_error(errc::invalid_grammar, "terminal '" + g_.name(lhs) + "' on the left of a rule");
  }
  g_.rules_.push_back({lhs, std::move(rhs)});
  return *this;
}

GrammarBuilder& GrammarBuilder::start(SymbolId s) {
  if (g_.is_terminal(s)) throw forge_error(errc::invalid_grammar, "start symbol must be a nonterminal");
  g_.start_ = s;
  start_set_ = true;
  return *this;
}

GrammarBuilder& GrammarBuilder::lexemes(SymbolId nt, std::vector<std::string> values) {
  if (g_.is_terminal(nt)) {
    throw forge_error(errc::invalid_grammar, "lexemes declared for terminal '" + g_.name(nt) + "'");
  }
  g_.lexical_sets_[nt] = std::move(values);
  return *this;
}

GrammarBuilder& GrammarBuilder::set_rules(std::vector<Rule> rules) {
  g_.rules_ = std::move(rules);
  return *this;
}

Grammar GrammarBuilder::build() const {
  Grammar out = g_;
  if (!start_set_) {
    if (out.rules_.empty()) throw forge_error(errc::invalid_grammar, "grammar has no rules and no start symbol");
    out.start_ = out.rules_.front().lhs;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics

std::string_view severity_name(Severity s) {
  switch (s) {
    case Severity::info: return "INFO";
    case Severity::warning: return "WARNING";
    case Severity::error: return "ERROR";
  }
  return "?";
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::error; });
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { ident, string, arrow, bar, semi, eq, comma, directive, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t{Tok::end, {}, line_, col_};
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        t.text += advance();
      }
      t.kind = Tok::ident;
      return t;
    }
    if (c == '"') {
      advance();
      for (;;) {
        if (pos_ >= src_.size() || src_[pos_] == '\n') throw syntax_error(t.line, t.column, "unterminated string");
        char d = advance();
        if (d == '"') break;
        if (d == '\\') {
          if (pos_ >= src_.size()) throw syntax_error(t.line, t.column, "unterminated string");
          char e = advance();
          if (e != '"' && e != '\\') throw syntax_error(line_, col_ - 1, std::string("unknown escape \\") + e);
          d = e;
        }
        t.text += d;
      }
      t.kind = Tok::string;
      return t;
    }
    if (c == '%') {
      advance();
      while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
      if (t.text != "start" && t.text != "lexical") {
        throw syntax_error(t.line, t.column, "unknown directive %" + t.text);
      }
      t.kind = Tok::directive;
      return t;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      advance();
      advance();
      t.kind = Tok::arrow;
      return t;
    }
    advance();
    switch (c) {
      case '|': t.kind = Tok::bar; return t;
      case ';': t.kind = Tok::semi; return t;
      case '=': t.kind = Tok::eq; return t;
      case ',': t.kind = Tok::comma; return t;
      default: break;
    }
    throw syntax_error(t.line, t.column, std::string("unexpected character '") + c + "'");
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::ident: return "identifier '" + t.text + "'";
    case Tok::string: return "string \"" + t.text + "\"";
    case Tok::arrow: return "'->'";
    case Tok::bar: return "'|'";
    case Tok::semi: return "';'";
    case Tok::eq: return "'='";
    case Tok::comma: return "','";
    case Tok::directive: return "%" + t.text;
    case Tok::end: return "end of input";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  Grammar parse() {
    std::optional<Token> start_tok;
    std::set<std::string> lexical_declared;
    bool any_rule = false;
    while (tok_.kind != Tok::end) {
      if (tok_.kind == Tok::directive) {
        Token dir = take();
        if (dir.text == "start") {
          if (start_tok) throw syntax_error(dir.line, dir.column, "duplicate %start");
          Token name = expect(Tok::ident, "start symbol name");
          expect(Tok::semi, "';'");
          start_tok = name;
          guarded(name, [&] { b_.start(b_.nonterminal(name.text)); });
        } else {
          Token name = expect(Tok::ident, "lexical nonterminal name");
          if (!lexical_declared.insert(name.text).second) {
            throw syntax_error(name.line, name.column, "duplicate %lexical for " + name.text);
          }
          expect(Tok::eq, "'='");
          std::vector<std::string> values;
          values.push_back(expect(Tok::string, "lexeme string").text);
          while (tok_.kind == Tok::comma) {
            take();
            values.push_back(expect(Tok::string, "lexeme string").text);
          }
          expect(Tok::semi, "';'");
          guarded(name, [&] { b_.lexemes(b_.nonterminal(name.text), std::move(values)); });
        }
        continue;
      }
      Token lhs = expect(Tok::ident, "rule or directive");
      expect(Tok::arrow, "'->'");
      SymbolId lhs_id{};
      guarded(lhs, [&] { lhs_id = b_.nonterminal(lhs.text); });
      for (;;) {
        std::vector<SymbolId> rhs;
        while (tok_.kind == Tok::ident || tok_.kind == Tok::string) {
          Token s = take();
          if (s.kind == Tok::string && s.text.empty()) throw syntax_error(s.line, s.column, "empty terminal");
          guarded(s, [&] { rhs.push_back(s.kind == Tok::ident ? b_.nonterminal(s.text) : b_.terminal(s.text)); });
        }
        b_.rule(lhs_id, std::move(rhs));
        any_rule = true;
        if (tok_.kind == Tok::bar) {
          take();
          continue;
        }
        expect(Tok::semi, "'|' or ';'");
        break;
      }
    }
    if (!any_rule && !start_tok) throw syntax_error(tok_.line, tok_.column, "grammar has no rules");
    return b_.build();
  }

 private:
  Token take() {
    Token t = std::move(tok_);
    tok_ = lex_.next();
    return t;
  }

  Token expect(Tok kind, const char* what) {
    if (tok_.kind != kind) {
      throw syntax_error(tok_.line, tok_.column, std::string("expected ") + what + ", found " + describe(tok_));
    }
    return take();
  }

  // Re-raises builder errors with the position of the offending token.
  template <class F>
  void guarded(const Token& at, F&& f) {
    try {
      f();
    } catch (const syntax_error&) {
      throw;
    } catch (const forge_error& e) {
      throw syntax_error(at.line, at.column, e.what());
    }
  }

  Lexer lex_;
  Token tok_;
  GrammarBuilder b_;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string spell(const Grammar& g, SymbolId id) { return g.is_terminal(id) ? quote(g.name(id)) : g.name(id); }

}  // namespace

Grammar parse_grammar(std::string_view text) { return Parser(text).parse(); }

std::string render_grammar(const Grammar& g) {
  std::ostringstream out;
  const auto& rules = g.rules();
  bool start_is_default = !rules.empty() && rules.front().lhs == g.start();
  if (!start_is_default) out << "%start " << g.name(g.start()) << " ;\n";
  for (const auto& [nt, values] : g.lexical_sets()) {
    out << "%lexical " << g.name(nt) << " =";
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ", " : " ") << quote(values[i]);
    out << " ;\n";
  }
  for (std::size_t i = 0; i < rules.size(); ++i) {
    bool continues = i > 0 && rules[i - 1].lhs == rules[i].lhs;
    out << (continues ? " |" : g.name(rules[i].lhs) + " ->");
    for (SymbolId s : rules[i].rhs) out << ' ' << spell(g, s);
    if (i + 1 == rules.size() || rules[i + 1].lhs != rules[i].lhs) out << " ;\n";
  }
  return out.str();
}

std::vector<Diagnostic> validate(const Grammar& g) {
  std::vector<Diagnostic> out;
  const auto& rules = g.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    if (r.rhs.size() == 1 && r.rhs[0] == r.lhs) {
      out.push_back({Severity::error, "identity rule " + g.name(r.lhs) + " -> " + g.name(r.lhs), g.name(r.lhs)});
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (rules[j] == r) {
        out.push_back({Severity::warning, "duplicate alternative for " + g.name(r.lhs) + " dropped", g.name(r.lhs)});
        break;
      }
    }
  }
  for (std::size_t i = 0; i < g.symbols().size(); ++i) {
    auto id = static_cast<SymbolId>(i);
    if (g.is_terminal(id)) continue;
    bool has_lexemes = g.lexical_sets().count(id) > 0;
    if (g.rule_count(id) == 0) {
      out.push_back({Severity::info, g.name(id) + " is a lexical nonterminal", g.name(id)});
      if (g.lexemes(id).empty()) {
        out.push_back({Severity::warning, "lexical nonterminal " + g.name(id) + " has an empty lexeme set", g.name(id)});
      }
    } else if (has_lexemes) {
      out.push_back({Severity::error, "lexemes declared for " + g.name(id) + ", which has rules", g.name(id)});
    }
  }
  return out;
}

Grammar dedupe_rules(const Grammar& g) {
  std::vector<Rule> kept;
  for (const Rule& r : g.rules()) {
    if (std::find(kept.begin(), kept.end(), r) == kept.end()) kept.push_back(r);
  }
  if (kept.size() == g.rules().size()) return g;
  return GrammarBuilder(g).set_rules(std::move(kept)).build();
}

}  // namespace dmgforge
