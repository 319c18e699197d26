#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dmgforge {

enum class SymbolId : std::uint32_t {};

constexpr std::size_t index_of(SymbolId id) { return static_cast<std::size_t>(id); }

enum class SymbolKind { terminal, nonterminal };

struct Symbol {
  std::string name;
  SymbolKind kind;

  bool operator==(const Symbol&) const = default;
};

/// lhs -> rhs; an empty rhs is the empty chain.
struct Rule {
  SymbolId lhs;
  std::vector<SymbolId> rhs;

  bool operator==(const Rule&) const = default;
};

/// A context-free grammar: symbol table, ordered rules, start symbol and the
/// finite lexeme sets of lexical nonterminals (nonterminals without rules).
///
/// Symbols are numbered in order of first appearance. Values are immutable
/// once built; use GrammarBuilder to make one.
class Grammar {
 public:
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const std::vector<Rule>& rules() const { return rules_; }
  SymbolId start() const { return start_; }
  const std::map<SymbolId, std::vector<std::string>>& lexical_sets() const { return lexical_sets_; }

  const Symbol& symbol(SymbolId id) const { return symbols_.at(index_of(id)); }
  const std::string& name(SymbolId id) const { return symbol(id).name; }
  bool is_terminal(SymbolId id) const { return symbol(id).kind == SymbolKind::terminal; }
  std::optional<SymbolId> find(std::string_view name) const;

  /// Number of rules whose lhs is `nt`.
  std::size_t rule_count(SymbolId nt) const;
  /// Nonterminal with no rule on its lhs.
  bool is_lexical(SymbolId id) const;
  /// Lexemes declared for `id`; empty when none were declared.
  const std::vector<std::string>& lexemes(SymbolId id) const;

  bool operator==(const Grammar& other) const;

 private:
  friend class GrammarBuilder;

  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
  std::vector<Rule> rules_;
  SymbolId start_{};
  std::map<SymbolId, std::vector<std::string>> lexical_sets_;
};

class GrammarBuilder {
 public:
  GrammarBuilder() = default;
  /// Starts from an existing grammar (symbols, rules, start and lexemes copied).
  explicit GrammarBuilder(const Grammar& base) : g_(base), start_set_(true) {}

  /// Returns the id of `name`, creating the symbol if needed. Throws
  /// invalid_grammar when the name exists with the other kind.
  SymbolId symbol(std::string_view name, SymbolKind kind);
  SymbolId terminal(std::string_view name) { return symbol(name, SymbolKind::terminal); }
  SymbolId nonterminal(std::string_view name) { return symbol(name, SymbolKind::nonterminal); }
  bool has_symbol(std::string_view name) const { return g_.find(name).has_value(); }

  GrammarBuilder& rule(SymbolId lhs, std::vector<SymbolId> rhs);
  GrammarBuilder& start(SymbolId s);
  GrammarBuilder& lexemes(SymbolId nt, std::vector<std::string> values);
  /// Replaces the whole rule list, keeping the symbol table.
  GrammarBuilder& set_rules(std::vector<Rule> rules);

  /// Start defaults to the lhs of the first rule. Throws invalid_grammar when
  /// there is neither a rule nor an explicit start.
  Grammar build() const;

 private:
  Grammar g_;
  bool start_set_ = false;
};

enum class Severity { info, warning, error };

struct Diagnostic {
  Severity severity;
  std::string message;
  /// Symbol the finding is about, when there is one.
  std::string symbol;
};

std::string_view severity_name(Severity s);
bool has_errors(const std::vector<Diagnostic>& diags);

/// Parses the line-oriented grammar format:
///
///   # comment
///   %start S ;
///   %lexical Id = "x", "y" ;
///   S -> "a" S "c" | B ;
///   B -> ;                       # empty alternative is epsilon
///
/// Throws syntax_error (with line/column) on malformed input.
Grammar parse_grammar(std::string_view text);

/// Renders a grammar back to the source format. Consecutive rules sharing an
/// lhs are joined on one line, so reparsing yields the same rule order.
std::string render_grammar(const Grammar& g);

/// Checks the preconditions a grammar must meet before reduction:
/// identity rules (error), lexical nonterminals (info), empty lexeme sets
/// (warning), duplicate alternatives (warning), lexemes declared for a
/// nonterminal that has rules (error).
std::vector<Diagnostic> validate(const Grammar& g);

/// Copy of `g` with repeated identical rules dropped (first occurrence kept).
Grammar dedupe_rules(const Grammar& g);

}  // namespace dmgforge
