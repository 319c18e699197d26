#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dmgforge {

enum class errc {
  syntax,
  invalid_grammar,
  identity_rule,
  bad_infinity,
  and_cycle,
  invariant_violation,
  no_such_node,
  not_a_frontier_leaf,
  not_or_node,
  not_and_node,
  no_such_ordinal,
  not_lexical_leaf,
  lexeme_not_allowed,
  incomplete_atad,
  no_such_symbol,
  not_a_nonterminal,
  cycle_explosion,
  bad_json,
};

std::string_view errc_name(errc code);

/// Every failure raised by the library carries one of the codes above so
/// callers (CLI, HTTP layer) can map it to an exit code or status.
class forge_error : public std::runtime_error {
 public:
  forge_error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

class syntax_error : public forge_error {
 public:
  syntax_error(int line, int column, const std::string& message)
      : forge_error(errc::syntax, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace dmgforge
