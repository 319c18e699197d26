#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "dmgforge/grammar.h"

namespace dmgforge {

/// Rules split by how many rules share their lhs: the non-deterministic zone
/// holds rules whose lhs heads two or more rules, the deterministic zone the
/// rest. Source order is kept inside each zone.
struct RulePartition {
  std::vector<Rule> znd;
  std::vector<Rule> zd;
};

enum class SymbolType { zero, and_, or_ };

/// "0", "&" or "!".
std::string_view type_glyph(SymbolType t);
/// Inverse of type_glyph; throws bad_json on anything else.
SymbolType parse_type_glyph(std::string_view s);

/// A grammar whose multi-rule nonterminals all have single-symbol
/// alternatives, together with the type of every symbol.
struct DndGrammar {
  Grammar grammar;
  std::map<SymbolId, SymbolType> types;
  /// Each generated nonterminal mapped to the original rule it was split from.
  std::map<SymbolId, Rule> fresh_names;

  SymbolType type(SymbolId s) const { return types.at(s); }
};

RulePartition partition_rules(const Grammar& g);

/// Splits every multi-rule alternative whose length is not 1 into B -> X and
/// X -> alpha, where X is the lhs name plus the smallest unused integer suffix.
/// Duplicate alternatives are dropped first. Throws identity_rule if the
/// grammar has an identity rule and bad_infinity if a single-rule nonterminal
/// occurs in its own right part.
DndGrammar reduce_to_dnd(const Grammar& g);

std::map<SymbolId, SymbolType> assign_types(const Grammar& g);

}  // namespace dmgforge
