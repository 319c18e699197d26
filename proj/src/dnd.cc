#include "dmgforge/dnd.h"

#include <algorithm>
#include <string>

#include "dmgforge/error.h"

namespace dmgforge {

std::string_view type_glyph(SymbolType t) {
  switch (t) {
    case SymbolType::zero: return "0";
    case SymbolType::and_: return "&";
    case SymbolType::or_: return "!";
  }
  return "?";
}

SymbolType parse_type_glyph(std::string_view s) {
  if (s == "0") return SymbolType::zero;
  if (s == "&") return SymbolType::and_;
  if (s == "!") return SymbolType::or_;
  throw forge_error(errc::bad_json, "unknown node type '" + std::string(s) + "'");
}

namespace {

std::vector<std::size_t> lhs_counts(const Grammar& g) {
  std::vector<std::size_t> counts(g.symbols().size(), 0);
  for (const Rule& r : g.rules()) ++counts[index_of(r.lhs)];
  return counts;
}

std::string fresh_name(const GrammarBuilder& b, const std::string& base) {
  for (unsigned long n = 1;; ++n) {
    std::string candidate = base + std::to_string(n);
    if (!b.has_symbol(candidate)) return candidate;
  }
}

}  // namespace

RulePartition partition_rules(const Grammar& g) {
  Grammar clean = dedupe_rules(g);
  auto counts = lhs_counts(clean);
  RulePartition p;
  for (const Rule& r : clean.rules()) (counts[index_of(r.lhs)] >= 2 ? p.znd : p.zd).push_back(r);
  return p;
}

std::map<SymbolId, SymbolType> assign_types(const Grammar& g) {
  auto counts = lhs_counts(g);
  std::map<SymbolId, SymbolType> types;
  for (std::size_t i = 0; i < g.symbols().size(); ++i) {
    auto id = static_cast<SymbolId>(i);
    SymbolType t = SymbolType::zero;
    if (!g.is_terminal(id)) {
      if (counts[i] >= 2) {
        t = SymbolType::or_;
      } else if (counts[i] == 1) {
        t = SymbolType::and_;
      }
    }
    types.emplace(id, t);
  }
  return types;
}

DndGrammar reduce_to_dnd(const Grammar& input) {
  for (const Rule& r : input.rules()) {
    if (r.rhs.size() == 1 && r.rhs[0] == r.lhs) {
      throw forge_error(errc::identity_rule, "identity rule " + input.name(r.lhs) + " -> " + input.name(r.lhs));
    }
  }
  Grammar g = dedupe_rules(input);
  auto counts = lhs_counts(g);

  GrammarBuilder b(g);
  std::vector<Rule> rules;
  std::vector<Rule> appended;
  std::map<SymbolId, Rule> fresh;
  for (const Rule& r : g.rules()) {
    if (counts[index_of(r.lhs)] < 2 || r.rhs.size() == 1) {
      rules.push_back(r);
      continue;
    }
    SymbolId x = b.nonterminal(fresh_name(b, g.name(r.lhs)));
    rules.push_back({r.lhs, {x}});
    appended.push_back({x, r.rhs});
    fresh.emplace(x, r);
  }
  rules.insert(rules.end(), appended.begin(), appended.end());
  b.set_rules(std::move(rules));

  DndGrammar out{b.build(), {}, std::move(fresh)};
  out.types = assign_types(out.grammar);

  for (const Rule& r : out.grammar.rules()) {
    if (out.type(r.lhs) != SymbolType::and_) continue;
    if (std::find(r.rhs.begin(), r.rhs.end(), r.lhs) != r.rhs.end()) {
      std::string text = out.grammar.name(r.lhs) + " ->";
      for (SymbolId s : r.rhs) text += " " + out.grammar.name(s);
      throw forge_error(errc::bad_infinity, "non-terminating single rule " + text);
    }
  }
  return out;
}

}  // namespace dmgforge
