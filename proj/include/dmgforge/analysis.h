#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dmgforge/dmg.h"

namespace dmgforge {

/// A simple directed cycle as an edge path. labels[i] -> labels[i+1] (and
/// the last back to the first) runs along the edge with ordinals[i].
/// Starts at the lexicographically smallest label.
struct Cycle {
  std::vector<std::string> labels;
  std::vector<int> ordinals;

  auto operator<=>(const Cycle&) const = default;
};

/// Enumeration stops with cycle_explosion past this many cycles.
inline constexpr std::size_t kMaxCycles = 10'000;

/// Labels of nodes not reachable from the start node.
std::set<std::string> find_inaccessible(const Dmg& g);

/// Labels of nonterminal nodes that derive no terminal chain. A terminal is
/// productive, a lexical node iff it has a lexeme, an OR-node iff some child
/// is, an AND-node iff all children are.
std::set<std::string> find_useless(const Dmg& g);

/// Every simple cycle, sorted. Parallel edges give distinct cycles.
std::vector<Cycle> find_cycles(const Dmg& g, std::size_t limit = kMaxCycles);

/// The part of the graph reachable from `root`, started at `root`. Node ids
/// are kept. Throws no_such_symbol or not_a_nonterminal.
Dmg sublanguage(const Dmg& g, const std::string& root);

using Statistics = std::vector<std::pair<std::string, long long>>;

/// nodes, edges, and_nodes, or_nodes, zero_nodes, terminals,
/// lexical_nonterminals, max_out_degree, cycle_count (in that order).
Statistics statistics(const Dmg& g);

struct SublanguageRoot {
  std::string label;
  std::size_t size;  // nodes reachable from label, itself included
};

struct AnalysisReport {
  std::set<std::string> inaccessible;
  std::set<std::string> useless;
  std::vector<Cycle> cycles;
  Statistics stats;
  std::vector<SublanguageRoot> sublanguage_roots;
};

AnalysisReport analyze(const Dmg& g);

nlohmann::ordered_json to_json(const AnalysisReport& r);
nlohmann::ordered_json to_json(const Statistics& s);
std::string to_text(const AnalysisReport& r);

}  // namespace dmgforge
