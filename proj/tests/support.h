// Test-only helpers: fixtures, a random grammar corpus and a random driver
// for decision trees. Nothing here calls the language kernels, so it can be
// used to check them.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dmgforge/dmg.h"
#include "dmgforge/grammar.h"
#include "dmgforge/tad.h"

namespace testsupport {

inline constexpr const char* kExample1 = R"(S -> "a" S "c" | B ; B -> "b" B "c" | ;)";
inline constexpr const char* kExample2 = R"(S -> S "+" S | "1" | "a" ;)";

std::string fixture(const std::string& name);
std::string golden(const std::string& name);

struct CorpusEntry {
  std::string name;
  std::string source;
  dmgforge::Grammar grammar;
  std::shared_ptr<const dmgforge::Dmg> dmg;
};

CorpusEntry make_entry(const std::string& name, const std::string& source);

/// Random grammar text: 1..6 nonterminals (one may be lexical), 1..3
/// alternatives each, right parts of 0..4 symbols over terminals a, b, c.
std::string random_grammar_source(std::mt19937& rng);

/// Examples 1 and 2 followed by `count` random grammars that reduce and
/// build cleanly and whose start symbol derives something within `max_len`.
std::vector<CorpusEntry> corpus(std::size_t count, std::uint32_t seed, std::size_t max_len = 8);

/// Length of the shortest chain each node derives, or nullopt when it
/// derives none. Computed directly over the graph.
std::vector<std::optional<std::size_t>> shortest_lengths(const dmgforge::Dmg& g);

/// Grows a finished tree with random choices and lexemes, addressing
/// pending leaves in random order, keeping the shortest reachable crone
/// within `max_len`. Requires that the start node can derive such a chain.
dmgforge::Tad random_tad(const std::shared_ptr<const dmgforge::Dmg>& g, std::mt19937& rng, std::size_t max_len);

/// Canonical JSON with every OR-node's edge ordinals shuffled.
std::string permute_or_edges(const std::string& dmg_json, std::mt19937& rng);
/// Canonical JSON with every !/& label replaced by a fresh unique name.
std::string rename_inner_labels(const std::string& dmg_json);

}  // namespace testsupport
