#pragma once

#include <cstddef>
#include <set>

#include "dmgforge/chain.h"
#include "dmgforge/dmg.h"
#include "dmgforge/grammar.h"

namespace dmgforge {

/// All chains of at most `bound` items from some node or grammar.
struct LanguageSample {
  std::size_t bound = 0;
  std::set<Chain> chains;

  bool operator==(const LanguageSample&) const = default;
};

/// Chains ordered by length, then item by item.
std::vector<Chain> sorted_by_length(const LanguageSample& s);

/// How the per-node fixpoint is iterated. `parallel` recomputes every node
/// from the previous round's tables (OpenMP over nodes); `serial` updates the
/// tables in place, one node at a time, and is kept as the reference.
enum class Kernel { parallel, serial };

/// Chains of length <= bound derivable from `node`: a terminal yields itself,
/// a lexical node each of its lexemes, an OR-node the union over its
/// children, an AND-node the concatenations of its children's chains in
/// ordinal order (epsilon when it has no edges).
LanguageSample derive_from(const Dmg& g, NodeId node, std::size_t bound, Kernel kernel = Kernel::parallel);

LanguageSample language(const Dmg& g, std::size_t bound, Kernel kernel = Kernel::parallel);

/// Independent check: breadth-first leftmost derivation over sentential
/// forms of the original grammar. Nullable symbols may be dropped when a rule
/// is applied, so every kept symbol yields at least one item and forms longer
/// than `bound` can be pruned.
LanguageSample oracle_enumerate(const Grammar& g, std::size_t bound);

}  // namespace dmgforge
