// Internal representation shared by the two fixpoint kernels.
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dmgforge/dmg.h"

namespace dmgforge::detail {

using ItemChain = std::vector<std::int32_t>;

struct ItemChainHash {
  std::size_t operator()(const ItemChain& c) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (std::int32_t x : c) h = (h ^ static_cast<std::uint32_t>(x)) * 1099511628211ull;
    return h;
  }
};

/// Chains of one node, bucketed by length 0..bound.
struct NodeLanguage {
  std::vector<std::unordered_set<ItemChain, ItemChainHash>> by_length;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& b : by_length) n += b.size();
    return n;
  }
};

/// The subgraph reachable from one node, with items interned.
class LanguageProblem {
 public:
  LanguageProblem(const Dmg& g, NodeId root, std::size_t bound);

  std::size_t bound() const { return bound_; }
  const Dmg& graph() const { return g_; }
  /// Nodes reachable from the root, root first.
  const std::vector<NodeId>& scope() const { return scope_; }
  /// Position of a node in scope().
  std::size_t slot(NodeId n) const { return slot_.at(index_of(n)); }
  const std::string& item(std::int32_t id) const { return items_[static_cast<std::size_t>(id)]; }

  NodeLanguage empty_language() const { return NodeLanguage{std::vector<std::unordered_set<ItemChain, ItemChainHash>>(bound_ + 1)}; }

  /// One application of the derivation rules to node scope()[slot], reading
  /// the children's current tables.
  NodeLanguage evaluate(std::size_t slot, const std::vector<NodeLanguage>& tables) const;

 private:
  const Dmg& g_;
  std::size_t bound_;
  std::vector<NodeId> scope_;
  std::vector<std::size_t> slot_;
  std::vector<std::string> items_;
  // Item ids of each 0-node in scope (its label, or its lexemes).
  std::vector<std::vector<std::int32_t>> leaf_items_;
};

void fixpoint_serial(const LanguageProblem& p, std::vector<NodeLanguage>& tables);
void fixpoint_parallel(const LanguageProblem& p, std::vector<NodeLanguage>& tables);

}  // namespace dmgforge::detail
