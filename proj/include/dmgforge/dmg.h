#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dmgforge/dnd.h"
#include "dmgforge/grammar.h"

namespace dmgforge {

enum class NodeId : std::uint32_t {};

constexpr std::size_t index_of(NodeId id) { return static_cast<std::size_t>(id); }

struct DmgNode {
  /// Opaque identifier, kept stable through JSON export/import.
  std::string id;
  std::string label;
  SymbolType type;
  /// Set on 0-nodes that stand for a lexical nonterminal; the derived
  /// chains of such a node are its lexemes. Unset for terminals and for
  /// !/& nodes.
  std::optional<std::vector<std::string>> lexemes;

  bool is_terminal() const { return type == SymbolType::zero && !lexemes; }
  bool is_lexical() const { return type == SymbolType::zero && lexemes.has_value(); }
  bool operator==(const DmgNode&) const = default;
};

struct DmgEdge {
  NodeId from;
  NodeId to;
  /// 1-based position among the outgoing edges of `from`.
  int ordinal;

  bool operator==(const DmgEdge&) const = default;
};

/// Decision-making graph: one typed node per grammar symbol, ordered
/// outgoing edges. OR-nodes (!) branch to their alternatives, AND-nodes (&)
/// point at each symbol of their single right part, 0-nodes are leaves.
///
/// Immutable after construction. `from_parts` does not check the graph
/// invariants; run check_wellformed on anything that did not come from
/// build_dmg.
class Dmg {
 public:
  static Dmg from_parts(std::vector<DmgNode> nodes, std::vector<DmgEdge> edges, NodeId start);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<DmgNode>& nodes() const { return nodes_; }
  const std::vector<DmgEdge>& edges() const { return edges_; }
  const DmgNode& node(NodeId n) const { return nodes_.at(index_of(n)); }
  NodeId start() const { return start_; }

  /// Outgoing edges of `n`, sorted by ordinal.
  std::span<const DmgEdge> out_edges(NodeId n) const;
  /// Edge of `n` with the given ordinal, if any.
  std::optional<DmgEdge> out_edge(NodeId n, int ordinal) const;
  /// Incoming edges of `n`, in edge order.
  std::vector<DmgEdge> in_edges(NodeId n) const;

  std::optional<NodeId> find_label(std::string_view label) const;
  std::optional<NodeId> find_id(std::string_view id) const;

  bool operator==(const Dmg& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_ && start_ == other.start_;
  }

 private:
  std::vector<DmgNode> nodes_;
  // Sorted by (from, ordinal) so each node's out-edges are one contiguous run.
  std::vector<DmgEdge> edges_;
  std::vector<std::size_t> out_begin_;
  NodeId start_{};
  std::unordered_map<std::string, NodeId> by_label_;
  std::unordered_map<std::string, NodeId> by_id_;
};

/// Builds the graph: one node per symbol (in symbol-table order, ids "n0",
/// "n1", ...), OR-edges in rule order, AND-edges in right-part order.
/// Throws and_cycle when a cycle runs through AND-nodes only, and
/// invariant_violation if the result is not well formed.
Dmg build_dmg(const DndGrammar& d);

/// Parses, validates and reduces grammar text, then builds its graph.
Dmg build_dmg_from_source(std::string_view text);

/// One message per broken invariant; empty when the graph is well formed.
std::vector<std::string> check_wellformed(const Dmg& g);

std::string export_dot(const Dmg& g);

/// Canonical compact JSON: {"nodes":[...],"edges":[...],"start":label}.
std::string export_json(const Dmg& g);
/// Throws bad_json on malformed input. Does not check graph invariants.
Dmg import_json(std::string_view text);

}  // namespace dmgforge
