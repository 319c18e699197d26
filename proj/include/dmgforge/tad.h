#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dmgforge/chain.h"
#include "dmgforge/dmg.h"

namespace dmgforge {

enum class AtadNodeId : std::uint32_t {};

constexpr std::size_t index_of(AtadNodeId id) { return static_cast<std::size_t>(id); }

enum class AtadState {
  pending_choice,  // OR-node leaf, no alternative chosen yet
  pending_expand,  // AND-node leaf, children not yet created
  expanded,
  leaf0,           // terminal
  leaf_epsilon,    // AND-node with an empty right part
  lexeme_pending,  // lexical nonterminal, no lexeme chosen yet
  lexeme_filled,
};

std::string_view state_name(AtadState s);

struct AtadNode {
  AtadNodeId id;
  std::string label;
  NodeId dmg_ref;
  AtadState state;
  std::optional<std::string> lexeme;
  std::optional<AtadNodeId> parent;
  /// Number of the DMG edge this node was created through; 0 at the root.
  int ordinal = 0;
  std::vector<AtadNodeId> children;

  bool operator==(const AtadNode&) const = default;
};

/// A partially grown tree of decisions over a DMG. Node ids are assigned in
/// creation order, so replaying the same actions gives the same ids.
///
/// Operations below return a new tree and leave their argument untouched.
class Atad {
 public:
  const Dmg& dmg() const { return *dmg_; }
  std::shared_ptr<const Dmg> dmg_ptr() const { return dmg_; }

  const AtadNode& root() const { return nodes_.front(); }
  const AtadNode& node(AtadNodeId id) const;
  bool contains(AtadNodeId id) const { return index_of(id) < nodes_.size(); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<AtadNode>& nodes() const { return nodes_; }

  /// All leaves, left to right.
  std::vector<AtadNodeId> leaves() const;
  /// Leaves that still need an action (choice, expansion or lexeme), left to right.
  std::vector<AtadNodeId> pending() const;

  bool operator==(const Atad& other) const { return dmg_ == other.dmg_ && nodes_ == other.nodes_; }

 private:
  friend Atad new_atad(std::shared_ptr<const Dmg> g);
  friend Atad choose(const Atad& t, AtadNodeId leaf, int ordinal);
  friend Atad expand_and(const Atad& t, AtadNodeId leaf);
  friend Atad auto_expand(const Atad& t);
  friend Atad set_lexeme(const Atad& t, AtadNodeId leaf, const std::string& value);

  AtadNodeId add_child(AtadNodeId parent, const DmgEdge& via);
  void expand_in_place(AtadNodeId leaf);

  std::shared_ptr<const Dmg> dmg_;
  std::vector<AtadNode> nodes_;
};

/// A finished tree: every leaf is a terminal, a filled lexeme or an empty AND-node.
class Tad {
 public:
  const Atad& atad() const { return atad_; }

 private:
  friend Tad finalize(const Atad& t);
  explicit Tad(Atad t) : atad_(std::move(t)) {}
  Atad atad_;
};

Atad new_atad(std::shared_ptr<const Dmg> g);
/// Grows a pending OR-leaf along its DMG edge `ordinal`.
Atad choose(const Atad& t, AtadNodeId leaf, int ordinal);
/// Creates a child for every outgoing DMG edge of a pending AND-leaf.
Atad expand_and(const Atad& t, AtadNodeId leaf);
/// expand_and until no AND-leaf is pending. Terminates on any graph accepted by
/// build_dmg because AND-only cycles are rejected there.
Atad auto_expand(const Atad& t);
Atad set_lexeme(const Atad& t, AtadNodeId leaf, const std::string& value);
/// Throws incomplete_atad listing the pending node ids.
Tad finalize(const Atad& t);

/// Leaf chain of a finished tree; empty AND-nodes contribute nothing.
Chain crone(const Tad& t);
/// Leaf chain of an unfinished tree with "⟨Label⟩" in place of pending leaves.
Chain partial_crone(const Atad& t);

/// {"id","label","state",["lexeme"],"children":[{"ordinal","node"}]}
nlohmann::ordered_json to_json(const Atad& t);

}  // namespace dmgforge
