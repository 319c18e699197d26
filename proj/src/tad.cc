#include "dmgforge/tad.h"

#include <algorithm>

#include "dmgforge/error.h"

namespace dmgforge {

std::string_view state_name(AtadState s) {
  switch (s) {
    case AtadState::pending_choice: return "pending_choice";
    case AtadState::pending_expand: return "pending_expand";
    case AtadState::expanded: return "expanded";
    case AtadState::leaf0: return "leaf0";
    case AtadState::leaf_epsilon: return "leaf_epsilon";
    case AtadState::lexeme_pending: return "lexeme_pending";
    case AtadState::lexeme_filled: return "lexeme_filled";
  }
  return "?";
}

namespace {

AtadState initial_state(const DmgNode& n) {
  switch (n.type) {
    case SymbolType::or_: return AtadState::pending_choice;
    case SymbolType::and_: return AtadState::pending_expand;
    case SymbolType::zero: return n.is_lexical() ? AtadState::lexeme_pending : AtadState::leaf0;
  }
  return AtadState::leaf0;
}

bool is_pending(AtadState s) {
  return s == AtadState::pending_choice || s == AtadState::pending_expand || s == AtadState::lexeme_pending;
}

std::string id_text(AtadNodeId id) { return std::to_string(index_of(id)); }

// Shared precondition: `leaf` exists and has no children yet.
const AtadNode& frontier_leaf(const Atad& t, AtadNodeId leaf) {
  if (!t.contains(leaf)) throw forge_error(errc::no_such_node, "no node " + id_text(leaf) + " in the tree");
  const AtadNode& n = t.node(leaf);
  if (!is_pending(n.state)) {
    throw forge_error(errc::not_a_frontier_leaf, "node " + id_text(leaf) + " (" + n.label + ") is not a pending leaf");
  }
  return n;
}

template <class Visit>
void walk(const Atad& t, AtadNodeId from, Visit&& visit) {
  std::vector<AtadNodeId> stack{from};
  while (!stack.empty()) {
    AtadNodeId id = stack.back();
    stack.pop_back();
    const AtadNode& n = t.node(id);
    visit(n);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
}

}  // namespace

const AtadNode& Atad::node(AtadNodeId id) const {
  if (!contains(id)) throw forge_error(errc::no_such_node, "no node " + id_text(id) + " in the tree");
  return nodes_[index_of(id)];
}

std::vector<AtadNodeId> Atad::leaves() const {
  std::vector<AtadNodeId> out;
  walk(*this, root().id, [&](const AtadNode& n) {
    if (n.children.empty()) out.push_back(n.id);
  });
  return out;
}

std::vector<AtadNodeId> Atad::pending() const {
  std::vector<AtadNodeId> out;
  walk(*this, root().id, [&](const AtadNode& n) {
    if (is_pending(n.state)) out.push_back(n.id);
  });
  return out;
}

AtadNodeId Atad::add_child(AtadNodeId parent, const DmgEdge& via) {
  const DmgNode& target = dmg_->node(via.to);
  auto id = static_cast<AtadNodeId>(nodes_.size());
  nodes_.push_back({id, target.label, via.to, initial_state(target), std::nullopt, parent, via.ordinal, {}});
  nodes_[index_of(parent)].children.push_back(id);
  return id;
}

Atad new_atad(std::shared_ptr<const Dmg> g) {
  Atad t;
  const DmgNode& s = g->node(g->start());
  t.nodes_.push_back({AtadNodeId{0}, s.label, g->start(), initial_state(s), std::nullopt, std::nullopt, 0, {}});
  t.dmg_ = std::move(g);
  return t;
}

Atad choose(const Atad& t, AtadNodeId leaf, int ordinal) {
  const AtadNode& n = frontier_leaf(t, leaf);
  if (n.state != AtadState::pending_choice) {
    throw forge_error(errc::not_or_node, "node " + id_text(leaf) + " (" + n.label + ") is not an OR-node");
  }
  auto edge = t.dmg().out_edge(n.dmg_ref, ordinal);
  if (!edge) {
    throw forge_error(errc::no_such_ordinal,
                      "OR-node " + n.label + " has no alternative " + std::to_string(ordinal));
  }
  Atad out = t;
  out.nodes_[index_of(leaf)].state = AtadState::expanded;
  out.add_child(leaf, *edge);
  return out;
}

void Atad::expand_in_place(AtadNodeId leaf) {
  auto edges = dmg_->out_edges(nodes_[index_of(leaf)].dmg_ref);
  nodes_[index_of(leaf)].state = edges.empty() ? AtadState::leaf_epsilon : AtadState::expanded;
  for (const DmgEdge& e : edges) add_child(leaf, e);
}

Atad expand_and(const Atad& t, AtadNodeId leaf) {
  const AtadNode& n = frontier_leaf(t, leaf);
  if (n.state != AtadState::pending_expand) {
    throw forge_error(errc::not_and_node, "node " + id_text(leaf) + " (" + n.label + ") is not an AND-node");
  }
  Atad out = t;
  out.expand_in_place(leaf);
  return out;
}

Atad auto_expand(const Atad& t) {
  Atad out = t;
  // New nodes are appended, so one forward scan reaches every descendant.
  for (std::size_t i = 0; i < out.nodes_.size(); ++i) {
    if (out.nodes_[i].state == AtadState::pending_expand) out.expand_in_place(static_cast<AtadNodeId>(i));
  }
  return out;
}

Atad set_lexeme(const Atad& t, AtadNodeId leaf, const std::string& value) {
  if (!t.contains(leaf)) throw forge_error(errc::no_such_node, "no node " + id_text(leaf) + " in the tree");
  const AtadNode& n = t.node(leaf);
  if (n.state != AtadState::lexeme_pending) {
    throw forge_error(errc::not_lexical_leaf,
                      "node " + id_text(leaf) + " (" + n.label + ") is not a pending lexical leaf");
  }
  const auto& allowed = *t.dmg().node(n.dmg_ref).lexemes;
  if (std::find(allowed.begin(), allowed.end(), value) == allowed.end()) {
    throw forge_error(errc::lexeme_not_allowed, "'" + value + "' is not a lexeme of " + n.label);
  }
  Atad out = t;
  out.nodes_[index_of(leaf)].state = AtadState::lexeme_filled;
  out.nodes_[index_of(leaf)].lexeme = value;
  return out;
}

Tad finalize(const Atad& t) {
  auto pending = t.pending();
  if (!pending.empty()) {
    std::string ids;
    for (AtadNodeId id : pending) ids += (ids.empty() ? "" : ", ") + id_text(id) + " (" + t.node(id).label + ")";
    throw forge_error(errc::incomplete_atad, "pending nodes remain: " + ids);
  }
  return Tad(t);
}

Chain crone(const Tad& t) { return partial_crone(t.atad()); }

Chain partial_crone(const Atad& t) {
  Chain out;
  for (AtadNodeId id : t.leaves()) {
    const AtadNode& n = t.node(id);
    switch (n.state) {
      case AtadState::leaf0: out.push_back(n.label); break;
      case AtadState::lexeme_filled: out.push_back(*n.lexeme); break;
      case AtadState::leaf_epsilon: break;
      case AtadState::pending_choice:
      case AtadState::pending_expand:
      case AtadState::lexeme_pending: out.push_back("⟨" + n.label + "⟩"); break;
      case AtadState::expanded: break;
    }
  }
  return out;
}

namespace {

nlohmann::ordered_json node_json(const Atad& t, const AtadNode& n) {
  nlohmann::ordered_json j;
  j["id"] = index_of(n.id);
  j["label"] = n.label;
  j["state"] = std::string(state_name(n.state));
  if (n.lexeme) j["lexeme"] = *n.lexeme;
  auto children = nlohmann::ordered_json::array();
  for (AtadNodeId c : n.children) {
    const AtadNode& child = t.node(c);
    nlohmann::ordered_json edge;
    edge["ordinal"] = child.ordinal;
    edge["node"] = node_json(t, child);
    children.push_back(std::move(edge));
  }
  j["children"] = std::move(children);
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const Atad& t) { return node_json(t, t.root()); }

}  // namespace dmgforge
