#include "dmgforge/dmg.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dmgforge/error.h"

namespace dmgforge {

using ordered_json = nlohmann::ordered_json;

Dmg Dmg::from_parts(std::vector<DmgNode> nodes, std::vector<DmgEdge> edges, NodeId start) {
  Dmg g;
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  g.start_ = start;
  std::stable_sort(g.edges_.begin(), g.edges_.end(), [](const DmgEdge& a, const DmgEdge& b) {
    return a.from != b.from ? a.from < b.from : a.ordinal < b.ordinal;
  });
  g.out_begin_.assign(g.nodes_.size() + 1, 0);
  for (std::size_t n = 0, e = 0; n <= g.nodes_.size(); ++n) {
    while (e < g.edges_.size() && index_of(g.edges_[e].from) < n) ++e;
    g.out_begin_[n] = e;
  }
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
    g.by_label_.emplace(g.nodes_[i].label, static_cast<NodeId>(i));
    g.by_id_.emplace(g.nodes_[i].id, static_cast<NodeId>(i));
  }
  return g;
}

std::span<const DmgEdge> Dmg::out_edges(NodeId n) const {
  std::size_t i = index_of(n);
  if (i >= nodes_.size()) return {};
  return std::span<const DmgEdge>(edges_).subspan(out_begin_[i], out_begin_[i + 1] - out_begin_[i]);
}

std::optional<DmgEdge> Dmg::out_edge(NodeId n, int ordinal) const {
  for (const DmgEdge& e : out_edges(n)) {
    if (e.ordinal == ordinal) return e;
  }
  return std::nullopt;
}

std::vector<DmgEdge> Dmg::in_edges(NodeId n) const {
  std::vector<DmgEdge> out;
  std::copy_if(edges_.begin(), edges_.end(), std::back_inserter(out), [n](const DmgEdge& e) { return e.to == n; });
  return out;
}

std::optional<NodeId> Dmg::find_label(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> Dmg::find_id(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Iterative three-colour DFS over edges leaving AND-nodes. Returns the labels
// along the first cycle found.
std::optional<std::vector<std::string>> find_and_cycle(const Dmg& g) {
  enum Colour { white, grey, black };
  std::vector<Colour> colour(g.node_count(), white);
  std::vector<std::size_t> parent(g.node_count(), 0);
  for (std::size_t root = 0; root < g.node_count(); ++root) {
    if (colour[root] != white || g.nodes()[root].type != SymbolType::and_) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    colour[root] = grey;
    while (!stack.empty()) {
      auto& [n, next] = stack.back();
      auto out = g.out_edges(static_cast<NodeId>(n));
      if (next == out.size()) {
        colour[n] = black;
        stack.pop_back();
        continue;
      }
      std::size_t m = index_of(out[next++].to);
      if (g.nodes()[m].type != SymbolType::and_) continue;
      if (colour[m] == grey) {
        std::vector<std::string> cycle{g.nodes()[m].label};
        for (std::size_t k = n; k != m; k = parent[k]) cycle.insert(cycle.begin() + 1, g.nodes()[k].label);
        return cycle;
      }
      if (colour[m] == white) {
        colour[m] = grey;
        parent[m] = n;
        stack.emplace_back(m, 0);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Dmg build_dmg(const DndGrammar& d) {
  const Grammar& gr = d.grammar;
  std::vector<DmgNode> nodes;
  nodes.reserve(gr.symbols().size());
  for (std::size_t i = 0; i < gr.symbols().size(); ++i) {
    auto s = static_cast<SymbolId>(i);
    DmgNode n{"n" + std::to_string(i), gr.name(s), d.type(s), std::nullopt};
    if (gr.is_lexical(s)) n.lexemes = gr.lexemes(s);
    nodes.push_back(std::move(n));
  }

  std::vector<DmgEdge> edges;
  std::vector<int> next_ordinal(nodes.size(), 1);
  for (const Rule& r : gr.rules()) {
    auto from = static_cast<NodeId>(index_of(r.lhs));
    if (d.type(r.lhs) == SymbolType::or_) {
      if (r.rhs.size() != 1) {
        throw forge_error(errc::invariant_violation, "OR-nonterminal " + gr.name(r.lhs) + " has a multi-symbol rule");
      }
      edges.push_back({from, static_cast<NodeId>(index_of(r.rhs[0])), next_ordinal[index_of(r.lhs)]++});
    } else {
      for (SymbolId s : r.rhs) {
        edges.push_back({from, static_cast<NodeId>(index_of(s)), next_ordinal[index_of(r.lhs)]++});
      }
    }
  }

  Dmg g = Dmg::from_parts(std::move(nodes), std::move(edges), static_cast<NodeId>(index_of(gr.start())));
  if (auto cycle = find_and_cycle(g)) {
    std::string path;
    for (const auto& l : *cycle) path += l + " -> ";
    throw forge_error(errc::and_cycle, "cycle through AND-nodes only: " + path + cycle->front());
  }
  auto problems = check_wellformed(g);
  if (!problems.empty()) throw forge_error(errc::invariant_violation, problems.front());
  return g;
}

Dmg build_dmg_from_source(std::string_view text) {
  Grammar g = parse_grammar(text);
  // Identity rules are raised by the reduction with their own code.
  DndGrammar d = reduce_to_dnd(g);
  for (const auto& diag : validate(g)) {
    if (diag.severity == Severity::error) throw forge_error(errc::invalid_grammar, diag.message);
  }
  return build_dmg(d);
}

std::vector<std::string> check_wellformed(const Dmg& g) {
  std::vector<std::string> out;
  const auto& nodes = g.nodes();
  std::set<std::string> labels;
  std::set<std::string> ids;
  for (const DmgNode& n : nodes) {
    if (!labels.insert(n.label).second) out.push_back("label '" + n.label + "' is used by more than one node");
    if (!ids.insert(n.id).second) out.push_back("node id '" + n.id + "' is not unique");
    if (n.lexemes && n.type != SymbolType::zero) out.push_back("node '" + n.label + "' has lexemes but is not a 0-node");
  }
  if (index_of(g.start()) >= nodes.size()) out.push_back("start node does not exist");

  std::vector<std::vector<DmgEdge>> by_source(nodes.size());
  for (const DmgEdge& e : g.edges()) {
    if (index_of(e.from) >= nodes.size() || index_of(e.to) >= nodes.size()) {
      out.push_back("edge with ordinal " + std::to_string(e.ordinal) + " has a missing endpoint");
      continue;
    }
    if (e.from == e.to) out.push_back("loop edge on '" + nodes[index_of(e.from)].label + "'");
    by_source[index_of(e.from)].push_back(e);
  }

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const DmgNode& n = nodes[i];
    const auto& out_edges = by_source[i];
    for (std::size_t k = 0; k < out_edges.size(); ++k) {
      if (out_edges[k].ordinal != static_cast<int>(k) + 1) {
        out.push_back("ordinals of '" + n.label + "' are not 1.." + std::to_string(out_edges.size()));
        break;
      }
    }
    switch (n.type) {
      case SymbolType::or_: {
        if (out_edges.size() < 2) {
          out.push_back("OR-node '" + n.label + "' has " + std::to_string(out_edges.size()) + " outgoing edge(s)");
        }
        std::set<NodeId> targets;
        for (const DmgEdge& e : out_edges) {
          if (!targets.insert(e.to).second) {
            out.push_back("OR-node '" + n.label + "' has parallel edges to '" + nodes[index_of(e.to)].label + "'");
          }
        }
        break;
      }
      case SymbolType::zero:
        if (!out_edges.empty()) out.push_back("0-node '" + n.label + "' has outgoing edges");
        break;
      case SymbolType::and_:
        break;
    }
  }
  return out;
}

std::string export_dot(const Dmg& g) {
  auto escape = [](const std::string& s) {
    std::string r;
    for (char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r;
  };
  std::ostringstream out;
  out << "digraph dmg {\n";
  for (const DmgNode& n : g.nodes()) {
    out << "  " << n.id << " [label=\"" << escape(n.label) << "\"";
    switch (n.type) {
      case SymbolType::or_: out << ", shape=diamond, style=filled, fillcolor=\"#f6c8a8\""; break;
      case SymbolType::and_: out << ", shape=box, style=filled, fillcolor=\"#b8d8f0\""; break;
      case SymbolType::zero:
        out << (n.is_lexical() ? ", shape=ellipse, style=dashed" : ", shape=plaintext");
        break;
    }
    if (index_of(g.start()) < g.node_count() && &n == &g.node(g.start())) out << ", penwidth=2";
    out << "];\n";
  }
  for (const DmgEdge& e : g.edges()) {
    out << "  " << g.node(e.from).id << " -> " << g.node(e.to).id;
    if (g.node(e.from).type == SymbolType::and_) out << " [label=\"" << e.ordinal << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_json(const Dmg& g) {
  ordered_json nodes = ordered_json::array();
  for (const DmgNode& n : g.nodes()) {
    ordered_json j;
    j["id"] = n.id;
    j["label"] = n.label;
    j["type"] = std::string(type_glyph(n.type));
    if (n.lexemes) j["lexemes"] = *n.lexemes;
    nodes.push_back(std::move(j));
  }
  ordered_json edges = ordered_json::array();
  for (const DmgEdge& e : g.edges()) {
    ordered_json j;
    j["from"] = g.node(e.from).id;
    j["to"] = g.node(e.to).id;
    j["ordinal"] = e.ordinal;
    edges.push_back(std::move(j));
  }
  ordered_json doc;
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  doc["start"] = g.node(g.start()).label;
  return doc.dump();
}

Dmg import_json(std::string_view text) {
  try {
    auto doc = nlohmann::json::parse(text);
    std::vector<DmgNode> nodes;
    std::map<std::string, NodeId> by_id;
    for (const auto& j : doc.at("nodes")) {
      DmgNode n{j.at("id").get<std::string>(), j.at("label").get<std::string>(),
                parse_type_glyph(j.at("type").get<std::string>()), std::nullopt};
      if (j.contains("lexemes")) n.lexemes = j.at("lexemes").get<std::vector<std::string>>();
      by_id.emplace(n.id, static_cast<NodeId>(nodes.size()));
      nodes.push_back(std::move(n));
    }
    auto resolve = [&](const std::string& id) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw forge_error(errc::bad_json, "edge refers to unknown node '" + id + "'");
      return it->second;
    };
    std::vector<DmgEdge> edges;
    for (const auto& j : doc.at("edges")) {
      edges.push_back({resolve(j.at("from").get<std::string>()), resolve(j.at("to").get<std::string>()),
                       j.at("ordinal").get<int>()});
    }
    auto start_label = doc.at("start").get<std::string>();
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const DmgNode& n) { return n.label == start_label; });
    if (it == nodes.end()) throw forge_error(errc::bad_json, "start label '" + start_label + "' names no node");
    return Dmg::from_parts(std::move(nodes), std::move(edges), static_cast<NodeId>(it - nodes.begin()));
  } catch (const nlohmann::json::exception& e) {
    throw forge_error(errc::bad_json, e.what());
  }
}

}  // namespace dmgforge
