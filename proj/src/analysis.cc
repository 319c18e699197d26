#include "dmgforge/analysis.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dmgforge/error.h"

namespace dmgforge {

namespace {

std::vector<bool> reachable_from(const Dmg& g, NodeId root) {
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeId> stack{root};
  seen[index_of(root)] = true;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (const DmgEdge& e : g.out_edges(n)) {
      if (!seen[index_of(e.to)]) {
        seen[index_of(e.to)] = true;
        stack.push_back(e.to);
      }
    }
  }
  return seen;
}

class CycleSearch {
 public:
  CycleSearch(const Dmg& g, std::size_t limit) : g_(g), limit_(limit), rank_(g.node_count()) {
    std::vector<std::size_t> order(g.node_count());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return g.nodes()[a].label < g.nodes()[b].label; });
    for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
    by_rank_ = std::move(order);
  }

  std::vector<Cycle> run() {
    on_path_.assign(g_.node_count(), false);
    for (std::size_t r = 0; r < by_rank_.size(); ++r) {
      start_ = by_rank_[r];
      path_ = {start_};
      on_path_[start_] = true;
      extend(start_);
      on_path_[start_] = false;
    }
    std::sort(found_.begin(), found_.end());
    return std::move(found_);
  }

 private:
  // Walks only through nodes ranked above the start, so each cycle is found
  // once, from its smallest label.
  void extend(std::size_t n) {
    for (const DmgEdge& e : g_.out_edges(static_cast<NodeId>(n))) {
      std::size_t m = index_of(e.to);
      if (m == start_) {
        ordinals_.push_back(e.ordinal);
        record();
        ordinals_.pop_back();
      } else if (rank_[m] > rank_[start_] && !on_path_[m]) {
        ordinals_.push_back(e.ordinal);
        path_.push_back(m);
        on_path_[m] = true;
        extend(m);
        on_path_[m] = false;
        path_.pop_back();
        ordinals_.pop_back();
      }
    }
  }

  void record() {
    if (found_.size() >= limit_) {
      throw forge_error(errc::cycle_explosion, "more than " + std::to_string(limit_) + " simple cycles");
    }
    Cycle c;
    for (std::size_t n : path_) c.labels.push_back(g_.nodes()[n].label);
    c.ordinals = ordinals_;
    found_.push_back(std::move(c));
  }

  const Dmg& g_;
  std::size_t limit_;
  std::vector<std::size_t> rank_;
  std::vector<std::size_t> by_rank_;
  std::size_t start_ = 0;
  std::vector<std::size_t> path_;
  std::vector<int> ordinals_;
  std::vector<bool> on_path_;
  std::vector<Cycle> found_;
};

}  // namespace

std::set<std::string> find_inaccessible(const Dmg& g) {
  auto seen = reachable_from(g, g.start());
  std::set<std::string> out;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!seen[i]) out.insert(g.nodes()[i].label);
  }
  return out;
}

std::set<std::string> find_useless(const Dmg& g) {
  const auto& nodes = g.nodes();
  std::vector<bool> productive(g.node_count(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_terminal()) productive[i] = true;
    if (nodes[i].is_lexical()) productive[i] = !nodes[i].lexemes->empty();
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (productive[i] || nodes[i].type == SymbolType::zero) continue;
      auto out = g.out_edges(static_cast<NodeId>(i));
      auto is_productive = [&](const DmgEdge& e) { return productive[index_of(e.to)]; };
      bool now = nodes[i].type == SymbolType::or_ ? std::any_of(out.begin(), out.end(), is_productive)
                                                  : std::all_of(out.begin(), out.end(), is_productive);
      if (now) {
        productive[i] = true;
        changed = true;
      }
    }
  }
  std::set<std::string> useless;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!productive[i] && !nodes[i].is_terminal()) useless.insert(nodes[i].label);
  }
  return useless;
}

std::vector<Cycle> find_cycles(const Dmg& g, std::size_t limit) { return CycleSearch(g, limit).run(); }

Dmg sublanguage(const Dmg& g, const std::string& root) {
  auto id = g.find_label(root);
  if (!id) throw forge_error(errc::no_such_symbol, "no symbol '" + root + "'");
  const DmgNode& r = g.node(*id);
  if (r.type == SymbolType::zero && !r.is_lexical()) {
    throw forge_error(errc::not_a_nonterminal, "'" + root + "' is a terminal");
  }
  auto seen = reachable_from(g, *id);
  std::vector<std::size_t> remap(g.node_count());
  std::vector<DmgNode> nodes;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!seen[i]) continue;
    remap[i] = nodes.size();
    nodes.push_back(g.nodes()[i]);
  }
  std::vector<DmgEdge> edges;
  for (const DmgEdge& e : g.edges()) {
    if (seen[index_of(e.from)]) {
      edges.push_back({static_cast<NodeId>(remap[index_of(e.from)]), static_cast<NodeId>(remap[index_of(e.to)]),
                       e.ordinal});
    }
  }
  return Dmg::from_parts(std::move(nodes), std::move(edges), static_cast<NodeId>(remap[index_of(*id)]));
}

Statistics statistics(const Dmg& g) {
  long long and_nodes = 0, or_nodes = 0, zero_nodes = 0, terminals = 0, lexical = 0, max_out = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const DmgNode& n = g.nodes()[i];
    switch (n.type) {
      case SymbolType::and_: ++and_nodes; break;
      case SymbolType::or_: ++or_nodes; break;
      case SymbolType::zero: ++zero_nodes; break;
    }
    if (n.is_terminal()) ++terminals;
    if (n.is_lexical()) ++lexical;
    max_out = std::max(max_out, static_cast<long long>(g.out_edges(static_cast<NodeId>(i)).size()));
  }
  return {
      {"nodes", static_cast<long long>(g.node_count())},
      {"edges", static_cast<long long>(g.edge_count())},
      {"and_nodes", and_nodes},
      {"or_nodes", or_nodes},
      {"zero_nodes", zero_nodes},
      {"terminals", terminals},
      {"lexical_nonterminals", lexical},
      {"max_out_degree", max_out},
      {"cycle_count", static_cast<long long>(find_cycles(g).size())},
  };
}

AnalysisReport analyze(const Dmg& g) {
  AnalysisReport r;
  r.inaccessible = find_inaccessible(g);
  r.useless = find_useless(g);
  r.cycles = find_cycles(g);
  r.stats = statistics(g);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const DmgNode& n = g.nodes()[i];
    if (n.type == SymbolType::zero) continue;
    auto seen = reachable_from(g, static_cast<NodeId>(i));
    r.sublanguage_roots.push_back({n.label, static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true))});
  }
  return r;
}

nlohmann::ordered_json to_json(const Statistics& s) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, value] : s) j[key] = value;
  return j;
}

nlohmann::ordered_json to_json(const AnalysisReport& r) {
  nlohmann::ordered_json j;
  j["inaccessible"] = r.inaccessible;
  j["useless"] = r.useless;
  auto cycles = nlohmann::ordered_json::array();
  for (const Cycle& c : r.cycles) {
    nlohmann::ordered_json cj;
    cj["labels"] = c.labels;
    cj["ordinals"] = c.ordinals;
    cycles.push_back(std::move(cj));
  }
  j["cycles"] = std::move(cycles);
  j["statistics"] = to_json(r.stats);
  auto roots = nlohmann::ordered_json::array();
  for (const auto& root : r.sublanguage_roots) {
    nlohmann::ordered_json rj;
    rj["label"] = root.label;
    rj["size"] = root.size;
    roots.push_back(std::move(rj));
  }
  j["sublanguage_roots"] = std::move(roots);
  return j;
}

std::string to_text(const AnalysisReport& r) {
  std::ostringstream out;
  auto list = [&](const char* title, const std::set<std::string>& items) {
    out << title << ":";
    if (items.empty()) out << " (none)";
    for (const auto& s : items) out << ' ' << s;
    out << '\n';
  };
  list("inaccessible", r.inaccessible);
  list("useless", r.useless);
  out << "cycles: " << r.cycles.size() << '\n';
  for (const Cycle& c : r.cycles) {
    out << "  ";
    for (std::size_t i = 0; i < c.labels.size(); ++i) out << c.labels[i] << " -" << c.ordinals[i] << "-> ";
    out << c.labels.front() << '\n';
  }
  out << "statistics:\n";
  for (const auto& [key, value] : r.stats) out << "  " << key << " = " << value << '\n';
  out << "sublanguages:\n";
  for (const auto& root : r.sublanguage_roots) out << "  " << root.label << " reaches " << root.size << " nodes\n";
  return out.str();
}

}  // namespace dmgforge
