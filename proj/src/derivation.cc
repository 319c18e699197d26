#include "dmgforge/derivation.h"

#include <algorithm>
#include <limits>

#include "language_table.h"

namespace dmgforge {

std::string join(const Chain& c, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += sep;
    out += c[i];
  }
  return out;
}

std::vector<Chain> sorted_by_length(const LanguageSample& s) {
  std::vector<Chain> out(s.chains.begin(), s.chains.end());
  std::stable_sort(out.begin(), out.end(), [](const Chain& a, const Chain& b) { return a.size() < b.size(); });
  return out;
}

namespace detail {

LanguageProblem::LanguageProblem(const Dmg& g, NodeId root, std::size_t bound)
    : g_(g), bound_(bound), slot_(g.node_count(), std::numeric_limits<std::size_t>::max()) {
  std::unordered_map<std::string, std::int32_t> interned;
  auto intern = [&](const std::string& s) {
    auto [it, fresh] = interned.emplace(s, static_cast<std::int32_t>(items_.size()));
    if (fresh) items_.push_back(s);
    return it->second;
  };

  std::vector<NodeId> stack{root};
  slot_[index_of(root)] = 0;
  scope_.push_back(root);
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (const DmgEdge& e : g.out_edges(n)) {
      if (slot_[index_of(e.to)] != std::numeric_limits<std::size_t>::max()) continue;
      slot_[index_of(e.to)] = scope_.size();
      scope_.push_back(e.to);
      stack.push_back(e.to);
    }
  }

  leaf_items_.resize(scope_.size());
  for (std::size_t s = 0; s < scope_.size(); ++s) {
    const DmgNode& node = g.node(scope_[s]);
    if (node.is_terminal()) {
      leaf_items_[s].push_back(intern(node.label));
    } else if (node.is_lexical()) {
      for (const auto& lexeme : *node.lexemes) leaf_items_[s].push_back(intern(lexeme));
    }
  }
}

NodeLanguage LanguageProblem::evaluate(std::size_t s, const std::vector<NodeLanguage>& tables) const {
  NodeLanguage out = empty_language();
  NodeId n = scope_[s];
  const DmgNode& node = g_.node(n);
  switch (node.type) {
    case SymbolType::zero:
      if (bound_ >= 1) {
        for (std::int32_t item : leaf_items_[s]) out.by_length[1].insert({item});
      }
      break;

    case SymbolType::or_:
      for (const DmgEdge& e : g_.out_edges(n)) {
        const NodeLanguage& child = tables[slot(e.to)];
        for (std::size_t len = 0; len <= bound_; ++len) {
          out.by_length[len].insert(child.by_length[len].begin(), child.by_length[len].end());
        }
      }
      break;

    case SymbolType::and_: {
      out.by_length[0].insert(ItemChain{});
      for (const DmgEdge& e : g_.out_edges(n)) {
        const NodeLanguage& child = tables[slot(e.to)];
        NodeLanguage next = empty_language();
        for (std::size_t i = 0; i <= bound_; ++i) {
          for (const ItemChain& left : out.by_length[i]) {
            for (std::size_t j = 0; i + j <= bound_; ++j) {
              for (const ItemChain& right : child.by_length[j]) {
                ItemChain joined;
                joined.reserve(i + j);
                joined.insert(joined.end(), left.begin(), left.end());
                joined.insert(joined.end(), right.begin(), right.end());
                next.by_length[i + j].insert(std::move(joined));
              }
            }
          }
        }
        out = std::move(next);
      }
      break;
    }
  }
  return out;
}

}  // namespace detail

LanguageSample derive_from(const Dmg& g, NodeId node, std::size_t bound, Kernel kernel) {
  detail::LanguageProblem problem(g, node, bound);
  std::vector<detail::NodeLanguage> tables(problem.scope().size(), problem.empty_language());
  if (kernel == Kernel::parallel) {
    detail::fixpoint_parallel(problem, tables);
  } else {
    detail::fixpoint_serial(problem, tables);
  }
  LanguageSample out{bound, {}};
  for (const auto& bucket : tables[0].by_length) {
    for (const auto& chain : bucket) {
      Chain c;
      c.reserve(chain.size());
      for (std::int32_t item : chain) c.push_back(problem.item(item));
      out.chains.insert(std::move(c));
    }
  }
  return out;
}

LanguageSample language(const Dmg& g, std::size_t bound, Kernel kernel) {
  return derive_from(g, g.start(), bound, kernel);
}

}  // namespace dmgforge
