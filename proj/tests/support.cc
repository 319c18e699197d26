#include "support.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "dmgforge/error.h"

#ifndef DMGFORGE_TEST_DATA
#error "DMGFORGE_TEST_DATA must point at tests/"
#endif

namespace testsupport {

using namespace dmgforge;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing test data " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

// Shortest chain length per node, and the smallest tree height that achieves it.
struct Shortest {
  std::vector<std::size_t> len;
  std::vector<std::size_t> height;
};

Shortest shortest(const Dmg& g) {
  Shortest s{std::vector<std::size_t>(g.node_count(), kInf), std::vector<std::size_t>(g.node_count(), kInf)};
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const DmgNode& n = g.nodes()[i];
    if (n.is_terminal() || (n.is_lexical() && !n.lexemes->empty())) {
      s.len[i] = 1;
      s.height[i] = 0;
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const DmgNode& n = g.nodes()[i];
      if (n.type == SymbolType::zero) continue;
      auto out = g.out_edges(static_cast<NodeId>(i));
      std::size_t len = kInf, height = kInf;
      if (n.type == SymbolType::or_) {
        for (const DmgEdge& e : out) {
          std::size_t l = s.len[index_of(e.to)], h = s.height[index_of(e.to)];
          if (l < len || (l == len && h + 1 < height)) {
            len = l;
            height = h + 1;
          }
        }
      } else {
        len = 0;
        height = 0;
        for (const DmgEdge& e : out) {
          len = std::min(kInf, len + s.len[index_of(e.to)]);
          height = std::max(height, s.height[index_of(e.to)]);
        }
        height = height >= kInf ? kInf : height + 1;
        if (len >= kInf) height = kInf;
      }
      if (len < s.len[i] || (len == s.len[i] && height < s.height[i])) {
        s.len[i] = len;
        s.height[i] = height;
        changed = true;
      }
    }
  }
  return s;
}

}  // namespace

std::string fixture(const std::string& name) { return slurp(std::string(DMGFORGE_TEST_DATA) + "/fixtures/" + name); }
std::string golden(const std::string& name) { return slurp(std::string(DMGFORGE_TEST_DATA) + "/golden/" + name); }

std::vector<std::optional<std::size_t>> shortest_lengths(const Dmg& g) {
  auto s = shortest(g);
  std::vector<std::optional<std::size_t>> out;
  for (std::size_t l : s.len) out.push_back(l < kInf ? std::optional(l) : std::nullopt);
  return out;
}

CorpusEntry make_entry(const std::string& name, const std::string& source) {
  Grammar g = parse_grammar(source);
  auto dmg = std::make_shared<const Dmg>(build_dmg(reduce_to_dnd(g)));
  return {name, source, std::move(g), std::move(dmg)};
}

std::string random_grammar_source(std::mt19937& rng) {
  static const char* names[] = {"S", "A", "B", "C", "D", "E"};
  static const char* terminals[] = {"\"a\"", "\"b\"", "\"c\""};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  std::size_t nonterminals = 1 + pick(6);
  bool with_lexical = nonterminals >= 2 && pick(4) == 0;
  std::size_t with_rules = with_lexical ? nonterminals - 1 : nonterminals;

  std::vector<std::string> symbols(terminals, terminals + 3);
  for (std::size_t i = 0; i < nonterminals; ++i) symbols.emplace_back(names[i]);

  std::ostringstream out;
  if (with_lexical) out << "%lexical " << names[nonterminals - 1] << " = \"x\", \"yy\" ;\n";
  for (std::size_t i = 0; i < with_rules; ++i) {
    out << names[i] << " ->";
    std::size_t alts = 1 + pick(3);
    for (std::size_t a = 0; a < alts; ++a) {
      if (a) out << " |";
      std::size_t len = pick(5);
      for (std::size_t k = 0; k < len; ++k) out << ' ' << symbols[pick(symbols.size())];
    }
    out << " ;\n";
  }
  return out.str();
}

std::vector<CorpusEntry> corpus(std::size_t count, std::uint32_t seed, std::size_t max_len) {
  std::vector<CorpusEntry> out{make_entry("example1", kExample1), make_entry("example2", kExample2)};
  std::mt19937 rng(seed);
  while (out.size() < count + 2) {
    std::string src = random_grammar_source(rng);
    try {
      Grammar g = parse_grammar(src);
      if (has_errors(validate(g))) continue;
      CorpusEntry e = make_entry("random" + std::to_string(out.size() - 2), src);
      if (shortest(*e.dmg).len[index_of(e.dmg->start())] > max_len) continue;
      out.push_back(std::move(e));
    } catch (const forge_error&) {
      // identity rule, bad infinity or AND-cycle: not a valid corpus grammar
    }
  }
  return out;
}

Tad random_tad(const std::shared_ptr<const Dmg>& g, std::mt19937& rng, std::size_t max_len) {
  const Shortest s = shortest(*g);
  Atad t = auto_expand(new_atad(g));
  constexpr std::size_t kRandomSteps = 40;

  for (std::size_t step = 0;; ++step) {
    auto pending = t.pending();
    if (pending.empty()) break;

    // Shortest crone still reachable from this tree.
    std::size_t total = 0;
    for (AtadNodeId id : t.leaves()) {
      const AtadNode& n = t.node(id);
      if (n.state == AtadState::leaf0 || n.state == AtadState::lexeme_filled) ++total;
      if (n.state == AtadState::pending_choice || n.state == AtadState::lexeme_pending) {
        total += s.len[index_of(n.dmg_ref)];
      }
    }

    AtadNodeId leaf = pending[std::uniform_int_distribution<std::size_t>(0, pending.size() - 1)(rng)];
    const AtadNode& n = t.node(leaf);
    if (n.state == AtadState::lexeme_pending) {
      const auto& lex = *g->node(n.dmg_ref).lexemes;
      t = set_lexeme(t, leaf, lex[std::uniform_int_distribution<std::size_t>(0, lex.size() - 1)(rng)]);
      continue;
    }

    std::size_t here = s.len[index_of(n.dmg_ref)];
    std::vector<DmgEdge> options;
    const DmgEdge* best = nullptr;
    for (const DmgEdge& e : g->out_edges(n.dmg_ref)) {
      std::size_t l = s.len[index_of(e.to)];
      if (l < kInf && total - here + l <= max_len) options.push_back(e);
      if (!best || l < s.len[index_of(best->to)] ||
          (l == s.len[index_of(best->to)] && s.height[index_of(e.to)] < s.height[index_of(best->to)])) {
        best = &e;
      }
    }
    // After a while, always take the shortest, lowest alternative so the
    // tree is guaranteed to close.
    DmgEdge pick = (step >= kRandomSteps || options.empty())
                       ? *best
                       : options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    t = auto_expand(choose(t, leaf, pick.ordinal));
  }
  return finalize(t);
}

std::string permute_or_edges(const std::string& dmg_json, std::mt19937& rng) {
  auto doc = nlohmann::ordered_json::parse(dmg_json);
  std::map<std::string, std::string> type_of;
  for (const auto& n : doc["nodes"]) type_of[n["id"].get<std::string>()] = n["type"].get<std::string>();
  std::map<std::string, std::vector<std::size_t>> or_edges;
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    auto from = doc["edges"][i]["from"].get<std::string>();
    if (type_of[from] == "!") or_edges[from].push_back(i);
  }
  for (auto& [from, idx] : or_edges) {
    std::vector<int> ordinals;
    for (std::size_t i : idx) ordinals.push_back(doc["edges"][i]["ordinal"].get<int>());
    std::shuffle(ordinals.begin(), ordinals.end(), rng);
    for (std::size_t k = 0; k < idx.size(); ++k) doc["edges"][idx[k]]["ordinal"] = ordinals[k];
  }
  return doc.dump();
}

std::string rename_inner_labels(const std::string& dmg_json) {
  auto doc = nlohmann::ordered_json::parse(dmg_json);
  std::map<std::string, std::string> renamed;
  std::size_t counter = 0;
  for (auto& n : doc["nodes"]) {
    if (n["type"] == "0") continue;
    auto fresh = "node_" + std::to_string(counter++) + "_" + n["label"].get<std::string>() + "_renamed";
    renamed[n["label"].get<std::string>()] = fresh;
    n["label"] = fresh;
  }
  auto start = doc["start"].get<std::string>();
  if (renamed.count(start)) doc["start"] = renamed[start];
  return doc.dump();
}

}  // namespace testsupport
