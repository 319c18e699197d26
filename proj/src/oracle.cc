// Brute-force enumeration over the original grammar. Shares nothing with the
// graph path so the two can be compared.
#include <cstdint>
#include <deque>
#include <set>

#include "dmgforge/derivation.h"

namespace dmgforge {

namespace {

// A sentential form: the items already produced, then the rest, which starts
// with a nonterminal (or is empty).
struct Form {
  std::vector<std::string> produced;
  std::vector<SymbolId> rest;

  bool operator<(const Form& o) const { return produced != o.produced ? produced < o.produced : rest < o.rest; }
};

std::vector<bool> nullable_symbols(const Grammar& g) {
  std::vector<bool> nullable(g.symbols().size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : g.rules()) {
      if (nullable[index_of(r.lhs)]) continue;
      bool all = true;
      for (SymbolId s : r.rhs) all = all && nullable[index_of(s)];
      if (all) {
        nullable[index_of(r.lhs)] = true;
        changed = true;
      }
    }
  }
  return nullable;
}

}  // namespace

LanguageSample oracle_enumerate(const Grammar& g, std::size_t bound) {
  const auto nullable = nullable_symbols(g);
  std::vector<std::vector<const Rule*>> rules_of(g.symbols().size());
  for (const Rule& r : g.rules()) rules_of[index_of(r.lhs)].push_back(&r);

  LanguageSample out{bound, {}};
  std::set<Form> seen;
  std::deque<Form> queue;

  // Moves leading terminals into `produced`, then enqueues if within bound.
  auto push = [&](Form f) {
    std::size_t i = 0;
    while (i < f.rest.size() && g.is_terminal(f.rest[i])) f.produced.push_back(g.name(f.rest[i++]));
    f.rest.erase(f.rest.begin(), f.rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (f.produced.size() + f.rest.size() > bound) return;
    if (seen.insert(f).second) queue.push_back(std::move(f));
  };

  push({{}, {g.start()}});
  if (nullable[index_of(g.start())]) push({{}, {}});

  while (!queue.empty()) {
    Form f = std::move(queue.front());
    queue.pop_front();
    if (f.rest.empty()) {
      out.chains.insert(f.produced);
      continue;
    }
    SymbolId head = f.rest.front();
    std::vector<SymbolId> tail(f.rest.begin() + 1, f.rest.end());

    if (rules_of[index_of(head)].empty()) {
      for (const auto& lexeme : g.lexemes(head)) {
        Form next{f.produced, tail};
        next.produced.push_back(lexeme);
        push(std::move(next));
      }
      continue;
    }

    for (const Rule* r : rules_of[index_of(head)]) {
      std::vector<std::size_t> optional;
      for (std::size_t k = 0; k < r->rhs.size(); ++k) {
        if (nullable[index_of(r->rhs[k])]) optional.push_back(k);
      }
      // Every subset of the nullable positions may be erased on the spot.
      for (std::uint32_t mask = 0; mask < (1u << optional.size()); ++mask) {
        std::vector<bool> drop(r->rhs.size(), false);
        for (std::size_t b = 0; b < optional.size(); ++b) drop[optional[b]] = (mask >> b) & 1u;
        Form next{f.produced, {}};
        for (std::size_t k = 0; k < r->rhs.size(); ++k) {
          if (!drop[k]) next.rest.push_back(r->rhs[k]);
        }
        next.rest.insert(next.rest.end(), tail.begin(), tail.end());
        push(std::move(next));
      }
    }
  }
  return out;
}

}  // namespace dmgforge
