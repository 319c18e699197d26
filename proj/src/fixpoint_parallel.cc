// Jacobi rounds: every node of a round is computed from the previous round's
// tables, so the nodes are independent and split across OpenMP threads.
#include "language_table.h"

namespace dmgforge::detail {

void fixpoint_parallel(const LanguageProblem& p, std::vector<NodeLanguage>& tables) {
  const auto count = static_cast<std::ptrdiff_t>(tables.size());
  std::vector<NodeLanguage> next(tables.size());
  bool changed = true;
  while (changed) {
    changed = false;
#pragma omp parallel for schedule(dynamic) reduction(|| : changed)
    for (std::ptrdiff_t s = 0; s < count; ++s) {
      auto slot = static_cast<std::size_t>(s);
      next[slot] = p.evaluate(slot, tables);
      changed = changed || next[slot].size() != tables[slot].size();
    }
    tables.swap(next);
  }
}

}  // namespace dmgforge::detail
