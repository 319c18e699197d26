// Reference kernel: Gauss-Seidel sweeps, each node's table replaced in place
// so later nodes in the same sweep already see the update.
#include "language_table.h"

namespace dmgforge::detail {

void fixpoint_serial(const LanguageProblem& p, std::vector<NodeLanguage>& tables) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < tables.size(); ++s) {
      NodeLanguage next = p.evaluate(s, tables);
      // The rules are monotone, so a table only ever grows.
      if (next.size() != tables[s].size()) {
        tables[s] = std::move(next);
        changed = true;
      }
    }
  }
}

}  // namespace dmgforge::detail
