#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dmgforge {

/// A derived symbol chain: terminal spellings and lexemes, one item each.
/// The empty chain is epsilon.
using Chain = std::vector<std::string>;

/// Items concatenated with `sep` between them.
std::string join(const Chain& c, std::string_view sep = "");

}  // namespace dmgforge
