#pragma once

#include <vector>

namespace gcx {

using IntMatrix = std::vector<std::vector<long>>;

/// Nonzero diagonal of the Smith normal form, positive, each dividing the
/// next. Throws TopologyError on 64-bit overflow.
std::vector<long> smith_invariants(IntMatrix m);

}  // namespace gcx
