#pragma once

#include "polydither/cellset.hpp"

#include <cstddef>
#include <vector>

namespace polydither {

using Placement = Transform;
using CoverSolution = std::vector<Placement>;

// Finds up to `limit` exact covers of `region` by transformed copies of
// `shape`. Backtracking with a fewest-candidates cell heuristic; deterministic
// candidate order, so solutions come out in a stable order across runs.
// Returns empty if |region| is not divisible by |shape| or no cover exists.
std::vector<CoverSolution> solveExactCover(const CellSet& region, const CellSet& shape,
                                           std::size_t limit);

}  // namespace polydither
