#pragma once

#include "polydither/cellset.hpp"
#include "polydither/production_rule.hpp"

namespace polydither {

// The canonical G-hexomino. Verified on first use: an 18-copy cover of the
// 12x9 rectangle must exist and the 9^2-rep production rule must derive.
// Throws AssetInvalid if either check fails. The result is cached.
const CellSet& canonicalGHexomino();

// Same verification applied to an arbitrary candidate shape (used when a
// shape asset path is configured). Returns the verified shape.
CellSet verifyHexominoAsset(const CellSet& candidate);

// The frozen 9^2-rep rule for the canonical G-hexomino (first solver
// solution under the deterministic search order). Cached.
const ProductionRule& gHexominoRule();

}  // namespace polydither
