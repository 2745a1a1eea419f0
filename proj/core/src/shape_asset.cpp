#include "polydither/shape_asset.hpp"

#include "polydither/exact_cover.hpp"

#include <mutex>

namespace polydither {

namespace {

CellSet rectangle(int w, int h) {
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            cells.push_back({x, y});
    return CellSet(std::move(cells));
}

}  // namespace

CellSet verifyHexominoAsset(const CellSet& candidate) {
    if (candidate.size() != 6)
        throw AssetInvalid("shape asset is not a hexomino");
    if (solveExactCover(rectangle(12, 9), candidate, 1).empty())
        throw AssetInvalid("shape asset does not tile the 12x9 rectangle");
    try {
        ProductionRule rule = deriveProductionRule(candidate, 9, "candidate");
        if (!verifyProductionRule(candidate, rule))
            throw AssetInvalid("derived 9^2-rep rule failed verification");
    } catch (const NotRectifiable&) {
        throw AssetInvalid("shape asset admits no 9^2-rep production rule");
    }
    return candidate;
}

const CellSet& canonicalGHexomino() {
    static const CellSet shape = [] {
        CellSet g({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 1}, {0, 2}});
        return verifyHexominoAsset(g);
    }();
    return shape;
}

const ProductionRule& gHexominoRule() {
    static const ProductionRule rule =
        deriveProductionRule(canonicalGHexomino(), 9, "g-hexomino");
    return rule;
}

}  // namespace polydither
