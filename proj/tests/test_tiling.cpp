#include "polydither/shape_asset.hpp"
#include "polydither/tiling.hpp"

#include <doctest.h>

#include <set>

using namespace polydither;

namespace {

// The exact cell footprint of a parent tile at child (L-times) resolution.
std::set<Cell> scaledFootprint(const Tile& tile, const CellSet& shape, int L) {
    std::set<Cell> cells;
    for (Cell c : transformedCells(shape, tile.transform))
        for (int dy = 0; dy < L; ++dy)
            for (int dx = 0; dx < L; ++dx)
                cells.insert({c.x * L + dx, c.y * L + dy});
    return cells;
}

std::set<Cell> childUnion(const std::vector<Tile>& children, const CellSet& shape) {
    std::set<Cell> cells;
    for (const Tile& t : children)
        for (Cell c : transformedCells(shape, t.transform))
            REQUIRE(cells.insert(c).second);  // no overlaps
    return cells;
}

}  // namespace

TEST_CASE("subdividing the identity tile reproduces the scaled footprint") {
    const CellSet& g = canonicalGHexomino();
    const ProductionRule& rule = gHexominoRule();
    Tile parent{Transform{}};
    std::vector<Tile> children = subdivide(parent, rule);
    REQUIRE(children.size() == 81);
    CHECK(childUnion(children, g) == scaledFootprint(parent, g, 9));
}

TEST_CASE("subdivision respects every parent orientation and translation") {
    const CellSet& g = canonicalGHexomino();
    const ProductionRule& rule = gHexominoRule();
    for (int rot = 0; rot < 4; ++rot)
        for (int mir = 0; mir < 2; ++mir) {
            Tile parent{Transform{rot, mir == 1, 2 - rot, mir + 1}};
            std::vector<Tile> children = subdivide(parent, rule);
            CHECK(childUnion(children, g) == scaledFootprint(parent, g, 9));
        }
}

TEST_CASE("two subdivision levels stay exact (area conservation)") {
    const CellSet& g = canonicalGHexomino();
    const ProductionRule& rule = gHexominoRule();
    Tiling patch = subdividePatch(g, rule, 2);
    CHECK(patch.tiles().size() == 81 * 81);
    CHECK(patch.isExact());
}

TEST_CASE("overlapping tiles are rejected at construction") {
    const CellSet& g = canonicalGHexomino();
    std::vector<Tile> tiles{Tile{Transform{}}, Tile{Transform{}}};
    CHECK_THROWS(Tiling(g, std::move(tiles)));
}

TEST_CASE("coverRectangleAuto covers the requested window without gaps") {
    const CellSet& g = canonicalGHexomino();
    const ProductionRule& rule = gHexominoRule();
    Tiling t = coverRectangleAuto(20, 15, g, rule);
    for (int y = 0; y < 15; ++y)
        for (int x = 0; x < 20; ++x)
            CHECK(t.ownerAt(x, y) >= 0);
}

TEST_CASE("coverRectangleAuto honors cell offsets") {
    const CellSet& g = canonicalGHexomino();
    const ProductionRule& rule = gHexominoRule();
    Tiling t = coverRectangleAuto(10, 10, g, rule, 37, -23);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x)
            CHECK(t.ownerAt(x, y) >= 0);
}

TEST_CASE("cover construction is deterministic") {
    const CellSet& g = canonicalGHexomino();
    const ProductionRule& rule = gHexominoRule();
    Tiling a = coverRectangleAuto(16, 16, g, rule);
    Tiling b = coverRectangleAuto(16, 16, g, rule);
    REQUIRE(a.tiles().size() == b.tiles().size());
    for (std::size_t i = 0; i < a.tiles().size(); ++i)
        CHECK(a.tiles()[i].transform == b.tiles()[i].transform);
}
