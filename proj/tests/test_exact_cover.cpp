#include "polydither/exact_cover.hpp"
#include "polydither/shape_asset.hpp"

#include <doctest.h>

#include <set>

using namespace polydither;

namespace {

CellSet rectangle(int w, int h) {
    std::vector<Cell> cells;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            cells.push_back({x, y});
    return CellSet(std::move(cells));
}

// Cell-by-cell check that the placements cover the region exactly once.
bool isExactCover(const CellSet& region, const CellSet& shape,
                  const CoverSolution& solution) {
    std::set<Cell> covered;
    for (const Placement& p : solution)
        for (Cell c : transformedCells(shape, p))
            if (!covered.insert(c).second)
                return false;  // overlap
    if (covered.size() != region.size())
        return false;
    for (Cell c : region.cells())
        if (!covered.count(c))
            return false;
    return true;
}

}  // namespace

TEST_CASE("dominoes cover the 2x2 square in exactly two ways") {
    CellSet domino({{0, 0}, {1, 0}});
    auto solutions = solveExactCover(rectangle(2, 2), domino, 10);
    REQUIRE(solutions.size() == 2);  // two horizontal or two vertical
    for (const CoverSolution& s : solutions) {
        CHECK(s.size() == 2);
        CHECK(isExactCover(rectangle(2, 2), domino, s));
    }
}

TEST_CASE("indivisible area yields no solutions") {
    CellSet domino({{0, 0}, {1, 0}});
    CHECK(solveExactCover(rectangle(3, 1), domino, 10).empty());
}

TEST_CASE("solution limit is honored") {
    CellSet domino({{0, 0}, {1, 0}});
    CHECK(solveExactCover(rectangle(2, 2), domino, 1).size() == 1);
}

TEST_CASE("solver is deterministic") {
    CellSet tromino({{0, 0}, {1, 0}, {0, 1}});
    auto a = solveExactCover(rectangle(4, 3), tromino, 100);
    auto b = solveExactCover(rectangle(4, 3), tromino, 100);
    REQUIRE_FALSE(a.empty());
    CHECK(a == b);
    for (const CoverSolution& s : a)
        CHECK(isExactCover(rectangle(4, 3), tromino, s));
}

TEST_CASE("the G-hexomino rectifies: 18 copies tile the 12x9 rectangle") {
    const CellSet& g = canonicalGHexomino();
    auto solutions = solveExactCover(rectangle(12, 9), g, 1);
    REQUIRE(solutions.size() == 1);
    CHECK(solutions.front().size() == 18);
    CHECK(isExactCover(rectangle(12, 9), g, solutions.front()));
}
