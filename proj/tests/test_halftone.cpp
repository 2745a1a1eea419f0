#include "polydither/halftone.hpp"

#include "fixtures.hpp"

#include <doctest.h>

using namespace polydither;

namespace {

// Black count of `image` inside every tile that lies completely inside the
// view, recomputed from the same tiling the view builder uses (offset 0).
std::vector<int> completeTileBlackCounts(const BinaryImage& image, int S) {
    const StructureRegistry& reg = fixtures::registry();
    int cellsW = (image.width + S - 1) / S, cellsH = (image.height + S - 1) / S;
    Tiling tiling = coverRectangleAuto(cellsW, cellsH, reg.shape, reg.rule);
    std::vector<int> counts;
    for (const Tile& tile : tiling.tiles()) {
        bool complete = true;
        int black = 0;
        for (Cell c : transformedCells(reg.shape, tile.transform)) {
            if (c.x < 0 || c.y < 0 || (c.x + 1) * S > image.width ||
                (c.y + 1) * S > image.height) {
                complete = false;
                break;
            }
            for (int dy = 0; dy < S; ++dy)
                for (int dx = 0; dx < S; ++dx)
                    black += image.at(c.x * S + dx, c.y * S + dy);
        }
        if (complete)
            counts.push_back(black);
    }
    return counts;
}

ThresholdView view96() {
    return buildThresholdView(96, 96, fixtures::registry(), fixtures::geometryS4(),
                              fixtures::smallTable());
}

}  // namespace

TEST_CASE("threshold views are deterministic at a fixed size and offset") {
    ThresholdView a = view96(), b = view96();
    CHECK(a.ranks == b.ranks);
    ThresholdView c = buildThresholdView(96, 96, fixtures::registry(),
                                         fixtures::geometryS4(), fixtures::smallTable(),
                                         123, -45);
    CHECK(c.ranks.size() == a.ranks.size());
}

TEST_CASE("view ranks stay below the level count") {
    ThresholdView v = view96();
    CHECK(v.levels() == 96);
    for (int r : v.ranks)
        CHECK(r < 96);
}

TEST_CASE("constant input yields the exact same black count in every complete tile") {
    ThresholdView v = view96();
    const int levels = v.levels();
    for (double g : {1.0 / 256, 6.0 / 256, 32.0 / 256, 128.0 / 256, 250.0 / 256}) {
        BinaryImage out = ditherConstant(g, v);
        int expected = 0;
        for (int r = 0; r < levels; ++r)
            expected += (r + 0.5) / levels > g;
        std::vector<int> counts = completeTileBlackCounts(out, v.S);
        REQUIRE_FALSE(counts.empty());
        for (int c : counts)
            CHECK(c == expected);
    }
}

TEST_CASE("tone stacking is monotone: dots only appear as the input darkens") {
    ThresholdView v = view96();
    BinaryImage prev = ditherConstant(1.0, v);  // no dots
    for (int k = 255; k >= 0; --k) {
        BinaryImage cur = ditherConstant(k / 255.0, v);
        for (std::size_t i = 0; i < cur.pixels.size(); ++i)
            CHECK(cur.pixels[i] >= prev.pixels[i]);
        prev = std::move(cur);
    }
}

TEST_CASE("dither extremes pass through") {
    ThresholdView v = view96();
    GrayImage black(96, 96), white(96, 96);
    for (auto& p : white.pixels)
        p = 255;
    CHECK(dither(black, v).onesCount() == 96u * 96u);
    CHECK(dither(white, v).onesCount() == 0u);
}

TEST_CASE("the ramp darkens monotonically from right to left") {
    ThresholdView v = buildThresholdView(384, 48, fixtures::registry(),
                                         fixtures::geometryS4(), fixtures::smallTable());
    BinaryImage ramp = ditherRamp(v);
    // Column black counts, averaged over cell-sized bins, never increase.
    const int bin = 48;
    int prev = bin * 48 + 1;
    for (int x0 = 0; x0 < 384; x0 += bin) {
        int black = 0;
        for (int y = 0; y < 48; ++y)
            for (int x = x0; x < x0 + bin; ++x)
                black += ramp.at(x, y);
        CHECK(black <= prev);
        prev = black;
    }
}

TEST_CASE("mismatched image and view sizes are rejected") {
    ThresholdView v = view96();
    GrayImage wrong(10, 10);
    CHECK_THROWS(dither(wrong, v));
}
