#include "polydither/vnc.hpp"

#include "polydither/spectrum.hpp"

#include <doctest.h>

#include <algorithm>

using namespace polydither;

TEST_CASE("the threshold matrix is a permutation of 0..n^2-1") {
    VncMatrix m = voidAndClusterMatrix(16, 0.1, 1.5, 3);
    REQUIRE(m.thresholds.size() == 256);
    std::vector<int> sorted = m.thresholds;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 256; ++i)
        CHECK(sorted[i] == i);
}

TEST_CASE("construction is deterministic in the seed") {
    VncMatrix a = voidAndClusterMatrix(16, 0.1, 1.5, 3);
    VncMatrix b = voidAndClusterMatrix(16, 0.1, 1.5, 3);
    VncMatrix c = voidAndClusterMatrix(16, 0.1, 1.5, 4);
    CHECK(a.thresholds == b.thresholds);
    CHECK(a.thresholds != c.thresholds);
}

TEST_CASE("tiled thresholding is tone-exact per matrix period") {
    VncMatrix m = voidAndClusterMatrix(16, 0.1, 1.5, 3);
    for (double g : {6.0 / 256, 32.0 / 256, 200.0 / 256}) {
        BinaryImage out = vncDitherConstant(m, g, 64, 64);
        int expectedPerTile = 0;
        for (int t = 0; t < 256; ++t)
            expectedPerTile += g < (t + 0.5) / 256.0;
        CHECK(static_cast<int>(out.onesCount()) == expectedPerTile * 16);
    }
}

TEST_CASE("stacking is monotone") {
    VncMatrix m = voidAndClusterMatrix(16, 0.1, 1.5, 7);
    BinaryImage prev = vncDitherConstant(m, 1.0, 16, 16);
    for (int k = 255; k >= 0; k -= 5) {
        BinaryImage cur = vncDitherConstant(m, k / 255.0, 16, 16);
        for (std::size_t i = 0; i < cur.pixels.size(); ++i)
            CHECK(cur.pixels[i] >= prev.pixels[i]);
        prev = std::move(cur);
    }
}

TEST_CASE("tiling a periodic matrix leaves discrete spectral peaks") {
    VncMatrix m = voidAndClusterMatrix(32, 0.1, 1.5, 5);
    std::vector<BinaryImage> patches{vncDitherConstant(m, 6.0 / 256, 256, 256)};
    SpectrumEstimate spec = estimateSpectrum(patches);
    std::vector<double> scores = radialPeakScores(spec);
    double maxScore = *std::max_element(scores.begin(), scores.end());
    CHECK(maxScore > 3.0);
}

TEST_CASE("bad parameters are rejected") {
    CHECK_THROWS(voidAndClusterMatrix(1, 0.1, 1.5, 0));
    CHECK_THROWS(voidAndClusterMatrix(16, 0.0, 1.5, 0));
    CHECK_THROWS(voidAndClusterMatrix(16, 0.6, 1.5, 0));
}
