#include "polydither/class_geometry.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <set>

using namespace polydither;

TEST_CASE("every class at S=8 exposes exactly 6*S*S pixels") {
    const GeometryTable& geo = fixtures::geometryS8();
    REQUIRE(geo.S == 8);
    REQUIRE(geo.classes.size() == static_cast<std::size_t>(fixtures::registry().classCount()));
    for (int id : {0, 7, 311, 1100, 1903}) {
        const ClassGeometry& g = geo.classes[id];
        CHECK(g.classId == id);
        CHECK(g.pixels.size() == 384);
        CHECK(g.isBorder.size() == 384);
        // pixelAt is the inverse of pixels.
        for (int i = 0; i < 384; ++i)
            CHECK(g.pixelIndex(g.pixels[i].x, g.pixels[i].y) == i);
        CHECK(g.pixelIndex(-1, 0) == -1);
    }
}

TEST_CASE("border bands and interior partition the tile") {
    const GeometryTable& geo = fixtures::geometryS8();
    for (int id : {0, 7, 311, 1100, 1903}) {
        const ClassGeometry& g = geo.classes[id];
        std::set<int> inBands;
        for (const ClassSegment& cs : g.segments) {
            CHECK(cs.labelId >= 0);
            for (int pix : cs.bandPixels)
                CHECK(inBands.insert(pix).second);  // bands never overlap
        }
        int borderCount = 0;
        for (int i = 0; i < 384; ++i) {
            if (g.isBorder[i]) {
                ++borderCount;
                CHECK(inBands.count(i) == 1);
            } else {
                CHECK(inBands.count(i) == 0);
            }
        }
        CHECK(borderCount == static_cast<int>(inBands.size()));
        CHECK(g.interiorPixels.size() + inBands.size() == 384);
        // Measured invariants of the S=8 geometry, frozen as regression
        // bounds: band structure is narrow relative to the tile.
        CHECK(borderCount >= 88);
        CHECK(borderCount <= 92);
        CHECK(g.segments.size() >= 3);
        CHECK(g.segments.size() <= 6);
    }
}

TEST_CASE("each segment label appears at most once per class") {
    const GeometryTable& geo = fixtures::geometryS8();
    for (const ClassGeometry& g : geo.classes) {
        std::set<int> labels;
        for (const ClassSegment& cs : g.segments)
            CHECK(labels.insert(cs.labelId).second);
    }
}

TEST_CASE("label bands agree across all claiming classes") {
    const GeometryTable& geo = fixtures::geometryS8();
    const StructureRegistry& reg = fixtures::registry();
    REQUIRE(geo.labels.size() == reg.segmentLabels.size());
    std::size_t totalClaims = 0;
    for (std::size_t lbl = 0; lbl < geo.labels.size(); ++lbl) {
        const LabelBand& band = geo.labels[lbl];
        CHECK_FALSE(band.claimingClasses.empty());
        CHECK_FALSE(band.bandPixels.empty());
        totalClaims += band.claimingClasses.size();
        // Band pixels are sorted (y, x) and duplicate-free.
        for (std::size_t i = 1; i < band.bandPixels.size(); ++i) {
            const Pixel &a = band.bandPixels[i - 1], &b = band.bandPixels[i];
            CHECK(std::tie(a.y, a.x) < std::tie(b.y, b.x));
        }
        // Each claimer's matching segment has the same band size, in order.
        for (int cls : band.claimingClasses) {
            bool found = false;
            for (const ClassSegment& cs : geo.classes[cls].segments)
                if (cs.labelId == static_cast<int>(lbl)) {
                    found = true;
                    CHECK(cs.bandPixels.size() == band.bandPixels.size());
                    CHECK(cs.vertical == band.vertical);
                }
            CHECK(found);
        }
    }
    // Every per-class segment is accounted for by exactly one claim.
    std::size_t totalSegments = 0;
    for (const ClassGeometry& g : geo.classes)
        totalSegments += g.segments.size();
    CHECK(totalClaims == totalSegments);
}

TEST_CASE("geometry is pure: rebuilding one class matches the table") {
    const GeometryTable& geo = fixtures::geometryS8();
    ClassGeometry again = buildClassGeometry(fixtures::registry(), 311, 8);
    CHECK(again.pixels == geo.classes[311].pixels);
    CHECK(again.interiorPixels == geo.classes[311].interiorPixels);
    CHECK(again.segments.size() == geo.classes[311].segments.size());
}

TEST_CASE("geometry scales with S") {
    const GeometryTable& geo4 = fixtures::geometryS4();
    CHECK(geo4.S == 4);
    for (const ClassGeometry& g : geo4.classes)
        CHECK(g.pixels.size() == 96);
}
