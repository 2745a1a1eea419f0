#include "polydither/structure.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <set>

using namespace polydither;

TEST_CASE("the structural-index universe is finite with the expected counts") {
    const StructureRegistry& reg = fixtures::registry();
    // Frozen from the first verified enumeration; the closure and geometric
    // cross-checks inside buildRegistry guarantee these are exact, not lower
    // bounds.
    CHECK(reg.classCount() == 1904);
    CHECK(reg.segmentLabels.size() == 2436);
}

TEST_CASE("signatures are sorted and ids are their positions") {
    const StructureRegistry& reg = fixtures::registry();
    for (int i = 1; i < reg.classCount(); ++i)
        CHECK(reg.classSignatures[i - 1] < reg.classSignatures[i]);
    CHECK(reg.classId(reg.classSignatures[17]) == 17);
    CHECK(reg.classId("no such signature") == -1);
}

TEST_CASE("the production table is closed and total") {
    const StructureRegistry& reg = fixtures::registry();
    std::set<int> seenAsChild;
    REQUIRE(reg.production.size() == static_cast<std::size_t>(reg.classCount()));
    for (const auto& row : reg.production) {
        REQUIRE(row.size() == 81);
        for (int child : row) {
            CHECK(child >= 0);
            CHECK(child < reg.classCount());
            seenAsChild.insert(child);
        }
    }
    // Every class is producible: no orphans, so representative contexts exist.
    CHECK(seenAsChild.size() == static_cast<std::size_t>(reg.classCount()));
}

TEST_CASE("the full id set is a fixed point of the production map") {
    const StructureRegistry& reg = fixtures::registry();
    std::vector<int> all(reg.classCount());
    for (int i = 0; i < reg.classCount(); ++i)
        all[i] = i;
    CHECK(iterateIdSet(reg, all, 1) == all);
}

TEST_CASE("symbolic child signatures agree with the production table") {
    const StructureRegistry& reg = fixtures::registry();
    for (int id : {0, 1, 500, 1000, 1903}) {
        std::vector<std::string> children =
            childSignatures(reg.shape, reg.rule, reg.classSignatures[id]);
        REQUIRE(children.size() == 81);
        for (int k = 0; k < 81; ++k)
            CHECK(reg.classId(children[k]) == reg.production[id][k]);
    }
}

TEST_CASE("every full-ring tile of a depth-2 patch is classifiable") {
    // The registry covers tiles with complete neighbor rings; tiles clipped by
    // the patch boundary (signature carries the clip mark) classify to -1.
    const StructureRegistry& reg = fixtures::registry();
    Tiling patch = subdividePatch(reg.shape, reg.rule, 2);
    std::vector<int> ids = classifyTiles(patch, reg);
    int fullRing = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        std::string sig = classifySignatureAt(patch, static_cast<int>(i));
        bool clipped = !sig.empty() && static_cast<unsigned char>(sig.back()) == 0xFF;
        if (clipped) {
            CHECK(ids[i] == -1);
        } else {
            CHECK(ids[i] >= 0);
            ++fullRing;
        }
        CHECK(patch.tiles()[i].structuralIndex == ids[i]);
    }
    // Most of the patch is interior.
    CHECK(fullRing > static_cast<int>(ids.size()) / 2);
}

TEST_CASE("classification is a pure function of the neighborhood") {
    const StructureRegistry& reg = fixtures::registry();
    Tiling patch = subdividePatch(reg.shape, reg.rule, 2);
    CHECK(classifySignatureAt(patch, 100) == classifySignatureAt(patch, 100));
}

TEST_CASE("segment labels of an interior patch are all registered") {
    const StructureRegistry& reg = fixtures::registry();
    Tiling patch = subdividePatch(reg.shape, reg.rule, 2);
    int known = 0, unknown = 0;
    for (const SegmentInstance& s : extractSegments(patch))
        (reg.labelId(s.label) >= 0 ? known : unknown) += 1;
    // Clip-boundary runs may carry labels the registry never needs; interior
    // runs must all be known.
    CHECK(known > unknown);
    CHECK(known > 1000);
}

TEST_CASE("segment runs partition tile boundaries consistently") {
    const StructureRegistry& reg = fixtures::registry();
    Tiling patch = subdividePatch(reg.shape, reg.rule, 1);
    for (const SegmentInstance& s : extractSegments(patch)) {
        CHECK(s.runEnd > s.runStart);
        CHECK(s.claimerTile >= 0);
        // The claimer must border the run: left of a vertical run, above a
        // horizontal one.
        int ox = s.vertical ? s.lineCoord - 1 : s.runStart;
        int oy = s.vertical ? s.runStart : s.lineCoord - 1;
        CHECK(patch.ownerAt(ox, oy) == s.claimerTile);
    }
}

TEST_CASE("registry serialization round-trips") {
    const StructureRegistry& reg = fixtures::registry();
    StructureRegistry again = parseRegistry(serializeRegistry(reg), reg.shape, reg.rule);
    CHECK(again.classSignatures == reg.classSignatures);
    CHECK(again.production == reg.production);
    CHECK(again.segmentLabels == reg.segmentLabels);
}

TEST_CASE("hex codec round-trips arbitrary bytes") {
    std::string bytes;
    for (int i = 0; i < 256; ++i)
        bytes.push_back(static_cast<char>(i));
    CHECK(fromHex(toHex(bytes)) == bytes);
}
