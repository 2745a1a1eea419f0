#include "polydither/rank_table.hpp"

#include "fixtures.hpp"

#include <doctest.h>

using namespace polydither;

TEST_CASE("rank table serialization round-trips byte-exactly") {
    const RankTable& table = fixtures::smallTable();
    const StructureRegistry& reg = fixtures::registry();
    std::string text = serializeRankTable(table, reg);
    RankTable again = parseRankTable(text, reg, fixtures::geometryS4());
    CHECK(again.S == table.S);
    CHECK(again.d0 == table.d0);
    CHECK(again.seed == table.seed);
    CHECK(again.ruleHash == table.ruleHash);
    CHECK(again.perClass == table.perClass);
    CHECK(again.perSegment == table.perSegment);
    CHECK(serializeRankTable(again, reg) == text);
}

TEST_CASE("threshold normalization is strictly inside (0, 1) and increasing") {
    const RankTable& table = fixtures::smallTable();
    double prev = 0.0;
    for (int r = 0; r < table.levels(); ++r) {
        double t = table.thresholdFor(r);
        CHECK(t > 0.0);
        CHECK(t < 1.0);
        CHECK(t > prev);
        prev = t;
    }
}

TEST_CASE("validation rejects corrupted tables") {
    const StructureRegistry& reg = fixtures::registry();
    const GeometryTable& geo = fixtures::geometryS4();

    SUBCASE("duplicate rank breaks the permutation") {
        RankTable bad = fixtures::smallTable();
        bad.perClass[5][0] = bad.perClass[5][1];
        CHECK_THROWS_AS(validateRankTable(bad, reg, geo), RankTableInvalid);
    }
    SUBCASE("segment disagreement between claimers") {
        RankTable bad = fixtures::smallTable();
        // Desynchronize one label's mirror copy.
        bad.perSegment[0][0] = (bad.perSegment[0][0] + 1) % bad.levels();
        CHECK_THROWS_AS(validateRankTable(bad, reg, geo), RankTableInvalid);
    }
    SUBCASE("wrong class count") {
        RankTable bad = fixtures::smallTable();
        bad.perClass.pop_back();
        CHECK_THROWS_AS(validateRankTable(bad, reg, geo), RankTableInvalid);
    }
}

TEST_CASE("parser rejects malformed input") {
    const StructureRegistry& reg = fixtures::registry();
    const GeometryTable& geo = fixtures::geometryS4();
    CHECK_THROWS(parseRankTable("garbage", reg, geo));
    std::string text = serializeRankTable(fixtures::smallTable(), reg);
    text.resize(text.size() / 2);  // truncated file
    CHECK_THROWS(parseRankTable(text, reg, geo));
}
