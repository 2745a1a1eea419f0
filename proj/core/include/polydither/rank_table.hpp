#pragma once

#include "polydither/class_geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace polydither {

class RankTableInvalid : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Per-class threshold ranks: perClass[id][pixelIdx] is the rank (0..6*S*S-1)
// of that tile-local pixel; pixel indices follow ClassGeometry's (y, x)
// order. perSegment mirrors the shared band ranks per segment label, in the
// label band's (y, x) order; claimers agree with it by construction, and the
// loader re-checks.
struct RankTable {
    int S = 0;
    double d0 = 0.0;
    std::uint64_t seed = 0;
    std::string shapeName;
    std::string ruleHash;
    std::vector<std::vector<int>> perClass;
    std::vector<std::vector<int>> perSegment;  // indexed by label id

    int levels() const { return 6 * S * S; }
    double thresholdFor(int rank) const { return (rank + 0.5) / levels(); }
};

std::string serializeRankTable(const RankTable& table, const StructureRegistry& registry);
// Validates: header, per-class rank permutations, segment/claimer agreement.
RankTable parseRankTable(const std::string& text, const StructureRegistry& registry,
                         const GeometryTable& geometry);
void saveRankTable(const RankTable& table, const StructureRegistry& registry,
                   const std::string& path);
RankTable loadRankTable(const std::string& path, const StructureRegistry& registry,
                        const GeometryTable& geometry);

// Consistency checks shared by the builder and the loader; throws
// RankTableInvalid with a specific message.
void validateRankTable(const RankTable& table, const StructureRegistry& registry,
                       const GeometryTable& geometry);

}  // namespace polydither
