#pragma once

// Shared expensive fixtures, built once per test binary.

#include "polydither/class_geometry.hpp"
#include "polydither/optimizer.hpp"
#include "polydither/rank_table.hpp"
#include "polydither/shape_asset.hpp"
#include "polydither/structure.hpp"

#include <cstdio>
#include <cstdlib>

namespace fixtures {

inline const polydither::StructureRegistry& registry() {
    static polydither::StructureRegistry reg = polydither::buildRegistry(
        polydither::canonicalGHexomino(), polydither::gHexominoRule());
    return reg;
}

inline const polydither::GeometryTable& geometryS8() {
    static polydither::GeometryTable geo = polydither::buildGeometryTable(registry(), 8);
    return geo;
}

// Reduced-cost optimizer configuration for the unit suite; the acceptance
// binary covers the full production configuration.
inline polydither::OptimizerConfig smallConfig() {
    polydither::OptimizerConfig config;
    config.S = 4;
    config.seed = 7;
    config.areaCells = 64;
    config.borderSweeps = 1;
    config.relaxWindowPx = 96;
    config.lloydIterations = 24;
    // Opt-in build progress on stderr: POLYDITHER_TEST_PROGRESS=1.
    if (std::getenv("POLYDITHER_TEST_PROGRESS")) {
        config.progress = [](const std::string& msg) {
            std::fprintf(stderr, "[fixture] %s\n", msg.c_str());
        };
    }
    return config;
}

inline const polydither::GeometryTable& geometryS4() {
    static polydither::GeometryTable geo = polydither::buildGeometryTable(registry(), 4);
    return geo;
}

inline const polydither::RankTable& smallTable() {
    static polydither::RankTable table =
        polydither::buildRankTable(registry(), geometryS4(), smallConfig());
    return table;
}

}  // namespace fixtures
