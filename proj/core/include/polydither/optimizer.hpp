#pragma once

#include "polydither/class_geometry.hpp"
#include "polydither/rank_table.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace polydither {

class OptimizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OptimizerConfig {
    int S = 8;
    double d0 = -1.0;  // initial dot density; negative = default 1/S
    std::uint64_t seed = 0;
    double sigma = 1.5;          // Gaussian sigma, px, for cluster/void scoring
    int areaCells = 162;         // border-init working area edge length, cells
    int borderSweeps = 2;        // max refinement sweeps over all labels
    int relaxWindowPx = 192;     // Lloyd window edge around a representative
    int lloydIterations = 40;    // per-relaxation iteration cap
    bool clusterByMaxResponse = true;  // down phase removes the max-response dot

    // Optional progress sink (stage names and periodic counters); the
    // optimization runs for minutes, so callers usually wire this to stderr.
    std::function<void(const std::string&)> progress;

    double density() const { return d0 < 0 ? 1.0 / S : d0; }
    int levels() const { return 6 * S * S; }
    int initialCount() const {
        return static_cast<int>(density() * levels() + 0.5);
    }
};

// Stage 1: one relaxed dot pattern per segment label (claimer-local band
// coordinates), produced on a large tiled working area with already-processed
// labels stamped fixed.
struct BorderPatterns {
    std::vector<std::vector<Pixel>> perLabel;  // indexed by label id
    int sweepsRun = 0;
    int areaCellsUsed = 0;
};

BorderPatterns initBorders(const StructureRegistry& registry, const GeometryTable& geometry,
                           const OptimizerConfig& config);

// Stage 2: per-class interior dots (tile-local coordinates), relaxed against
// the class's own border patterns and the neighbor-claimed bands incident to
// it. Tile dot count is exactly initialCount() per class.
std::vector<std::vector<Pixel>> initInteriors(const StructureRegistry& registry,
                                              const GeometryTable& geometry,
                                              const BorderPatterns& borders,
                                              const OptimizerConfig& config);

// Stage 3: consecutive ranking (down from the initial density, then up to
// full coverage) with shared-segment coordination. Runs stages 1 and 2.
RankTable buildRankTable(const StructureRegistry& registry, const GeometryTable& geometry,
                         const OptimizerConfig& config);

// As above but reusing precomputed stage-1/2 results (tests, tooling).
RankTable rankFromInitial(const StructureRegistry& registry, const GeometryTable& geometry,
                          const BorderPatterns& borders,
                          const std::vector<std::vector<Pixel>>& interiors,
                          const OptimizerConfig& config);

}  // namespace polydither
