#pragma once

#include "polydither/tiling.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polydither {

class NonDeterministicProduction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Label of a lattice point: one mark per quadrant cell around the point, in
// the fixed order NW, NE, SW, SE. A mark records the owning tile's
// orientation code and which shape cell touches the point; the quadrant slot
// itself encodes the touching corner. Absent marks (outside the tiling) are
// kept so boundary configurations stay distinguishable.
struct VertexLabel {
    struct Mark {
        bool present = false;
        std::uint8_t orient = 0;   // 0..7
        std::uint8_t cellIdx = 0;  // index into the shape's canonical cell order
        auto operator<=>(const Mark&) const = default;
    };
    std::array<Mark, 4> quadrant;

    auto operator<=>(const VertexLabel&) const = default;
    std::string encode() const;  // canonical bytes
};

// Label of the lattice point at cell corner (cx, cy) (world cell coords).
VertexLabel labelVertexAt(const Tiling& tiling, int cx, int cy);

// Labels for every lattice point touched by at least one tile.
std::map<Cell, VertexLabel> labelVertices(const Tiling& tiling);

// A maximal straight run of tile boundary between two labeled vertices,
// shared by a constant owner pair. Claimed by the tile left of a vertical
// run / above a horizontal run.
struct SegmentInstance {
    std::string label;  // canonical bytes: axis byte + endpoint labels
    int claimerTile = -1;
    bool vertical = false;
    int lineCoord = 0;             // cell x of a vertical line, cell y of a horizontal one
    int runStart = 0, runEnd = 0;  // [start, end) along the line, cell units
};

// Partitions the tile-boundary network into labeled maximal runs.
std::vector<SegmentInstance> extractSegments(const Tiling& tiling);

// Structural-index signature: own orientation plus the relative placement of
// every tile touching the tile's cells within Chebyshev distance 1. Canonical
// byte string; hex-encoded in files.
std::string classifySignatureAt(const Tiling& tiling, int tileIdx);

std::string toHex(const std::string& bytes);
std::string fromHex(const std::string& hex);

// The discovered finite id universe plus the structural-indices production
// table (id -> L^2 child ids, in the rule's child order).
struct StructureRegistry {
    CellSet shape;
    ProductionRule rule;
    std::vector<std::string> classSignatures;  // sorted; id = position
    std::vector<std::vector<int>> production;
    std::vector<std::string> segmentLabels;  // sorted; label id = position

    int classId(const std::string& signature) const;
    int labelId(const std::string& label) const;
    int classCount() const { return static_cast<int>(classSignatures.size()); }
};

// Enumerates signatures geometrically at `seedDepth` and closes the set under
// symbolic subdivision. Throws NonDeterministicProduction if a geometric
// cross-check finds two representatives of one id with different child ids.
StructureRegistry buildRegistry(const CellSet& shape, const ProductionRule& rule,
                                int seedDepth = 2);

// Per-tile ids for a concrete tiling (also fills tile.structuralIndex).
// Tiles whose signature is unknown to the registry get -1.
std::vector<int> classifyTiles(Tiling& tiling, const StructureRegistry& registry);

// Decoded form of a signature: the local neighborhood as concrete transforms.
struct Neighborhood {
    Transform own;                     // origin at bbox min (0,0)
    std::vector<Transform> neighbors;  // world cell units relative to own origin
    bool clipped = false;              // ring incomplete (patch boundary)
};
Neighborhood decodeSignature(const CellSet& shape, const std::string& signature);

// The 81 child signatures of a parent signature, derived by subdividing the
// parent together with its ring. Pure function of the signature.
std::vector<std::string> childSignatures(const CellSet& shape, const ProductionRule& rule,
                                         const std::string& signature);

// Set of ids present after iterating the production table `steps` times from
// the given id set (used by the finiteness fixed-point checks).
std::vector<int> iterateIdSet(const StructureRegistry& registry, std::vector<int> ids,
                              int steps);

// Registry file: `id <int> signature <hex>` lines, `segment <int> label <hex>`
// lines, production lines `production <id>: id1 ... id81`.
std::string serializeRegistry(const StructureRegistry& registry);
StructureRegistry parseRegistry(const std::string& text, const CellSet& shape,
                                const ProductionRule& rule);
void saveRegistry(const StructureRegistry& registry, const std::string& path);
StructureRegistry loadRegistry(const std::string& path, const CellSet& shape,
                               const ProductionRule& rule);

}  // namespace polydither
