#pragma once

#include "polydither/structure.hpp"

#include <vector>

namespace polydither {

struct Pixel {
    int x = 0;
    int y = 0;
    auto operator<=>(const Pixel&) const = default;
};

// One claimed border segment of a class, at pixel scale S. Band pixels are
// tile-local indices into ClassGeometry::pixels.
struct ClassSegment {
    int labelId = -1;
    bool vertical = false;
    std::vector<int> bandPixels;
};

// S-dependent pixel layout of one structural index: the tile's 6*S*S pixels
// in a world-aligned local frame (origin at the footprint bbox min), split
// into claimed border bands and interior.
struct ClassGeometry {
    int classId = -1;
    int orientCode = 0;
    int S = 0;
    std::vector<Cell> cells;  // normalized footprint, origin (0,0)
    int cellW = 0, cellH = 0;

    std::vector<Pixel> pixels;   // sorted (y, x); size 6*S*S
    std::vector<int> pixelAt;    // (cellW*S x cellH*S) grid -> pixel index or -1
    std::vector<ClassSegment> segments;
    std::vector<std::uint8_t> isBorder;  // per pixel
    std::vector<int> interiorPixels;

    int pixelIndex(int px, int py) const {
        if (px < 0 || py < 0 || px >= cellW * S || py >= cellH * S)
            return -1;
        return pixelAt[static_cast<std::size_t>(py) * cellW * S + px];
    }
};

// borderMask / segment-band derivation for one class. Pure function of the
// class signature; identical for every instance.
ClassGeometry buildClassGeometry(const StructureRegistry& registry, int classId, int S);

// Geometry for every class, plus the per-label band layout in claimer-local
// coordinates with its claiming classes. Verifies that all claimers of a
// label agree on the band layout.
struct LabelBand {
    std::vector<Pixel> bandPixels;        // claimer-local coords, sorted (y, x)
    std::vector<int> claimingClasses;     // class ids
    bool vertical = false;
};

struct GeometryTable {
    int S = 0;
    std::vector<ClassGeometry> classes;  // indexed by class id
    std::vector<LabelBand> labels;       // indexed by label id
};

GeometryTable buildGeometryTable(const StructureRegistry& registry, int S);

}  // namespace polydither
