#pragma once

#include "polydither/cellset.hpp"
#include "polydither/production_rule.hpp"

#include <cstdint>
#include <vector>

namespace polydither {

class RuleMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tile {
    Transform transform;       // world cell units
    int structuralIndex = -1;  // assigned by the structure module, -1 = unset
};

// Gap-free, overlap-free placement of transformed copies of one shape over a
// region of the cell lattice. cellOwner covers the bounding window; -1 marks
// cells outside every tile.
class Tiling {
public:
    Tiling() = default;
    Tiling(CellSet shape, std::vector<Tile> tiles);

    const CellSet& shape() const { return shape_; }
    const std::vector<Tile>& tiles() const { return tiles_; }
    std::vector<Tile>& tiles() { return tiles_; }

    int originX() const { return originX_; }
    int originY() const { return originY_; }
    int width() const { return width_; }
    int height() const { return height_; }

    // World cell coordinates. Returns -1 outside every tile.
    int ownerAt(int cx, int cy) const {
        int ix = cx - originX_, iy = cy - originY_;
        if (ix < 0 || iy < 0 || ix >= width_ || iy >= height_)
            return -1;
        return cellOwner_[static_cast<std::size_t>(iy) * width_ + ix];
    }

    // Exhaustive gap/overlap check over the tiles' union.
    bool isExact() const;

private:
    CellSet shape_;
    std::vector<Tile> tiles_;
    std::vector<std::int32_t> cellOwner_;
    int originX_ = 0, originY_ = 0, width_ = 0, height_ = 0;
};

// One subdivision step: the parent tile's footprint at L-times resolution,
// tiled by L*L children. Child transforms are the rule's children composed
// with the (scale-adjusted) parent transform.
std::vector<Tile> subdivide(const Tile& tile, const ProductionRule& rule);

// Covers [0,widthCells)x[0,heightCells) by recursively subdividing one big
// seed polyomino and pruning branches that cannot reach the rectangle (plus a
// margin so every kept tile has its full neighbor ring present). The returned
// tiling's addressable rectangle starts at world cell (0,0).
Tiling coverRectangle(int widthCells, int heightCells, const CellSet& shape,
                      const ProductionRule& rule, const Transform& seedTransform,
                      int marginCells = 8);

// Seed chooser used by coverRectangle callers: places the rectangle (shifted
// by cellOffset) inside a solid scaled cell block of the seed polyomino, so
// no kept tile ever touches the seed's outer boundary.
Tiling coverRectangleAuto(int widthCells, int heightCells, const CellSet& shape,
                          const ProductionRule& rule, int cellOffsetX = 0,
                          int cellOffsetY = 0, int marginCells = 8);

// Depth-fold subdivision of a single seed tile; the workhorse behind
// structural-index enumeration. Coordinates are in leaf cell units.
Tiling subdividePatch(const CellSet& shape, const ProductionRule& rule, int depth);

}  // namespace polydither
