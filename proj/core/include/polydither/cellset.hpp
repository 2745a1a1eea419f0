#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace polydither {

struct Cell {
    int x = 0;
    int y = 0;
    auto operator<=>(const Cell&) const = default;
};

// A polyomino: edge-connected set of unit cells, normalized so min x = min y = 0.
// Cells are kept sorted (y-major, then x) so equality and hashing are canonical.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(std::vector<Cell> cells);

    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    bool contains(Cell c) const;

    int width() const { return width_; }
    int height() const { return height_; }

    bool operator==(const CellSet& other) const { return cells_ == other.cells_; }
    bool operator<(const CellSet& other) const { return cells_ < other.cells_; }

    // Scales every cell to an LxL block of cells.
    CellSet scaled(int factor) const;

    std::string toString() const;

private:
    std::vector<Cell> cells_;
    int width_ = 0;
    int height_ = 0;
};

// Rigid transform on the cell lattice: optional mirror (x -> -x), then
// `rotation` quarter-turns CCW, then translation.
struct Transform {
    int rotation = 0;       // 0..3 quarter-turns CCW
    bool mirrored = false;
    int tx = 0;
    int ty = 0;

    auto operator<=>(const Transform&) const = default;

    // Orientation code 0..7: rotation + 4 * mirrored.
    int orientationCode() const { return rotation + (mirrored ? 4 : 0); }

    Cell apply(Cell c) const;
    Transform then(const Transform& outer) const;  // outer ∘ this
    Transform inverse() const;
};

// World-space cells of a placed shape, sorted y-major. Unlike CellSet this
// keeps the translation.
std::vector<Cell> transformedCells(const CellSet& shape, const Transform& t);

// Applies t and re-normalizes (CellSet invariant). Cardinality preserved.
CellSet applyTransform(const CellSet& shape, const Transform& t);

// The distinct orientations of a shape (1, 2, 4 or 8), each normalized, paired
// with a representative orientation code. Deterministic order.
std::vector<std::pair<int, CellSet>> distinctOrientations(const CellSet& shape);

class AssetInvalid : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parses the plain-text shape asset format: one "x y" pair per line,
// '#' starts a comment. Validates connectivity and normalizes.
CellSet parseShapeAsset(const std::string& text);
CellSet loadShapeAsset(const std::string& path);

}  // namespace polydither
