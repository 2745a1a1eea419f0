#include "polydither/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polydither {

Tiling::Tiling(CellSet shape, std::vector<Tile> tiles)
    : shape_(std::move(shape)), tiles_(std::move(tiles)) {
    if (tiles_.empty())
        return;
    int minX = INT32_MAX, minY = INT32_MAX, maxX = INT32_MIN, maxY = INT32_MIN;
    for (const Tile& t : tiles_)
        for (const Cell& c : transformedCells(shape_, t.transform)) {
            minX = std::min(minX, c.x);
            minY = std::min(minY, c.y);
            maxX = std::max(maxX, c.x);
            maxY = std::max(maxY, c.y);
        }
    originX_ = minX;
    originY_ = minY;
    width_ = maxX - minX + 1;
    height_ = maxY - minY + 1;
    cellOwner_.assign(static_cast<std::size_t>(width_) * height_, -1);
    for (int i = 0; i < static_cast<int>(tiles_.size()); ++i)
        for (const Cell& c : transformedCells(shape_, tiles_[i].transform)) {
            std::size_t idx =
                static_cast<std::size_t>(c.y - minY) * width_ + (c.x - minX);
            if (cellOwner_[idx] != -1)
                throw std::runtime_error("tiling has overlapping tiles");
            cellOwner_[idx] = i;
        }
}

bool Tiling::isExact() const {
    std::size_t owned = 0;
    for (std::int32_t o : cellOwner_)
        if (o >= 0)
            ++owned;
    return owned == tiles_.size() * shape_.size();
}

std::vector<Tile> subdivide(const Tile& tile, const ProductionRule& rule) {
    int L = rule.linearScale;
    if (static_cast<int>(rule.children.size()) != L * L)
        throw RuleMismatch("production rule child count != L^2");
    // The scaled transform must map the rule's child region (anchored at the
    // origin with L x L blocks growing toward +x/+y) onto the scaled parent
    // footprint. Rotation/mirror move a block's min corner, so correct by the
    // bbox min of the oriented (L-1)-square.
    Transform orient{tile.transform.rotation, tile.transform.mirrored, 0, 0};
    int ax = 0, ay = 0;
    for (Cell corner : {Cell{0, 0}, Cell{L - 1, 0}, Cell{0, L - 1}, Cell{L - 1, L - 1}}) {
        Cell p = orient.apply(corner);
        ax = std::min(ax, p.x);
        ay = std::min(ay, p.y);
    }
    Transform scaled{tile.transform.rotation, tile.transform.mirrored,
                     tile.transform.tx * L - ax, tile.transform.ty * L - ay};
    std::vector<Tile> out;
    out.reserve(rule.children.size());
    for (const Transform& child : rule.children)
        out.push_back(Tile{child.then(scaled)});
    return out;
}

namespace {

struct Box {
    int x0, y0, x1, y1;  // half-open
    bool intersects(const Box& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }
};

// Recursive subdivision, pruned to the target box. `scale` is the edge length
// of the current tile's cells in leaf cell units.
void expand(const Tile& tile, const ProductionRule& rule, const CellSet& shape,
            int scale, const Box& target, std::vector<Tile>& out) {
    // Footprint bbox in leaf units.
    std::vector<Cell> cells = transformedCells(shape, tile.transform);
    Box bb{cells.front().x, cells.front().y, cells.front().x, cells.front().y};
    for (const Cell& c : cells) {
        bb.x0 = std::min(bb.x0, c.x);
        bb.y0 = std::min(bb.y0, c.y);
        bb.x1 = std::max(bb.x1, c.x);
        bb.y1 = std::max(bb.y1, c.y);
    }
    bb.x0 *= scale;
    bb.y0 *= scale;
    bb.x1 = (bb.x1 + 1) * scale;
    bb.y1 = (bb.y1 + 1) * scale;
    if (!bb.intersects(target))
        return;
    if (scale == 1) {
        // Keep only tiles whose actual cells touch the target.
        for (const Cell& c : cells)
            if (c.x >= target.x0 && c.x < target.x1 && c.y >= target.y0 && c.y < target.y1) {
                out.push_back(tile);
                return;
            }
        return;
    }
    for (const Tile& child : subdivide(tile, rule))
        expand(child, rule, shape, scale / rule.linearScale, target, out);
}

}  // namespace

Tiling coverRectangle(int widthCells, int heightCells, const CellSet& shape,
                      const ProductionRule& rule, const Transform& seedTransform,
                      int marginCells) {
    if (widthCells < 1 || heightCells < 1)
        throw std::invalid_argument("rectangle must be at least 1x1 cells");
    int L = rule.linearScale;
    int offX = seedTransform.tx, offY = seedTransform.ty;

    // Depth so the window, centered in the solid scaled block of one seed
    // cell, fits with margin on both sides for any (possibly negative)
    // offset; the window then never touches the seed's outline.
    long long maxAbsOff = std::max(std::llabs(offX), std::llabs(offY));
    long long need = maxAbsOff + marginCells +
                     static_cast<long long>(std::max(widthCells, heightCells)) + 1;
    long long block = L;
    while (block / 2 < need)
        block *= L;

    Transform orient{seedTransform.rotation, seedTransform.mirrored, 0, 0};
    Cell anchor = transformedCells(shape, orient).front();
    long long wx0 = static_cast<long long>(anchor.x) * block + block / 2 + offX;
    long long wy0 = static_cast<long long>(anchor.y) * block + block / 2 + offY;
    Box target{static_cast<int>(wx0 - marginCells), static_cast<int>(wy0 - marginCells),
               static_cast<int>(wx0 + widthCells + marginCells),
               static_cast<int>(wy0 + heightCells + marginCells)};

    std::vector<Tile> kept;
    expand(Tile{orient}, rule, shape, static_cast<int>(block), target, kept);
    // Re-base so the addressable rectangle starts at world cell (0, 0).
    for (Tile& t : kept) {
        t.transform.tx -= static_cast<int>(wx0);
        t.transform.ty -= static_cast<int>(wy0);
    }
    Tiling tiling(shape, std::move(kept));
    // The target sits inside a solid block of the seed, so coverage over the
    // rectangle (and margin) is gap-free; trip loudly if that ever breaks.
    for (int cy = 0; cy < heightCells; ++cy)
        for (int cx = 0; cx < widthCells; ++cx)
            if (tiling.ownerAt(cx, cy) < 0)
                throw std::runtime_error("coverRectangle left a gap");
    return tiling;
}

Tiling coverRectangleAuto(int widthCells, int heightCells, const CellSet& shape,
                          const ProductionRule& rule, int cellOffsetX, int cellOffsetY,
                          int marginCells) {
    Transform seed{0, false, cellOffsetX, cellOffsetY};
    return coverRectangle(widthCells, heightCells, shape, rule, seed, marginCells);
}

Tiling subdividePatch(const CellSet& shape, const ProductionRule& rule, int depth) {
    std::vector<Tile> tiles{Tile{Transform{}}};
    for (int d = 0; d < depth; ++d) {
        std::vector<Tile> next;
        next.reserve(tiles.size() * rule.children.size());
        for (const Tile& t : tiles)
            for (Tile& c : subdivide(t, rule))
                next.push_back(c);
        tiles = std::move(next);
    }
    return Tiling(shape, std::move(tiles));
}

}  // namespace polydither
