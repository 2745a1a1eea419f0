#include "polydither/class_geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace polydither {

ClassGeometry buildClassGeometry(const StructureRegistry& registry, int classId, int S) {
    if (S < 4)
        throw std::invalid_argument("pixel scale S must be at least 4");
    const CellSet& shape = registry.shape;
    const std::string& sig = registry.classSignatures.at(classId);
    Neighborhood n = decodeSignature(shape, sig);

    ClassGeometry g;
    g.classId = classId;
    g.orientCode = n.own.orientationCode();
    g.S = S;
    g.cells = transformedCells(shape, n.own);  // bbox min is (0,0) by decode contract
    for (const Cell& c : g.cells) {
        g.cellW = std::max(g.cellW, c.x + 1);
        g.cellH = std::max(g.cellH, c.y + 1);
    }

    int pw = g.cellW * S, ph = g.cellH * S;
    g.pixelAt.assign(static_cast<std::size_t>(pw) * ph, -1);
    for (int py = 0; py < ph; ++py)
        for (int px = 0; px < pw; ++px) {
            Cell c{px / S, py / S};
            if (std::find(g.cells.begin(), g.cells.end(), c) != g.cells.end()) {
                g.pixelAt[static_cast<std::size_t>(py) * pw + px] =
                    static_cast<int>(g.pixels.size());
                g.pixels.push_back({px, py});
            }
        }
    g.isBorder.assign(g.pixels.size(), 0);

    // Claimed segments, from the signature's own local patch. Tile 0 is the
    // class instance; its local frame equals world coords here.
    std::vector<Tile> tiles{Tile{n.own}};
    for (const Transform& nb : n.neighbors)
        tiles.push_back(Tile{nb});
    Tiling local(shape, std::move(tiles));
    std::vector<SegmentInstance> segs;
    for (SegmentInstance& s : extractSegments(local))
        if (s.claimerTile == 0)
            segs.push_back(std::move(s));
    // Vertical bands first: they win corner overlaps with horizontal bands.
    std::stable_partition(segs.begin(), segs.end(),
                          [](const SegmentInstance& s) { return s.vertical; });

    for (const SegmentInstance& s : segs) {
        int labelId = registry.labelId(s.label);
        if (labelId < 0)
            throw std::logic_error("claimed segment label missing from registry");
        ClassSegment cs;
        cs.labelId = labelId;
        cs.vertical = s.vertical;
        auto claim = [&](int px, int py) {
            int idx = g.pixelIndex(px, py);
            if (idx < 0)
                throw std::logic_error("segment band pixel escapes its claiming tile");
            if (g.isBorder[idx])
                return;  // corner overlap, earlier (vertical) band keeps it
            g.isBorder[idx] = 1;
            cs.bandPixels.push_back(idx);
        };
        if (s.vertical) {
            for (int py = s.runStart * S; py < s.runEnd * S; ++py)
                for (int px = s.lineCoord * S - 2; px < s.lineCoord * S; ++px)
                    claim(px, py);
        } else {
            for (int py = s.lineCoord * S - 2; py < s.lineCoord * S; ++py)
                for (int px = s.runStart * S; px < s.runEnd * S; ++px)
                    claim(px, py);
        }
        std::sort(cs.bandPixels.begin(), cs.bandPixels.end());
        g.segments.push_back(std::move(cs));
    }

    for (std::size_t i = 0; i < g.segments.size(); ++i)
        for (std::size_t j = i + 1; j < g.segments.size(); ++j)
            if (g.segments[i].labelId == g.segments[j].labelId)
                throw std::logic_error("one class claims the same segment label twice");

    for (int i = 0; i < static_cast<int>(g.pixels.size()); ++i)
        if (!g.isBorder[i])
            g.interiorPixels.push_back(i);
    return g;
}

GeometryTable buildGeometryTable(const StructureRegistry& registry, int S) {
    GeometryTable table;
    table.S = S;
    table.labels.resize(registry.segmentLabels.size());
    for (int id = 0; id < registry.classCount(); ++id) {
        ClassGeometry g = buildClassGeometry(registry, id, S);
        for (const ClassSegment& cs : g.segments) {
            LabelBand& band = table.labels[cs.labelId];
            std::vector<Pixel> coords;
            coords.reserve(cs.bandPixels.size());
            for (int idx : cs.bandPixels)
                coords.push_back(g.pixels[idx]);
            std::sort(coords.begin(), coords.end(),
                      [](Pixel a, Pixel b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
            if (band.claimingClasses.empty()) {
                band.bandPixels = std::move(coords);
                band.vertical = cs.vertical;
            } else if (band.bandPixels != coords || band.vertical != cs.vertical) {
                throw std::logic_error(
                    "claimers of one segment label disagree on band geometry");
            }
            band.claimingClasses.push_back(id);
        }
        table.classes.push_back(std::move(g));
    }
    for (std::size_t i = 0; i < table.labels.size(); ++i)
        if (table.labels[i].claimingClasses.empty())
            throw std::logic_error("registry segment label claimed by no class");
    return table;
}

}  // namespace polydither
