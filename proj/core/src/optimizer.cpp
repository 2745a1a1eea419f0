#include "polydither/optimizer.hpp"

#include "polydither/dot_field.hpp"
#include "polydither/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace polydither {

namespace {

Cell cellsBboxMin(const std::vector<Cell>& cells) {
    Cell m = cells.front();
    for (const Cell& c : cells) {
        m.x = std::min(m.x, c.x);
        m.y = std::min(m.y, c.y);
    }
    return m;
}

// A concrete claimed-segment occurrence inside a working tiling, resolved to
// the claimer's pixel frame.
struct AreaInstance {
    int labelId = -1;
    int claimerTile = -1;
    int originPxX = 0, originPxY = 0;  // claimer bbox-min, px
};

std::vector<std::vector<AreaInstance>> collectInstances(const Tiling& tiling,
                                                        const StructureRegistry& registry,
                                                        const GeometryTable& geometry,
                                                        int px0, int py0, int px1,
                                                        int py1) {
    int S = geometry.S;
    std::vector<std::vector<AreaInstance>> byLabel(registry.segmentLabels.size());
    for (const SegmentInstance& s : extractSegments(tiling)) {
        int lbl = registry.labelId(s.label);
        if (lbl < 0)
            continue;  // boundary-incomplete label
        const std::vector<Cell> cells =
            transformedCells(tiling.shape(), tiling.tiles()[s.claimerTile].transform);
        Cell o = cellsBboxMin(cells);
        AreaInstance inst{lbl, s.claimerTile, o.x * S, o.y * S};
        bool inField = true;
        for (const Pixel& p : geometry.labels[lbl].bandPixels) {
            int px = inst.originPxX + p.x, py = inst.originPxY + p.y;
            if (px < px0 || py < py0 || px >= px1 || py >= py1) {
                inField = false;
                break;
            }
        }
        if (inField)
            byLabel[lbl].push_back(inst);
    }
    return byLabel;
}

// Fallback working patch for labels too rare to show up in the main area:
// the first claimer's parent context, subdivided once. The label's claimed
// band at the central child is relaxed inside this bounded patch instead.
struct LabelContext {
    Tiling tiling;  // child-scale cells
    std::vector<std::vector<AreaInstance>> instances;
    AreaInstance central;
    int offX = 0, offY = 0;  // world px of field pixel (0, 0)
    int fw = 0, fh = 0;
    std::vector<Pixel> floating;  // carried across sweeps, field coords
};

LabelContext buildLabelContext(const StructureRegistry& registry,
                               const GeometryTable& geometry, int label) {
    int claimer = geometry.labels[label].claimingClasses.front();
    int parent = -1, slot = -1;
    for (int p = 0; p < registry.classCount() && parent < 0; ++p)
        for (int s = 0; s < static_cast<int>(registry.production[p].size()); ++s)
            if (registry.production[p][s] == claimer) {
                parent = p;
                slot = s;
                break;
            }
    if (parent < 0)
        throw OptimizeError("label claimer has no parent in the production table");

    Neighborhood n = decodeSignature(registry.shape, registry.classSignatures[parent]);
    std::vector<Tile> children;
    for (Tile& t : subdivide(Tile{n.own}, registry.rule))
        children.push_back(t);
    for (const Transform& nb : n.neighbors)
        for (Tile& t : subdivide(Tile{nb}, registry.rule))
            children.push_back(t);

    LabelContext ctx;
    ctx.tiling = Tiling(registry.shape, std::move(children));
    int S = geometry.S;
    ctx.offX = ctx.tiling.originX() * S;
    ctx.offY = ctx.tiling.originY() * S;
    ctx.fw = ctx.tiling.width() * S;
    ctx.fh = ctx.tiling.height() * S;
    ctx.instances = collectInstances(ctx.tiling, registry, geometry, ctx.offX, ctx.offY,
                                     ctx.offX + ctx.fw, ctx.offY + ctx.fh);
    for (const AreaInstance& inst : ctx.instances[label])
        if (inst.claimerTile == slot) {
            ctx.central = inst;
            return ctx;
        }
    throw OptimizeError("label context lost the label it was built for");
}

void topUp(DotField& field, std::size_t target, Rng& rng) {
    while (field.count() < target) {
        int x = rng.intBelow(field.width());
        int y = rng.intBelow(field.height());
        if (!field.occupied(x, y))
            field.addDot(x, y, false);
    }
    while (field.count() > target) {
        // Drop the highest-index floating dot; deterministic and cheap.
        int idx = static_cast<int>(field.count()) - 1;
        while (idx >= 0 && field.dots()[idx].fixed)
            --idx;
        if (idx < 0)
            throw OptimizeError("cannot reduce dot count: all dots fixed");
        field.removeDot(idx);
    }
}

}  // namespace

BorderPatterns initBorders(const StructureRegistry& registry, const GeometryTable& geometry,
                           const OptimizerConfig& config) {
    const int S = config.S;
    const int labelCount = static_cast<int>(registry.segmentLabels.size());

    auto note = [&](const std::string& s) {
        if (config.progress)
            config.progress(s);
    };

    const int areaCells = config.areaCells;
    Tiling tiling = coverRectangleAuto(areaCells, areaCells, registry.shape, registry.rule);
    std::vector<std::vector<AreaInstance>> instances = collectInstances(
        tiling, registry, geometry, 0, 0, areaCells * S, areaCells * S);
    // Rare labels never show up in a finite area; they get their own bounded
    // context patch instead of the shared field.
    std::vector<LabelContext> contexts(labelCount);
    std::vector<std::uint8_t> useContext(labelCount, 0);
    int contextLabels = 0;
    for (int lbl = 0; lbl < labelCount; ++lbl)
        if (instances[lbl].empty()) {
            contexts[lbl] = buildLabelContext(registry, geometry, lbl);
            useContext[lbl] = 1;
            ++contextLabels;
        }
    note("borders: " + std::to_string(labelCount) + " labels (" +
         std::to_string(contextLabels) + " via context patches)");

    const int fieldEdge = areaCells * S;
    DotField field(fieldEdge, fieldEdge, true);
    const std::size_t target =
        static_cast<std::size_t>(std::llround(config.density() * fieldEdge * fieldEdge));

    // Representatives: the instance whose band center is most central, so the
    // relaxation window never straddles the (artificial) area edge.
    std::vector<AreaInstance> rep(labelCount);
    for (int lbl = 0; lbl < labelCount; ++lbl) {
        if (useContext[lbl])
            continue;
        const std::vector<Pixel>& band = geometry.labels[lbl].bandPixels;
        long long bestKey = -1;
        for (const AreaInstance& inst : instances[lbl]) {
            long long sx = 0, sy = 0;
            for (const Pixel& p : band) {
                sx += inst.originPxX + p.x;
                sy += inst.originPxY + p.y;
            }
            long long cx = sx / static_cast<long long>(band.size());
            long long cy = sy / static_cast<long long>(band.size());
            long long d = std::max(std::abs(cx - fieldEdge / 2), std::abs(cy - fieldEdge / 2));
            long long key = ((d * fieldEdge + cy) * fieldEdge + cx);
            if (bestKey < 0 || key < bestKey) {
                bestKey = key;
                rep[lbl] = inst;
            }
        }
    }

    Rng seedRng(subSeed(config.seed, "borders/init"));
    topUp(field, target, seedRng);

    BorderPatterns result;
    result.perLabel.assign(labelCount, {});
    result.areaCellsUsed = areaCells;
    std::vector<std::vector<Pixel>> previous;

    for (int sweep = 0; sweep < config.borderSweeps; ++sweep) {
        Rng rng(subSeed(config.seed, "borders/sweep/" + std::to_string(sweep)));
        std::vector<int> order(labelCount);
        for (int i = 0; i < labelCount; ++i)
            order[i] = i;
        rng.shuffle(order);

        int done = 0;
        for (int lbl : order) {
            if (++done % 500 == 0)
                note("borders: sweep " + std::to_string(sweep + 1) + ", label " +
                     std::to_string(done) + "/" + std::to_string(labelCount));
            const std::vector<Pixel>& band = geometry.labels[lbl].bandPixels;
            if (useContext[lbl]) {
                // Bounded patch: stamp every other label's current pattern,
                // fill to density with floating dots (carried over between
                // sweeps so later relaxations start near-converged), relax a
                // window around the central claimed band, and read it.
                LabelContext& ctx = contexts[lbl];
                DotField patch(ctx.fw, ctx.fh, false);
                for (int m = 0; m < labelCount; ++m) {
                    if (m == lbl || result.perLabel[m].empty())
                        continue;
                    for (const AreaInstance& inst : ctx.instances[m])
                        for (const Pixel& p : result.perLabel[m])
                            patch.addDot(inst.originPxX + p.x - ctx.offX,
                                         inst.originPxY + p.y - ctx.offY, true);
                }
                std::size_t patchTarget = static_cast<std::size_t>(
                    std::llround(config.density() * ctx.fw * ctx.fh));
                for (const Pixel& p : ctx.floating) {
                    if (patch.count() >= patchTarget)
                        break;
                    if (!patch.occupied(p.x, p.y))
                        patch.addDot(p.x, p.y, false);
                }
                while (patch.count() < patchTarget) {
                    int x = rng.intBelow(ctx.fw), y = rng.intBelow(ctx.fh);
                    if (!patch.occupied(x, y))
                        patch.addDot(x, y, false);
                }
                long long sx = 0, sy = 0;
                for (const Pixel& p : band) {
                    sx += ctx.central.originPxX + p.x - ctx.offX;
                    sy += ctx.central.originPxY + p.y - ctx.offY;
                }
                int cx = static_cast<int>(sx / static_cast<long long>(band.size()));
                int cy = static_cast<int>(sy / static_cast<long long>(band.size()));
                LloydOptions opt;
                opt.x0 = cx - config.relaxWindowPx / 2;
                opt.y0 = cy - config.relaxWindowPx / 2;
                opt.x1 = opt.x0 + config.relaxWindowPx;
                opt.y1 = opt.y0 + config.relaxWindowPx;
                opt.maxIterations = config.lloydIterations;
                lloydRelax(patch, opt);
                std::vector<Pixel> pattern;
                for (const Pixel& p : band)
                    if (patch.occupied(ctx.central.originPxX + p.x - ctx.offX,
                                       ctx.central.originPxY + p.y - ctx.offY))
                        pattern.push_back(p);
                result.perLabel[lbl] = pattern;
                ctx.floating.clear();
                for (const Dot& d : patch.dots())
                    if (!d.fixed)
                        ctx.floating.push_back({d.x, d.y});
                continue;
            }
            // Release this label's previously stamped dots back to floating.
            for (const AreaInstance& inst : instances[lbl])
                for (const Pixel& p : band) {
                    int idx = field.dotAt(inst.originPxX + p.x, inst.originPxY + p.y);
                    if (idx >= 0)
                        field.setFixed(idx, false);
                }
            topUp(field, target, rng);

            long long sx = 0, sy = 0;
            for (const Pixel& p : band) {
                sx += rep[lbl].originPxX + p.x;
                sy += rep[lbl].originPxY + p.y;
            }
            int cx = static_cast<int>(sx / static_cast<long long>(band.size()));
            int cy = static_cast<int>(sy / static_cast<long long>(band.size()));
            LloydOptions opt;
            opt.x0 = cx - config.relaxWindowPx / 2;
            opt.y0 = cy - config.relaxWindowPx / 2;
            opt.x1 = opt.x0 + config.relaxWindowPx;
            opt.y1 = opt.y0 + config.relaxWindowPx;
            opt.maxIterations = config.lloydIterations;
            lloydRelax(field, opt);

            std::vector<Pixel> pattern;
            for (const Pixel& p : band)
                if (field.occupied(rep[lbl].originPxX + p.x, rep[lbl].originPxY + p.y))
                    pattern.push_back(p);
            result.perLabel[lbl] = pattern;

            for (const AreaInstance& inst : instances[lbl]) {
                for (const Pixel& p : band) {
                    int x = inst.originPxX + p.x, y = inst.originPxY + p.y;
                    if (field.occupied(x, y))
                        field.removeDotAt(x, y);
                }
                for (const Pixel& p : pattern)
                    field.addDot(inst.originPxX + p.x, inst.originPxY + p.y, true);
            }
        }
        result.sweepsRun = sweep + 1;
        note("borders: sweep " + std::to_string(sweep + 1) + " done");
        if (result.perLabel == previous)
            break;
        previous = result.perLabel;
    }
    return result;
}

std::vector<std::vector<Pixel>> initInteriors(const StructureRegistry& registry,
                                              const GeometryTable& geometry,
                                              const BorderPatterns& borders,
                                              const OptimizerConfig& config) {
    const int S = config.S;
    const int k0 = config.initialCount();
    std::vector<std::vector<Pixel>> interiors(registry.classCount());

    for (int c = 0; c < registry.classCount(); ++c) {
        if (config.progress && c % 500 == 0)
            config.progress("interiors: class " + std::to_string(c) + "/" +
                            std::to_string(registry.classCount()));
        const ClassGeometry& g = geometry.classes[c];
        Neighborhood n = decodeSignature(registry.shape, registry.classSignatures[c]);
        std::vector<Tile> tiles{Tile{n.own}};
        for (const Transform& nb : n.neighbors)
            tiles.push_back(Tile{nb});
        Tiling local(registry.shape, std::move(tiles));

        // Bounded pixel field over the whole local patch; offset maps world
        // px (central origin at 0,0) to field coordinates.
        int offX = local.originX() * S, offY = local.originY() * S;
        DotField field(local.width() * S, local.height() * S, false);

        // Stamp every border pattern incident to the central tile: segments it
        // claims plus neighbor-claimed runs along its own boundary.
        int claimedDots = 0;
        for (const SegmentInstance& s : extractSegments(local)) {
            bool incident = s.claimerTile == 0;
            if (!incident) {
                int ox = s.vertical ? s.lineCoord : s.runStart;
                int oy = s.vertical ? s.runStart : s.lineCoord;
                incident = local.ownerAt(ox, oy) == 0;
            }
            if (!incident)
                continue;
            int lbl = registry.labelId(s.label);
            if (lbl < 0)
                throw OptimizeError("segment incident to a registered class has an "
                                    "unknown label");
            const std::vector<Cell> cells =
                transformedCells(registry.shape, local.tiles()[s.claimerTile].transform);
            Cell o = cellsBboxMin(cells);
            for (const Pixel& p : borders.perLabel[lbl])
                field.addDot(o.x * S + p.x - offX, o.y * S + p.y - offY, true);
            if (s.claimerTile == 0)
                claimedDots += static_cast<int>(borders.perLabel[lbl].size());
        }

        int kInterior = k0 - claimedDots;
        if (kInterior < 0)
            throw OptimizeError("claimed border dots exceed the per-tile budget");

        // Pixel masks in field coordinates.
        auto ownsPixel = [&](int fx, int fy) {
            int wx = fx + offX, wy = fy + offY;
            return local.ownerAt(wx >= 0 ? wx / S : (wx - S + 1) / S,
                                 wy >= 0 ? wy / S : (wy - S + 1) / S) == 0;
        };
        auto interiorPixel = [&](int fx, int fy) {
            int idx = g.pixelIndex(fx + offX, fy + offY);
            return idx >= 0 && !g.isBorder[idx];
        };

        Rng rng(subSeed(config.seed, "interior/" + std::to_string(c)));
        int placed = 0;
        while (placed < kInterior) {
            const Pixel& p = g.pixels[g.interiorPixels[rng.intBelow(
                static_cast<int>(g.interiorPixels.size()))]];
            if (!field.occupied(p.x - offX, p.y - offY)) {
                field.addDot(p.x - offX, p.y - offY, false);
                ++placed;
            }
        }

        LloydOptions opt;
        opt.x0 = -offX;
        opt.y0 = -offY;
        opt.x1 = g.cellW * S - offX;
        opt.y1 = g.cellH * S - offY;
        opt.maxIterations = config.lloydIterations;
        opt.region = ownsPixel;
        opt.allowed = interiorPixel;
        lloydRelax(field, opt);

        std::vector<Pixel> dots;
        for (const Dot& d : field.dots())
            if (!d.fixed)
                dots.push_back({d.x + offX, d.y + offY});
        std::sort(dots.begin(), dots.end(),
                  [](Pixel a, Pixel b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
        if (static_cast<int>(dots.size()) != kInterior)
            throw OptimizeError("interior relaxation lost dots");
        interiors[c] = std::move(dots);
    }
    return interiors;
}

namespace {

// Everything the consecutive ranking needs about one class: a window around a
// representative instance (taken from a subdivided parent context) mapping
// each window pixel to its global (class, tile-local pixel) state slot.
struct RepWindow {
    int margin = 0;           // px on each side of the class bbox
    int gw = 0, gh = 0;       // grid dims
    std::vector<std::int32_t> slots;  // window pixel -> class*pixels + pix
};

struct Influence {
    std::int32_t cls;
    std::int16_t wx, wy;
};

struct Ranker {
    const StructureRegistry& registry;
    const GeometryTable& geometry;
    const OptimizerConfig& config;
    int C, L, levels, R;
    std::vector<double> weight;              // (2R+1)^2 Gaussian
    std::vector<RepWindow> windows;          // per class
    std::vector<std::vector<Influence>> influence;  // per global slot
    std::vector<std::uint8_t> state;         // global slot -> dot present
    std::vector<double> energy;              // global slot -> blurred response
    std::vector<std::vector<int>> labelOf;   // per class: pixel -> label id or -1
    std::vector<std::vector<int>> bandPosOf; // per class: pixel -> band position
    std::vector<std::vector<int>> perClassRank;
    std::vector<std::vector<int>> perSegmentRank;

    Ranker(const StructureRegistry& reg, const GeometryTable& geo,
           const OptimizerConfig& cfg)
        : registry(reg), geometry(geo), config(cfg) {
        C = registry.classCount();
        L = static_cast<int>(registry.segmentLabels.size());
        levels = config.levels();
        R = static_cast<int>(std::ceil(3.0 * config.sigma));
        weight.resize(static_cast<std::size_t>(2 * R + 1) * (2 * R + 1));
        for (int dy = -R; dy <= R; ++dy)
            for (int dx = -R; dx <= R; ++dx)
                weight[static_cast<std::size_t>(dy + R) * (2 * R + 1) + (dx + R)] =
                    std::exp(-(dx * dx + dy * dy) / (2.0 * config.sigma * config.sigma));
        buildWindows();
        buildSegmentMaps();
        state.assign(static_cast<std::size_t>(C) * levels, 0);
        energy.assign(static_cast<std::size_t>(C) * levels, 0.0);
        perClassRank.assign(C, std::vector<int>(levels, -1));
        perSegmentRank.resize(L);
        for (int lbl = 0; lbl < L; ++lbl)
            perSegmentRank[lbl].assign(geometry.labels[lbl].bandPixels.size(), -1);
    }

    void buildWindows() {
        const int S = config.S;
        // Parent of each class: first (parent, slot) whose production yields it.
        std::vector<std::pair<int, int>> parent(C, {-1, -1});
        for (int p = 0; p < C; ++p)
            for (int slot = 0; slot < static_cast<int>(registry.production[p].size());
                 ++slot) {
                int child = registry.production[p][slot];
                if (parent[child].first < 0)
                    parent[child] = {p, slot};
            }
        windows.resize(C);
        influence.assign(static_cast<std::size_t>(C) * levels, {});
        for (int c = 0; c < C; ++c) {
            auto [p, slot] = parent[c];
            if (p < 0)
                throw OptimizeError("class has no parent in the production table");
            Neighborhood n = decodeSignature(registry.shape, registry.classSignatures[p]);
            std::vector<Tile> children;
            for (Tile& t : subdivide(Tile{n.own}, registry.rule))
                children.push_back(t);
            for (const Transform& nb : n.neighbors)
                for (Tile& t : subdivide(Tile{nb}, registry.rule))
                    children.push_back(t);
            Tiling ctx(registry.shape, std::move(children));

            std::vector<Cell> centralCells =
                transformedCells(registry.shape, ctx.tiles()[slot].transform);
            Cell o = cellsBboxMin(centralCells);
            const ClassGeometry& g = geometry.classes[c];

            RepWindow w;
            w.margin = R;
            w.gw = g.cellW * S + 2 * R;
            w.gh = g.cellH * S + 2 * R;
            w.slots.assign(static_cast<std::size_t>(w.gw) * w.gh, -1);

            std::map<int, int> tileClass;  // ctx tile -> class id
            std::map<int, Cell> tileOrigin;
            auto classify = [&](int tile) {
                auto it = tileClass.find(tile);
                if (it != tileClass.end())
                    return it->second;
                int id = registry.classId(classifySignatureAt(ctx, tile));
                if (id < 0)
                    throw OptimizeError("representative context tile is unclassifiable");
                tileClass[tile] = id;
                tileOrigin[tile] = cellsBboxMin(
                    transformedCells(registry.shape, ctx.tiles()[tile].transform));
                return id;
            };
            if (classify(slot) != c)
                throw OptimizeError("production table and geometric classification "
                                    "disagree on a representative");

            for (int wy = 0; wy < w.gh; ++wy)
                for (int wx = 0; wx < w.gw; ++wx) {
                    int px = o.x * S + wx - R, py = o.y * S + wy - R;
                    int cx = px >= 0 ? px / S : (px - S + 1) / S;
                    int cy = py >= 0 ? py / S : (py - S + 1) / S;
                    int tile = ctx.ownerAt(cx, cy);
                    if (tile < 0)
                        throw OptimizeError("representative window escapes its context");
                    int id = classify(tile);
                    Cell to = tileOrigin[tile];
                    int pix = geometry.classes[id].pixelIndex(px - to.x * S, py - to.y * S);
                    if (pix < 0)
                        throw OptimizeError("window pixel missing from its tile frame");
                    std::int32_t gslot = id * levels + pix;
                    w.slots[static_cast<std::size_t>(wy) * w.gw + wx] = gslot;
                    influence[gslot].push_back({c, static_cast<std::int16_t>(wx),
                                                static_cast<std::int16_t>(wy)});
                }
            windows[c] = std::move(w);
        }
    }

    void buildSegmentMaps() {
        labelOf.assign(C, std::vector<int>(levels, -1));
        bandPosOf.assign(C, std::vector<int>(levels, -1));
        for (int c = 0; c < C; ++c) {
            const ClassGeometry& g = geometry.classes[c];
            for (const ClassSegment& cs : g.segments)
                for (std::size_t i = 0; i < cs.bandPixels.size(); ++i) {
                    labelOf[c][cs.bandPixels[i]] = cs.labelId;
                    bandPosOf[c][cs.bandPixels[i]] = static_cast<int>(i);
                }
        }
    }

    int pixelOfBandPos(int cls, int lbl, int pos) const {
        const Pixel& p = geometry.labels[lbl].bandPixels[pos];
        return geometry.classes[cls].pixelIndex(p.x, p.y);
    }

    void initState(const BorderPatterns& borders,
                   const std::vector<std::vector<Pixel>>& interiors) {
        const int k0 = config.initialCount();
        for (int c = 0; c < C; ++c) {
            const ClassGeometry& g = geometry.classes[c];
            int count = 0;
            for (const ClassSegment& cs : g.segments)
                for (const Pixel& p : borders.perLabel[cs.labelId]) {
                    int pix = g.pixelIndex(p.x, p.y);
                    if (pix < 0 || labelOf[c][pix] != cs.labelId)
                        throw OptimizeError("border pattern dot falls outside its band");
                    state[static_cast<std::size_t>(c) * levels + pix] = 1;
                    ++count;
                }
            for (const Pixel& p : interiors[c]) {
                int pix = g.pixelIndex(p.x, p.y);
                if (pix < 0 || g.isBorder[pix])
                    throw OptimizeError("interior dot falls outside the interior");
                std::uint8_t& s = state[static_cast<std::size_t>(c) * levels + pix];
                if (s)
                    throw OptimizeError("interior dot collides with a border dot");
                s = 1;
                ++count;
            }
            if (count != k0)
                throw OptimizeError("initial per-tile dot count is not k0");
        }
        // Initial energies, brute force once.
        for (int c = 0; c < C; ++c) {
            const RepWindow& w = windows[c];
            const ClassGeometry& g = geometry.classes[c];
            for (int pix = 0; pix < levels; ++pix) {
                const Pixel& p = g.pixels[pix];
                double e = 0.0;
                for (int dy = -R; dy <= R; ++dy)
                    for (int dx = -R; dx <= R; ++dx) {
                        int wx = p.x + R + dx, wy = p.y + R + dy;
                        std::int32_t s =
                            w.slots[static_cast<std::size_t>(wy) * w.gw + wx];
                        if (state[s])
                            e += weight[static_cast<std::size_t>(dy + R) * (2 * R + 1) +
                                        (dx + R)];
                    }
                energy[static_cast<std::size_t>(c) * levels + pix] = e;
            }
        }
    }

    void flip(int cls, int pix, int delta) {
        std::int32_t gslot = cls * levels + pix;
        if (static_cast<int>(state[gslot]) + delta != (delta > 0 ? 1 : 0))
            throw OptimizeError("rank state flip mismatch");
        state[gslot] = delta > 0 ? 1 : 0;
        for (const Influence& inf : influence[gslot]) {
            const ClassGeometry& g = geometry.classes[inf.cls];
            double* e = &energy[static_cast<std::size_t>(inf.cls) * levels];
            for (int dy = -R; dy <= R; ++dy) {
                int py = inf.wy + dy - R;
                for (int dx = -R; dx <= R; ++dx) {
                    int px = inf.wx + dx - R;
                    int idx = g.pixelIndex(px, py);
                    if (idx >= 0)
                        e[idx] += delta *
                                  weight[static_cast<std::size_t>(dy + R) * (2 * R + 1) +
                                         (dx + R)];
                }
            }
        }
    }

    // Border rank schedule. In lockstep ranking every class must act exactly
    // once per level, and a shared segment action occupies all its claimers
    // at once — deciding that matching greedily per level can deadlock in
    // claimer cycles. Instead, fix the schedule up front: each segment label
    // gets a set of levels (as many below k0 as the label holds initial
    // dots, the rest at or above k0) such that labels claimed by a common
    // class never share a level. Every level then decomposes trivially —
    // each class acts through its scheduled label or an interior slot — and
    // a counting argument guarantees a candidate always exists.
    struct Timetable {
        std::vector<std::vector<int>> labelsAtLevel;  // level -> labels acting
        std::vector<std::vector<int>> labelAtLevel;   // class -> level -> label / -1
    };

    Timetable buildTimetable(const BorderPatterns& borders) const {
        const int k0 = config.initialCount();
        std::vector<int> m(L), d(L);
        std::vector<int> order;
        for (int lbl = 0; lbl < L; ++lbl) {
            m[lbl] = static_cast<int>(geometry.labels[lbl].bandPixels.size());
            d[lbl] = static_cast<int>(borders.perLabel[lbl].size());
            if (!geometry.labels[lbl].claimingClasses.empty() && m[lbl] > 0)
                order.push_back(lbl);
        }
        for (int attempt = 0; attempt < 256; ++attempt) {
            Rng rng(subSeed(config.seed, "timetable/" + std::to_string(attempt)));
            Timetable tt;
            tt.labelsAtLevel.assign(levels, {});
            tt.labelAtLevel.assign(C, std::vector<int>(levels, -1));
            std::vector<int> usage(levels, 0);
            auto take = [&](int lbl, int lo, int hi, int quota) {
                const auto& claimers = geometry.labels[lbl].claimingClasses;
                std::vector<int> cand;
                for (int lv = lo; lv < hi; ++lv) {
                    bool free = true;
                    for (int c : claimers)
                        if (tt.labelAtLevel[c][lv] >= 0) {
                            free = false;
                            break;
                        }
                    if (free)
                        cand.push_back(lv);
                }
                if (static_cast<int>(cand.size()) < quota)
                    return false;
                // Least-used levels first spreads border ranks evenly.
                std::stable_sort(cand.begin(), cand.end(),
                                 [&](int a, int b) { return usage[a] < usage[b]; });
                for (int i = 0; i < quota; ++i) {
                    int lv = cand[i];
                    tt.labelsAtLevel[lv].push_back(lbl);
                    ++usage[lv];
                    for (int c : claimers)
                        tt.labelAtLevel[c][lv] = lbl;
                }
                return true;
            };
            // The range below k0 is the scarce one, so allocate it for every
            // label first. A label needs a level simultaneously free in all
            // its claimers, so constraint pressure scales with claimer count
            // times quota; allocate the most constrained labels first, ties
            // in shuffled order.
            auto deg = [&](int lbl) {
                return static_cast<int>(geometry.labels[lbl].claimingClasses.size());
            };
            bool ok = true;
            rng.shuffle(order);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return deg(a) * d[a] > deg(b) * d[b];
            });
            for (int lbl : order)
                if (!take(lbl, 0, k0, d[lbl])) {
                    ok = false;
                    break;
                }
            if (ok) {
                rng.shuffle(order);
                std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                    return deg(a) * (m[a] - d[a]) > deg(b) * (m[b] - d[b]);
                });
                for (int lbl : order)
                    if (!take(lbl, k0, levels, m[lbl] - d[lbl])) {
                        ok = false;
                        break;
                    }
            }
            if (ok) {
                for (auto& lv : tt.labelsAtLevel)
                    std::sort(lv.begin(), lv.end());
                return tt;
            }
        }
        throw OptimizeError("could not schedule border segment ranks");
    }

    // Picks the best candidate slot of `cls` among interior (lbl < 0) or the
    // positions of segment `lbl`, by blurred energy. Returns the pixel index.
    int bestSlot(int cls, int lbl, std::uint8_t want, bool maximize) const {
        const std::size_t base = static_cast<std::size_t>(cls) * levels;
        int best = -1;
        double bestScore = 0.0;
        auto consider = [&](int pix) {
            if (state[base + pix] != want)
                return;
            double score = energy[base + pix];
            if (best < 0 || (maximize ? score > bestScore : score < bestScore)) {
                best = pix;
                bestScore = score;
            }
        };
        if (lbl < 0) {
            for (int pix : geometry.classes[cls].interiorPixels)
                consider(pix);
        } else {
            for (std::size_t pos = 0; pos < geometry.labels[lbl].bandPixels.size(); ++pos)
                consider(pixelOfBandPos(cls, lbl, pos));
        }
        return best;
    }

    // One ranking level under the fixed schedule: the level's segments act
    // first (band states are synchronized across claimers, so the first
    // claimer's energies choose the position), then every other class acts
    // on an interior slot, in shuffled order so no class systematically
    // moves before its neighbors.
    void rankLevel(const Timetable& tt, bool down, int rankValue) {
        const std::uint8_t want = down ? 1 : 0;
        const bool maximize = down ? config.clusterByMaxResponse : false;
        const int delta = down ? -1 : 1;
        for (int lbl : tt.labelsAtLevel[rankValue]) {
            int c0 = geometry.labels[lbl].claimingClasses.front();
            int pix0 = bestSlot(c0, lbl, want, maximize);
            if (pix0 < 0)
                throw OptimizeError("scheduled segment has no candidate slot");
            int pos = bandPosOf[c0][pix0];
            perSegmentRank[lbl][pos] = rankValue;
            for (int b : geometry.labels[lbl].claimingClasses) {
                int q = pixelOfBandPos(b, lbl, pos);
                perClassRank[b][q] = rankValue;
                flip(b, q, delta);
            }
        }
        std::vector<int> order(C);
        for (int i = 0; i < C; ++i)
            order[i] = i;
        Rng rng(subSeed(config.seed,
                        (down ? "down/" : "up/") + std::to_string(rankValue)));
        rng.shuffle(order);
        for (int c : order) {
            if (tt.labelAtLevel[c][rankValue] >= 0)
                continue;
            int pix = bestSlot(c, -1, want, maximize);
            if (pix < 0)
                throw OptimizeError("class has no interior candidate at a scheduled "
                                    "interior level");
            perClassRank[c][pix] = rankValue;
            flip(c, pix, delta);
        }
    }

    RankTable run(const BorderPatterns& borders,
                  const std::vector<std::vector<Pixel>>& interiors) {
        initState(borders, interiors);
        auto note = [&](const std::string& s) {
            if (config.progress)
                config.progress(s);
        };
        const int k0 = config.initialCount();
        const Timetable tt = buildTimetable(borders);
        for (int k = k0; k >= 1; --k) {
            if (k % 16 == 0)
                note("ranking: down, level " + std::to_string(k));
            rankLevel(tt, true, k - 1);
        }
        for (std::size_t s = 0; s < state.size(); ++s)
            if (state[s])
                throw OptimizeError("down phase left a dot standing");
        // Restore the initial pattern (ranks below k0) before growing; the up
        // phase only ranks the remaining empty slots.
        for (int c = 0; c < C; ++c)
            for (int pix = 0; pix < levels; ++pix)
                if (perClassRank[c][pix] >= 0 && perClassRank[c][pix] < k0)
                    flip(c, pix, 1);
        for (int k = k0; k < levels; ++k) {
            if (k % 16 == 0)
                note("ranking: up, level " + std::to_string(k));
            rankLevel(tt, false, k);
        }
        for (std::size_t s = 0; s < state.size(); ++s)
            if (!state[s])
                throw OptimizeError("up phase left a hole");

        RankTable table;
        table.S = config.S;
        table.d0 = config.density();
        table.seed = config.seed;
        table.shapeName = registry.rule.shapeName;
        table.ruleHash = ruleHash(registry.rule);
        table.perClass = std::move(perClassRank);
        table.perSegment = std::move(perSegmentRank);
        validateRankTable(table, registry, geometry);
        return table;
    }
};

}  // namespace

RankTable rankFromInitial(const StructureRegistry& registry, const GeometryTable& geometry,
                          const BorderPatterns& borders,
                          const std::vector<std::vector<Pixel>>& interiors,
                          const OptimizerConfig& config) {
    Ranker ranker(registry, geometry, config);
    return ranker.run(borders, interiors);
}

RankTable buildRankTable(const StructureRegistry& registry, const GeometryTable& geometry,
                         const OptimizerConfig& config) {
    BorderPatterns borders = initBorders(registry, geometry, config);
    std::vector<std::vector<Pixel>> interiors =
        initInteriors(registry, geometry, borders, config);
    return rankFromInitial(registry, geometry, borders, interiors, config);
}

}  // namespace polydither
