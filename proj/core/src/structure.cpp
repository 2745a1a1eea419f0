#include "polydither/structure.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace polydither {

namespace {

// Bounding-box min corner of a transformed shape.
Cell bboxMin(const CellSet& shape, const Transform& t) {
    std::vector<Cell> cells = transformedCells(shape, t);
    Cell m = cells.front();
    for (const Cell& c : cells) {
        m.x = std::min(m.x, c.x);
        m.y = std::min(m.y, c.y);
    }
    return m;
}

// Index of world cell `c` in the shape's canonical cell order for a tile with
// transform t, or -1 if the cell is not covered by the tile.
int cellIndexWithin(const CellSet& shape, const Transform& t, Cell c) {
    Cell local = t.inverse().apply(c);
    const auto& cells = shape.cells();
    for (int i = 0; i < static_cast<int>(cells.size()); ++i)
        if (cells[i] == local)
            return i;
    return -1;
}

}  // namespace

std::string VertexLabel::encode() const {
    std::string out;
    out.reserve(8);
    for (const Mark& m : quadrant) {
        out.push_back(m.present ? static_cast<char>(m.orient + 1) : '\0');
        out.push_back(static_cast<char>(m.cellIdx));
    }
    return out;
}

VertexLabel labelVertexAt(const Tiling& tiling, int cx, int cy) {
    VertexLabel label;
    // Quadrant cells in NW, NE, SW, SE order.
    const Cell cells[4] = {{cx - 1, cy - 1}, {cx, cy - 1}, {cx - 1, cy}, {cx, cy}};
    for (int q = 0; q < 4; ++q) {
        int owner = tiling.ownerAt(cells[q].x, cells[q].y);
        if (owner < 0)
            continue;
        const Transform& t = tiling.tiles()[owner].transform;
        int idx = cellIndexWithin(tiling.shape(), t, cells[q]);
        label.quadrant[q] = {true, static_cast<std::uint8_t>(t.orientationCode()),
                             static_cast<std::uint8_t>(idx)};
    }
    return label;
}

std::map<Cell, VertexLabel> labelVertices(const Tiling& tiling) {
    std::map<Cell, VertexLabel> out;
    for (int cy = tiling.originY(); cy <= tiling.originY() + tiling.height(); ++cy)
        for (int cx = tiling.originX(); cx <= tiling.originX() + tiling.width(); ++cx) {
            VertexLabel l = labelVertexAt(tiling, cx, cy);
            bool touched = false;
            for (const auto& m : l.quadrant)
                touched = touched || m.present;
            if (touched)
                out.emplace(Cell{cx, cy}, std::move(l));
        }
    return out;
}

std::vector<SegmentInstance> extractSegments(const Tiling& tiling) {
    std::vector<SegmentInstance> out;
    int x0 = tiling.originX(), y0 = tiling.originY();
    int x1 = x0 + tiling.width(), y1 = y0 + tiling.height();

    auto makeLabel = [&](bool vertical, int line, int a, int b) {
        Cell pa = vertical ? Cell{line, a} : Cell{a, line};
        Cell pb = vertical ? Cell{line, b} : Cell{b, line};
        std::string bytes(1, vertical ? 'V' : 'H');
        bytes += labelVertexAt(tiling, pa.x, pa.y).encode();
        bytes += labelVertexAt(tiling, pb.x, pb.y).encode();
        return bytes;
    };

    // Vertical runs: boundary between (x-1, y) and (x, y).
    for (int x = x0; x <= x1; ++x) {
        int runStart = 0, left = -1, right = -1;
        bool open = false;
        auto flush = [&](int yEnd) {
            if (!open)
                return;
            open = false;
            if (left < 0)
                return;  // outside band, unclaimed
            out.push_back({makeLabel(true, x, runStart, yEnd), left, true, x, runStart, yEnd});
        };
        for (int y = y0; y <= y1; ++y) {
            int l = tiling.ownerAt(x - 1, y);
            int r = tiling.ownerAt(x, y);
            bool boundary = (l != r) && (l >= 0 || r >= 0);
            if (boundary && open && (l != left || r != right))
                flush(y);
            if (boundary && !open) {
                open = true;
                runStart = y;
                left = l;
                right = r;
            } else if (!boundary) {
                flush(y);
            }
        }
        flush(y1 + 1);
    }
    // Horizontal runs: boundary between (x, y-1) and (x, y).
    for (int y = y0; y <= y1; ++y) {
        int runStart = 0, up = -1, down = -1;
        bool open = false;
        auto flush = [&](int xEnd) {
            if (!open)
                return;
            open = false;
            if (up < 0)
                return;
            out.push_back({makeLabel(false, y, runStart, xEnd), up, false, y, runStart, xEnd});
        };
        for (int x = x0; x <= x1; ++x) {
            int u = tiling.ownerAt(x, y - 1);
            int d = tiling.ownerAt(x, y);
            bool boundary = (u != d) && (u >= 0 || d >= 0);
            if (boundary && open && (u != up || d != down))
                flush(x);
            if (boundary && !open) {
                open = true;
                runStart = x;
                up = u;
                down = d;
            } else if (!boundary) {
                flush(x);
            }
        }
        flush(x1 + 1);
    }
    return out;
}

std::string classifySignatureAt(const Tiling& tiling, int tileIdx) {
    const CellSet& shape = tiling.shape();
    const Transform& own = tiling.tiles()[tileIdx].transform;
    Cell origin = bboxMin(shape, own);

    std::set<int> neighborIds;
    bool clipped = false;
    for (const Cell& c : transformedCells(shape, own))
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                int o = tiling.ownerAt(c.x + dx, c.y + dy);
                if (o < 0)
                    clipped = true;
                else if (o != tileIdx)
                    neighborIds.insert(o);
            }

    std::vector<std::array<int, 3>> entries;  // dx, dy, orient
    for (int n : neighborIds) {
        const Transform& t = tiling.tiles()[n].transform;
        Cell no = bboxMin(shape, t);
        entries.push_back({no.x - origin.x, no.y - origin.y, t.orientationCode()});
    }
    std::sort(entries.begin(), entries.end());

    std::string sig;
    sig.push_back(static_cast<char>(own.orientationCode()));
    for (const auto& e : entries) {
        sig.push_back(static_cast<char>(e[0] + 128));
        sig.push_back(static_cast<char>(e[1] + 128));
        sig.push_back(static_cast<char>(e[2]));
    }
    if (clipped)
        sig.push_back(static_cast<char>(0xFF));
    return sig;
}

std::string toHex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 15]);
    }
    return out;
}

std::string fromHex(const std::string& hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        throw std::runtime_error("bad hex digit");
    };
    std::string out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
        out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    return out;
}

Neighborhood decodeSignature(const CellSet& shape, const std::string& signature) {
    Neighborhood n;
    std::size_t end = signature.size();
    if (end > 0 && static_cast<unsigned char>(signature[end - 1]) == 0xFF) {
        n.clipped = true;
        --end;
    }
    if (end == 0 || (end - 1) % 3 != 0)
        throw std::runtime_error("malformed signature");
    int ownCode = static_cast<unsigned char>(signature[0]);
    Transform own{ownCode % 4, ownCode >= 4, 0, 0};
    Cell m = bboxMin(shape, own);
    own.tx = -m.x;
    own.ty = -m.y;
    n.own = own;
    for (std::size_t i = 1; i < end; i += 3) {
        int dx = static_cast<unsigned char>(signature[i]) - 128;
        int dy = static_cast<unsigned char>(signature[i + 1]) - 128;
        int code = static_cast<unsigned char>(signature[i + 2]);
        Transform t{code % 4, code >= 4, 0, 0};
        Cell nm = bboxMin(shape, t);
        t.tx = dx - nm.x;
        t.ty = dy - nm.y;
        n.neighbors.push_back(t);
    }
    return n;
}

std::vector<std::string> childSignatures(const CellSet& shape, const ProductionRule& rule,
                                         const std::string& signature) {
    Neighborhood n = decodeSignature(shape, signature);
    if (n.clipped)
        throw std::runtime_error("cannot subdivide a clipped signature");
    std::vector<Tile> children;
    for (Tile& c : subdivide(Tile{n.own}, rule))
        children.push_back(c);
    for (const Transform& nb : n.neighbors)
        for (Tile& c : subdivide(Tile{nb}, rule))
            children.push_back(c);
    Tiling local(shape, std::move(children));
    int count = rule.linearScale * rule.linearScale;
    std::vector<std::string> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        std::string sig = classifySignatureAt(local, i);
        if (!sig.empty() && static_cast<unsigned char>(sig.back()) == 0xFF)
            throw std::logic_error("central child lost its neighbor ring");
        out.push_back(std::move(sig));
    }
    return out;
}

int StructureRegistry::classId(const std::string& signature) const {
    auto it = std::lower_bound(classSignatures.begin(), classSignatures.end(), signature);
    if (it == classSignatures.end() || *it != signature)
        return -1;
    return static_cast<int>(it - classSignatures.begin());
}

int StructureRegistry::labelId(const std::string& label) const {
    auto it = std::lower_bound(segmentLabels.begin(), segmentLabels.end(), label);
    if (it == segmentLabels.end() || *it != label)
        return -1;
    return static_cast<int>(it - segmentLabels.begin());
}

StructureRegistry buildRegistry(const CellSet& shape, const ProductionRule& rule,
                                int seedDepth) {
    StructureRegistry reg;
    reg.shape = shape;
    reg.rule = rule;

    // Geometric seeds: every full-ring signature at seedDepth.
    Tiling patch = subdividePatch(shape, rule, seedDepth);
    std::set<std::string> seen;
    for (int i = 0; i < static_cast<int>(patch.tiles().size()); ++i) {
        std::string sig = classifySignatureAt(patch, i);
        if (!sig.empty() && static_cast<unsigned char>(sig.back()) == 0xFF)
            continue;
        seen.insert(std::move(sig));
    }

    // Close under symbolic subdivision.
    std::deque<std::string> queue(seen.begin(), seen.end());
    while (!queue.empty()) {
        std::string sig = std::move(queue.front());
        queue.pop_front();
        for (std::string& child : childSignatures(shape, rule, sig))
            if (seen.insert(child).second)
                queue.push_back(std::move(child));
    }
    reg.classSignatures.assign(seen.begin(), seen.end());  // set is sorted

    reg.production.resize(reg.classSignatures.size());
    for (std::size_t id = 0; id < reg.classSignatures.size(); ++id) {
        std::vector<int> childIds;
        for (const std::string& c : childSignatures(shape, rule, reg.classSignatures[id])) {
            int cid = reg.classId(c);
            if (cid < 0)
                throw std::logic_error("production table escaped the closed id set");
            childIds.push_back(cid);
        }
        reg.production[id] = std::move(childIds);
    }

    // Segment labels claimed by each class, derived from its neighborhood.
    std::set<std::string> labels;
    for (const std::string& sig : reg.classSignatures) {
        Neighborhood n = decodeSignature(shape, sig);
        std::vector<Tile> tiles{Tile{n.own}};
        for (const Transform& nb : n.neighbors)
            tiles.push_back(Tile{nb});
        Tiling local(shape, std::move(tiles));
        for (SegmentInstance& s : extractSegments(local))
            if (s.claimerTile == 0)
                labels.insert(std::move(s.label));
    }
    reg.segmentLabels.assign(labels.begin(), labels.end());

    // Geometric uniqueness cross-check: every seed-depth parent's actual
    // children must match the table.
    Tiling childPatch = subdividePatch(shape, rule, seedDepth + 1);
    int A = rule.linearScale * rule.linearScale;
    for (int i = 0; i < static_cast<int>(patch.tiles().size()); ++i) {
        std::string sig = classifySignatureAt(patch, i);
        int id = reg.classId(sig);
        if (id < 0)
            continue;  // clipped seed tile
        for (int k = 0; k < A; ++k) {
            std::string childSig = classifySignatureAt(childPatch, i * A + k);
            if (childSig != reg.classSignatures[reg.production[id][k]])
                throw NonDeterministicProduction(
                    "representatives of one structural index subdivide differently; "
                    "signature neighborhood radius is too small");
        }
    }
    return reg;
}

std::vector<int> classifyTiles(Tiling& tiling, const StructureRegistry& registry) {
    std::vector<int> ids(tiling.tiles().size(), -1);
    for (int i = 0; i < static_cast<int>(tiling.tiles().size()); ++i) {
        ids[i] = registry.classId(classifySignatureAt(tiling, i));
        tiling.tiles()[i].structuralIndex = ids[i];
    }
    return ids;
}

std::vector<int> iterateIdSet(const StructureRegistry& registry, std::vector<int> ids,
                              int steps) {
    for (int s = 0; s < steps; ++s) {
        std::set<int> next;
        for (int id : ids)
            next.insert(registry.production[id].begin(), registry.production[id].end());
        ids.assign(next.begin(), next.end());
    }
    return ids;
}

std::string serializeRegistry(const StructureRegistry& registry) {
    std::ostringstream os;
    os << "polyreg v1 classes=" << registry.classSignatures.size()
       << " segments=" << registry.segmentLabels.size() << "\n";
    for (std::size_t i = 0; i < registry.classSignatures.size(); ++i)
        os << "id " << i << " signature " << toHex(registry.classSignatures[i]) << "\n";
    for (std::size_t i = 0; i < registry.segmentLabels.size(); ++i)
        os << "segment " << i << " label " << toHex(registry.segmentLabels[i]) << "\n";
    for (std::size_t i = 0; i < registry.production.size(); ++i) {
        os << "production " << i << ":";
        for (int c : registry.production[i])
            os << ' ' << c;
        os << "\n";
    }
    return os.str();
}

StructureRegistry parseRegistry(const std::string& text, const CellSet& shape,
                                const ProductionRule& rule) {
    StructureRegistry reg;
    reg.shape = shape;
    reg.rule = rule;
    std::istringstream is(text);
    std::string word;
    is >> word;
    if (word != "polyreg")
        throw std::runtime_error("bad registry header");
    std::string rest;
    std::getline(is, rest);
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "id") {
            int id;
            std::string kw, hex;
            ls >> id >> kw >> hex;
            if (static_cast<int>(reg.classSignatures.size()) != id)
                throw std::runtime_error("registry ids out of order");
            reg.classSignatures.push_back(fromHex(hex));
        } else if (kind == "segment") {
            int id;
            std::string kw, hex;
            ls >> id >> kw >> hex;
            reg.segmentLabels.push_back(fromHex(hex));
        } else if (kind == "production") {
            std::string idColon;
            ls >> idColon;
            std::vector<int> children;
            int c;
            while (ls >> c)
                children.push_back(c);
            reg.production.push_back(std::move(children));
        }
    }
    return reg;
}

void saveRegistry(const StructureRegistry& registry, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write registry: " + path);
    f << serializeRegistry(registry);
}

StructureRegistry loadRegistry(const std::string& path, const CellSet& shape,
                               const ProductionRule& rule) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot read registry: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parseRegistry(os.str(), shape, rule);
}

}  // namespace polydither
