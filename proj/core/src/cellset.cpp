#include "polydither/cellset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace polydither {

namespace {

void checkConnected(const std::vector<Cell>& cells) {
    if (cells.empty())
        throw AssetInvalid("cell set is empty");
    std::set<Cell> all(cells.begin(), cells.end());
    if (all.size() != cells.size())
        throw AssetInvalid("cell set has duplicate cells");
    std::vector<Cell> stack{cells.front()};
    std::set<Cell> seen{cells.front()};
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            Cell n{c.x + dx, c.y + dy};
            if (all.count(n) && !seen.count(n)) {
                seen.insert(n);
                stack.push_back(n);
            }
        }
    }
    if (seen.size() != cells.size())
        throw AssetInvalid("cell set is not edge-connected");
}

}  // namespace

CellSet::CellSet(std::vector<Cell> cells) : cells_(std::move(cells)) {
    checkConnected(cells_);
    std::sort(cells_.begin(), cells_.end(),
              [](Cell a, Cell b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    int minX = cells_.front().x, minY = cells_.front().y;
    int maxX = minX, maxY = minY;
    for (const Cell& c : cells_) {
        minX = std::min(minX, c.x);
        minY = std::min(minY, c.y);
        maxX = std::max(maxX, c.x);
        maxY = std::max(maxY, c.y);
    }
    for (Cell& c : cells_) {
        c.x -= minX;
        c.y -= minY;
    }
    width_ = maxX - minX + 1;
    height_ = maxY - minY + 1;
}

bool CellSet::contains(Cell c) const {
    return std::binary_search(
        cells_.begin(), cells_.end(), c,
        [](Cell a, Cell b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
}

CellSet CellSet::scaled(int factor) const {
    std::vector<Cell> out;
    out.reserve(cells_.size() * factor * factor);
    for (const Cell& c : cells_)
        for (int dy = 0; dy < factor; ++dy)
            for (int dx = 0; dx < factor; ++dx)
                out.push_back({c.x * factor + dx, c.y * factor + dy});
    return CellSet(std::move(out));
}

std::string CellSet::toString() const {
    std::ostringstream os;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x)
            os << (contains({x, y}) ? '#' : '.');
        os << '\n';
    }
    return os.str();
}

Cell Transform::apply(Cell c) const {
    int x = mirrored ? -c.x : c.x;
    int y = c.y;
    for (int r = 0; r < rotation; ++r) {
        int nx = -y, ny = x;
        x = nx;
        y = ny;
    }
    return {x + tx, y + ty};
}

Transform Transform::then(const Transform& outer) const {
    // Compose by probing two points; cheaper than case analysis and immune to
    // sign-convention slips.
    Transform out;
    out.mirrored = (mirrored != outer.mirrored);
    Cell o = outer.apply(apply({0, 0}));
    Cell e = outer.apply(apply({1, 0}));
    int dx = e.x - o.x, dy = e.y - o.y;
    // Unit x-vector after combined rotation+mirror determines the rotation.
    int rot = -1;
    for (int r = 0; r < 4; ++r) {
        Transform probe{r, out.mirrored, 0, 0};
        Cell p = probe.apply({1, 0});
        if (p.x == dx && p.y == dy) {
            rot = r;
            break;
        }
    }
    out.rotation = rot;
    Transform noShift{out.rotation, out.mirrored, 0, 0};
    Cell base = noShift.apply({0, 0});
    out.tx = o.x - base.x;
    out.ty = o.y - base.y;
    return out;
}

std::vector<Cell> transformedCells(const CellSet& shape, const Transform& t) {
    std::vector<Cell> out;
    out.reserve(shape.size());
    for (const Cell& c : shape.cells())
        out.push_back(t.apply(c));
    std::sort(out.begin(), out.end(),
              [](Cell a, Cell b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    return out;
}

Transform Transform::inverse() const {
    // Probe for the orientation that undoes this one, then fix translation.
    for (int code = 0; code < 8; ++code) {
        Transform cand{code % 4, code >= 4, 0, 0};
        Cell o = cand.apply(apply({0, 0}));
        Cell ex = cand.apply(apply({1, 0}));
        Cell ey = cand.apply(apply({0, 1}));
        if (ex.x - o.x == 1 && ex.y == o.y && ey.x == o.x && ey.y - o.y == 1) {
            cand.tx = -o.x;
            cand.ty = -o.y;
            return cand;
        }
    }
    throw std::logic_error("unreachable: transform has no inverse");
}

CellSet applyTransform(const CellSet& shape, const Transform& t) {
    return CellSet(transformedCells(shape, t));
}

std::vector<std::pair<int, CellSet>> distinctOrientations(const CellSet& shape) {
    std::vector<std::pair<int, CellSet>> out;
    for (int code = 0; code < 8; ++code) {
        Transform t{code % 4, code >= 4, 0, 0};
        CellSet n = applyTransform(shape, t);
        bool dup = false;
        for (const auto& [oc, existing] : out)
            if (existing == n) {
                dup = true;
                break;
            }
        if (!dup)
            out.emplace_back(code, std::move(n));
    }
    return out;
}

CellSet parseShapeAsset(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<Cell> cells;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        int x, y;
        if (ls >> x >> y)
            cells.push_back({x, y});
        else if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
            throw AssetInvalid("malformed shape asset line: " + line);
    }
    return CellSet(std::move(cells));
}

CellSet loadShapeAsset(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw AssetInvalid("cannot open shape asset: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parseShapeAsset(os.str());
}

}  // namespace polydither
