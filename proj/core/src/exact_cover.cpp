#include "polydither/exact_cover.hpp"

#include <algorithm>
#include <map>

namespace polydither {

namespace {

struct CandidatePlacement {
    Transform transform;
    std::vector<int> cellIdx;  // indices into the region cell list
    bool alive = true;
};

struct Solver {
    const CellSet& region;
    std::size_t pieceCells;
    std::size_t limit;

    std::map<Cell, int> cellIndex;
    std::vector<CandidatePlacement> placements;
    std::vector<std::vector<int>> byCell;  // cell index -> placement indices
    std::vector<int> aliveCount;           // per cell
    std::vector<bool> covered;
    std::size_t uncovered = 0;

    std::vector<int> chosen;
    std::vector<CoverSolution> solutions;

    void search() {
        if (solutions.size() >= limit)
            return;
        if (uncovered == 0) {
            CoverSolution sol;
            sol.reserve(chosen.size());
            for (int p : chosen)
                sol.push_back(placements[p].transform);
            solutions.push_back(std::move(sol));
            return;
        }
        // Fewest-candidates uncovered cell; ties go to the smallest index
        // (cells are y-major sorted), keeping the search deterministic.
        int best = -1;
        for (int c = 0; c < static_cast<int>(covered.size()); ++c) {
            if (covered[c])
                continue;
            if (aliveCount[c] == 0)
                return;  // dead branch
            if (best < 0 || aliveCount[c] < aliveCount[best]) {
                best = c;
                if (aliveCount[c] == 1)
                    break;
            }
        }
        for (int p : byCell[best]) {
            if (!placements[p].alive)
                continue;
            std::vector<int> killed = place(p);
            chosen.push_back(p);
            search();
            chosen.pop_back();
            unplace(p, killed);
            if (solutions.size() >= limit)
                return;
        }
    }

    std::vector<int> place(int p) {
        std::vector<int> killed;
        for (int c : placements[p].cellIdx) {
            covered[c] = true;
            --uncovered;
            for (int q : byCell[c]) {
                if (placements[q].alive) {
                    placements[q].alive = false;
                    for (int qc : placements[q].cellIdx)
                        --aliveCount[qc];
                    killed.push_back(q);
                }
            }
        }
        return killed;
    }

    void unplace(int p, const std::vector<int>& killed) {
        for (int q : killed) {
            placements[q].alive = true;
            for (int qc : placements[q].cellIdx)
                ++aliveCount[qc];
        }
        for (int c : placements[p].cellIdx) {
            covered[c] = false;
            ++uncovered;
        }
    }
};

}  // namespace

std::vector<CoverSolution> solveExactCover(const CellSet& region, const CellSet& shape,
                                           std::size_t limit) {
    if (limit == 0 || shape.size() == 0 || region.size() % shape.size() != 0)
        return {};

    Solver s{region, shape.size(), limit};
    int n = static_cast<int>(region.size());
    for (int i = 0; i < n; ++i)
        s.cellIndex[region.cells()[i]] = i;

    for (const auto& [code, oriented] : distinctOrientations(shape)) {
        for (int ty = -oriented.height(); ty <= region.height(); ++ty) {
            for (int tx = -oriented.width(); tx <= region.width(); ++tx) {
                CandidatePlacement cp;
                // Orientation applied about the origin, then normalized inside
                // distinctOrientations; the placement transform reproduces the
                // normalized orientation at offset (tx, ty).
                cp.transform = Transform{code % 4, code >= 4, 0, 0};
                std::vector<Cell> raw = transformedCells(shape, cp.transform);
                int minX = raw.front().x, minY = raw.front().y;
                for (const Cell& c : raw) {
                    minX = std::min(minX, c.x);
                    minY = std::min(minY, c.y);
                }
                cp.transform.tx = tx - minX;
                cp.transform.ty = ty - minY;
                bool ok = true;
                for (const Cell& c : raw) {
                    auto it = s.cellIndex.find({c.x - minX + tx, c.y - minY + ty});
                    if (it == s.cellIndex.end()) {
                        ok = false;
                        break;
                    }
                    cp.cellIdx.push_back(it->second);
                }
                if (ok)
                    s.placements.push_back(std::move(cp));
            }
        }
    }

    s.byCell.assign(n, {});
    s.aliveCount.assign(n, 0);
    for (int p = 0; p < static_cast<int>(s.placements.size()); ++p)
        for (int c : s.placements[p].cellIdx) {
            s.byCell[c].push_back(p);
            ++s.aliveCount[c];
        }
    s.covered.assign(n, false);
    s.uncovered = n;
    s.search();
    return s.solutions;
}

}  // namespace polydither
