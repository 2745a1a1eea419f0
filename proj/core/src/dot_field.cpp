#include "polydither/dot_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polydither {

DotField::DotField(int width, int height, bool toroidal)
    : width_(width), height_(height), toroidal_(toroidal) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("dot field must be at least 1x1");
    occupant_.assign(static_cast<std::size_t>(width) * height, -1);
}

int DotField::addDot(int x, int y, bool fixed) {
    std::size_t i = index(x, y);
    if (occupant_[i] >= 0)
        throw std::logic_error("dot field pixel already occupied");
    occupant_[i] = static_cast<int>(dots_.size());
    dots_.push_back({x, y, fixed});
    return occupant_[i];
}

void DotField::removeDot(int idx) {
    occupant_[index(dots_[idx].x, dots_[idx].y)] = -1;
    if (idx != static_cast<int>(dots_.size()) - 1) {
        dots_[idx] = dots_.back();
        occupant_[index(dots_[idx].x, dots_[idx].y)] = idx;
    }
    dots_.pop_back();
}

void DotField::removeDotAt(int x, int y) {
    int idx = dotAt(x, y);
    if (idx < 0)
        throw std::logic_error("no dot to remove at pixel");
    removeDot(idx);
}

void DotField::moveDot(int idx, int nx, int ny) {
    std::size_t to = index(nx, ny);
    if (occupant_[to] == idx)
        return;
    if (occupant_[to] >= 0)
        throw std::logic_error("cannot move dot onto an occupied pixel");
    occupant_[index(dots_[idx].x, dots_[idx].y)] = -1;
    occupant_[to] = static_cast<int>(idx);
    dots_[idx].x = nx;
    dots_[idx].y = ny;
}

int DotField::wrapDx(int ax, int bx) const {
    int d = bx - ax;
    if (!toroidal_)
        return d;
    d %= width_;
    if (d > width_ / 2)
        d -= width_;
    if (d < -(width_ - 1) / 2)
        d += width_;
    return d;
}

int DotField::wrapDy(int ay, int by) const {
    int d = by - ay;
    if (!toroidal_)
        return d;
    d %= height_;
    if (d > height_ / 2)
        d -= height_;
    if (d < -(height_ - 1) / 2)
        d += height_;
    return d;
}

namespace {

constexpr int kBucket = 8;
constexpr int kMaxRing = 8;        // nearest-site search cap: 64 px
constexpr int kSnapRadius = 6;     // constrained-target snap search

struct FrameSite {
    int fx, fy;   // frame coords
    int dot;      // owning dot index
};

// Offsets sorted by (d^2, dy, dx); shared snap-search order.
const std::vector<std::array<int, 3>>& snapOffsets() {
    static const std::vector<std::array<int, 3>> offsets = [] {
        std::vector<std::array<int, 3>> v;
        for (int dy = -kSnapRadius; dy <= kSnapRadius; ++dy)
            for (int dx = -kSnapRadius; dx <= kSnapRadius; ++dx)
                v.push_back({dx * dx + dy * dy, dy, dx});
        std::sort(v.begin(), v.end());
        return v;
    }();
    return offsets;
}

}  // namespace

int lloydRelax(DotField& field, const LloydOptions& opt) {
    const int W = field.width(), H = field.height();
    const int pad = kMaxRing * kBucket / 2 + kBucket;  // site-relevance margin

    int wx0 = opt.x0, wy0 = opt.y0, wx1 = opt.x1, wy1 = opt.y1;
    if (!field.toroidal()) {
        wx0 = std::max(wx0, 0);
        wy0 = std::max(wy0, 0);
        wx1 = std::min(wx1, W);
        wy1 = std::min(wy1, H);
    }
    if (wx0 >= wx1 || wy0 >= wy1)
        return 0;
    int fx0 = wx0 - pad, fy0 = wy0 - pad;
    int fw = (wx1 - wx0) + 2 * pad, fh = (wy1 - wy0) + 2 * pad;
    if (!field.toroidal()) {
        fx0 = std::max(fx0, 0);
        fy0 = std::max(fy0, 0);
        fw = std::min(fw, W - fx0);
        fh = std::min(fh, H - fy0);
    }

    auto frameX = [&](int x) {  // world -> frame, first wrapped occurrence
        int d = x - fx0;
        if (field.toroidal())
            d = (d % W + W) % W;
        return d;
    };
    auto frameY = [&](int y) {
        int d = y - fy0;
        if (field.toroidal())
            d = (d % H + H) % H;
        return d;
    };
    auto wrapWorldX = [&](int x) { return field.toroidal() ? ((x % W) + W) % W : x; };
    auto wrapWorldY = [&](int y) { return field.toroidal() ? ((y % H) + H) % H : y; };

    // Sites stay inside the window hull once gathered (floating dots only move
    // to centroids of window pixels), so one gather per call suffices.
    std::vector<int> siteDots;
    for (int i = 0; i < static_cast<int>(field.dots().size()); ++i) {
        int fx = frameX(field.dots()[i].x), fy = frameY(field.dots()[i].y);
        if (fx >= 0 && fy >= 0 && fx < fw && fy < fh)
            siteDots.push_back(i);
    }
    if (siteDots.empty())
        return 0;

    const int nbx = (fw + kBucket - 1) / kBucket, nby = (fh + kBucket - 1) / kBucket;
    std::vector<std::vector<FrameSite>> buckets;
    std::vector<long long> sumDx, sumDy;
    std::vector<int> cnt;

    int iterations = 0;
    while (iterations < opt.maxIterations) {
        ++iterations;
        buckets.assign(static_cast<std::size_t>(nbx) * nby, {});
        for (int i : siteDots) {
            const Dot& d = field.dots()[i];
            int bx = frameX(d.x), by = frameY(d.y);
            // A site near the frame's wrap seam appears on both sides.
            for (int fx = bx; fx < fw; fx += W) {
                for (int fy = by; fy < fh; fy += H) {
                    buckets[static_cast<std::size_t>(fy / kBucket) * nbx + fx / kBucket]
                        .push_back({fx, fy, i});
                    if (!field.toroidal())
                        break;
                }
                if (!field.toroidal())
                    break;
            }
        }
        sumDx.assign(field.dots().size(), 0);
        sumDy.assign(field.dots().size(), 0);
        cnt.assign(field.dots().size(), 0);

        for (int wy = wy0; wy < wy1; ++wy) {
            int worldY = wrapWorldY(wy);
            int pfy = frameY(worldY);
            for (int wx = wx0; wx < wx1; ++wx) {
                int worldX = wrapWorldX(wx);
                if (opt.region && !opt.region(worldX, worldY))
                    continue;
                int pfx = frameX(worldX);
                int pbx = pfx / kBucket, pby = pfy / kBucket;
                long long bestD2 = -1;
                int bestDot = -1, bestKy = 0, bestKx = 0;
                for (int r = 0; r <= kMaxRing; ++r) {
                    if (bestD2 >= 0) {
                        long long lo = static_cast<long long>(r - 1) * kBucket;
                        if (lo > 0 && lo * lo > bestD2)
                            break;
                    }
                    for (int by = pby - r; by <= pby + r; ++by) {
                        if (by < 0 || by >= nby)
                            continue;
                        for (int bx = pbx - r; bx <= pbx + r; ++bx) {
                            if (bx < 0 || bx >= nbx)
                                continue;
                            if (std::max(std::abs(bx - pbx), std::abs(by - pby)) != r)
                                continue;
                            for (const FrameSite& s :
                                 buckets[static_cast<std::size_t>(by) * nbx + bx]) {
                                long long dx = pfx - s.fx, dy = pfy - s.fy;
                                long long d2 = dx * dx + dy * dy;
                                const Dot& sd = field.dots()[s.dot];
                                if (bestDot < 0 || d2 < bestD2 ||
                                    (d2 == bestD2 &&
                                     std::tie(sd.y, sd.x) <
                                         std::tie(field.dots()[bestDot].y,
                                                  field.dots()[bestDot].x))) {
                                    bestD2 = d2;
                                    bestDot = s.dot;
                                    bestKx = pfx - s.fx;
                                    bestKy = pfy - s.fy;
                                }
                            }
                        }
                    }
                }
                if (bestDot >= 0) {
                    sumDx[bestDot] += bestKx;
                    sumDy[bestDot] += bestKy;
                    cnt[bestDot] += 1;
                }
            }
        }

        int moves = 0;
        for (int i : siteDots) {
            const Dot& d = field.dots()[i];
            if (d.fixed || cnt[i] == 0)
                continue;
            // Only dots inside the window move; on a torus the window may sit
            // anywhere, so test membership with a wrapped distance from the
            // window origin rather than frame coordinates.
            int dx = d.x - wx0, dy = d.y - wy0;
            if (field.toroidal()) {
                dx = (dx % W + W) % W;
                dy = (dy % H + H) % H;
            }
            if (dx < 0 || dx >= wx1 - wx0 || dy < 0 || dy >= wy1 - wy0)
                continue;
            int offX = static_cast<int>(std::llround(static_cast<double>(sumDx[i]) / cnt[i]));
            int offY = static_cast<int>(std::llround(static_cast<double>(sumDy[i]) / cnt[i]));
            if (offX == 0 && offY == 0)
                continue;
            int tx = d.x + offX, ty = d.y + offY;
            if (field.toroidal()) {
                tx = wrapWorldX(tx);
                ty = wrapWorldY(ty);
            } else {
                tx = std::clamp(tx, 0, W - 1);
                ty = std::clamp(ty, 0, H - 1);
            }
            int gx = -1, gy = -1;
            for (const auto& [d2, oy, ox] : snapOffsets()) {
                int cx = tx + ox, cy = ty + oy;
                if (field.toroidal()) {
                    cx = wrapWorldX(cx);
                    cy = wrapWorldY(cy);
                } else if (cx < 0 || cy < 0 || cx >= W || cy >= H) {
                    continue;
                }
                if (opt.allowed && !opt.allowed(cx, cy))
                    continue;
                if (cx == d.x && cy == d.y) {
                    gx = cx;  // staying put beats any farther candidate
                    gy = cy;
                    break;
                }
                if (!field.occupied(cx, cy)) {
                    gx = cx;
                    gy = cy;
                    break;
                }
                if (!opt.allowed)
                    break;  // unconstrained: only the exact centroid target
            }
            if (gx >= 0 && !(gx == d.x && gy == d.y)) {
                field.moveDot(i, gx, gy);
                ++moves;
            }
        }
        if (moves == 0)
            break;
    }
    return iterations;
}

}  // namespace polydither
