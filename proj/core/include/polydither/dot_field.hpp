#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace polydither {

struct Dot {
    int x = 0;
    int y = 0;
    bool fixed = false;
};

// Sparse dot pattern over a pixel rectangle, at most one dot per pixel.
// Toroidal by default (threshold-matrix construction); bounded for the
// per-tile interior relaxations.
class DotField {
public:
    DotField(int width, int height, bool toroidal = true);

    int width() const { return width_; }
    int height() const { return height_; }
    bool toroidal() const { return toroidal_; }

    const std::vector<Dot>& dots() const { return dots_; }
    std::size_t count() const { return dots_.size(); }

    int dotAt(int x, int y) const { return occupant_[index(x, y)]; }
    bool occupied(int x, int y) const { return dotAt(x, y) >= 0; }

    int addDot(int x, int y, bool fixed);
    // Swap-with-last removal; invalidates the index of the last dot.
    void removeDot(int idx);
    void removeDotAt(int x, int y);
    void moveDot(int idx, int nx, int ny);
    void setFixed(int idx, bool fixed) { dots_[idx].fixed = fixed; }

    // Shortest per-axis displacement a -> b (wrapped when toroidal).
    int wrapDx(int ax, int bx) const;
    int wrapDy(int ay, int by) const;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }
    int width_, height_;
    bool toroidal_;
    std::vector<Dot> dots_;
    std::vector<std::int32_t> occupant_;
};

struct LloydOptions {
    // Window of pixels whose Voronoi assignment is scanned and whose floating
    // dots move; pixel coords, half-open. Spans may exceed the field (wrapped)
    // on a toroidal field, and are clamped on a bounded one.
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    int maxIterations = 100;
    // Optional masks (world pixel coords). `region`: pixels that take part in
    // the Voronoi assignment. `allowed`: pixels a floating dot may occupy.
    std::function<bool(int, int)> region;
    std::function<bool(int, int)> allowed;
};

// Grid-snapped Lloyd relaxation. Every dot is a site; floating dots inside
// the window move to the (snapped) centroid of their assigned pixels. Stops
// when no dot moves or after maxIterations. Returns iterations run.
int lloydRelax(DotField& field, const LloydOptions& opt);

}  // namespace polydither
