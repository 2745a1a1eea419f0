#pragma once

#include "polydither/rank_table.hpp"

#include <cstdint>
#include <vector>

namespace polydither {

class UnknownClass : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GrayImage {
    int width = 0, height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, 0 = black, 255 = white

    GrayImage() = default;
    GrayImage(int w, int h) : width(w), height(h), pixels(std::size_t(w) * h, 0) {}
    std::uint8_t& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
};

struct BinaryImage {
    int width = 0, height = 0;
    std::vector<std::uint8_t> pixels;  // 1 = black dot

    BinaryImage() = default;
    BinaryImage(int w, int h) : width(w), height(h), pixels(std::size_t(w) * h, 0) {}
    std::uint8_t& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
    std::size_t onesCount() const {
        std::size_t n = 0;
        for (auto p : pixels)
            n += p;
        return n;
    }
};

// Per-pixel threshold ranks for a viewport of the infinite threshold plane.
// offset shifts the viewport; the same plane pixel always gets the same rank
// regardless of the viewport that samples it.
struct ThresholdView {
    int width = 0, height = 0;
    int S = 0;
    std::vector<std::uint16_t> ranks;  // row-major

    int levels() const { return 6 * S * S; }
    int rankAt(int x, int y) const { return ranks[std::size_t(y) * width + x]; }
    double thresholdAt(int x, int y) const {
        return (rankAt(x, y) + 0.5) / levels();
    }
};

ThresholdView buildThresholdView(int width, int height, const StructureRegistry& registry,
                                 const GeometryTable& geometry, const RankTable& table,
                                 long long offsetX = 0, long long offsetY = 0);

// Black wherever the sample is below the local threshold.
BinaryImage dither(const GrayImage& image, const ThresholdView& view);
BinaryImage ditherConstant(double gray, const ThresholdView& view);
// Horizontal ramp, gray 0 at the left edge to 1 at the right edge.
BinaryImage ditherRamp(const ThresholdView& view);

}  // namespace polydither
