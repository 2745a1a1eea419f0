#include "polydither/halftone.hpp"

#include <algorithm>
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

int floorDiv(long long a, int b) {
    return static_cast<int>(a >= 0 ? a / b : (a - b + 1) / b);
}

}  // namespace

ThresholdView buildThresholdView(int width, int height, const StructureRegistry& registry,
                                 const GeometryTable& geometry, const RankTable& table,
                                 long long offsetX, long long offsetY) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("threshold view must be at least 1x1 px");
    const int S = table.S;
    if (geometry.S != S)
        throw std::invalid_argument("geometry and rank table pixel scales differ");

    // The viewport's plane pixel (offsetX, offsetY) becomes view pixel (0, 0);
    // split the offset into whole cells (handed to the tiler) plus a sub-cell
    // pixel remainder.
    int cellOffX = floorDiv(offsetX, S), cellOffY = floorDiv(offsetY, S);
    int remX = static_cast<int>(offsetX - static_cast<long long>(cellOffX) * S);
    int remY = static_cast<int>(offsetY - static_cast<long long>(cellOffY) * S);
    int cellsW = (width + remX + S - 1) / S;
    int cellsH = (height + remY + S - 1) / S;

    Tiling tiling = coverRectangleAuto(cellsW, cellsH, registry.shape, registry.rule,
                                       cellOffX, cellOffY);
    std::vector<int> classIds(tiling.tiles().size(), -2);
    std::vector<Cell> origins(tiling.tiles().size());

    ThresholdView view;
    view.width = width;
    view.height = height;
    view.S = S;
    view.ranks.assign(static_cast<std::size_t>(width) * height, 0);

    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            int px = x + remX, py = y + remY;
            int tile = tiling.ownerAt(px / S, py / S);
            if (tile < 0)
                throw UnknownClass("threshold view pixel not covered by the tiling");
            if (classIds[tile] == -2) {
                classIds[tile] = registry.classId(classifySignatureAt(tiling, tile));
                origins[tile] = cellsBboxMin(
                    transformedCells(registry.shape, tiling.tiles()[tile].transform));
            }
            int id = classIds[tile];
            if (id < 0) {
                std::ostringstream os;
                os << "tile at view pixel (" << x << ", " << y
                   << ") has a structural index unknown to the rank table";
                throw UnknownClass(os.str());
            }
            int pix = geometry.classes[id].pixelIndex(px - origins[tile].x * S,
                                                      py - origins[tile].y * S);
            if (pix < 0)
                throw UnknownClass("view pixel missing from its tile frame");
            view.ranks[static_cast<std::size_t>(y) * width + x] =
                static_cast<std::uint16_t>(table.perClass[id][pix]);
        }
    return view;
}

BinaryImage dither(const GrayImage& image, const ThresholdView& view) {
    if (image.width != view.width || image.height != view.height)
        throw std::invalid_argument("image and threshold view sizes differ");
    BinaryImage out(image.width, image.height);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            double sample = image.at(x, y) / 255.0;
            out.at(x, y) = sample < view.thresholdAt(x, y) ? 1 : 0;
        }
    return out;
}

BinaryImage ditherConstant(double gray, const ThresholdView& view) {
    BinaryImage out(view.width, view.height);
    for (int y = 0; y < view.height; ++y)
        for (int x = 0; x < view.width; ++x)
            out.at(x, y) = gray < view.thresholdAt(x, y) ? 1 : 0;
    return out;
}

BinaryImage ditherRamp(const ThresholdView& view) {
    if (view.width < 2)
        throw std::invalid_argument("ramp needs at least 2 columns");
    BinaryImage out(view.width, view.height);
    for (int y = 0; y < view.height; ++y)
        for (int x = 0; x < view.width; ++x) {
            double gray = static_cast<double>(x) / (view.width - 1);
            out.at(x, y) = gray < view.thresholdAt(x, y) ? 1 : 0;
        }
    return out;
}

}  // namespace polydither
