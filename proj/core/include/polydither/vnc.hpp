#pragma once

#include "polydither/halftone.hpp"

#include <cstdint>
#include <vector>

namespace polydither {

// Square void-and-cluster threshold matrix (the comparison baseline).
struct VncMatrix {
    int n = 0;
    std::vector<int> thresholds;  // n x n permutation of 0..n^2-1

    int at(int x, int y) const { return thresholds[static_cast<std::size_t>(y) * n + x]; }
};

// Standard three-phase void-and-cluster on an n x n torus with Gaussian
// sigma; d0 is the prototype pattern density (must stay below 1/2).
VncMatrix voidAndClusterMatrix(int n, double d0, double sigma, std::uint64_t seed);

// Thresholds a constant gray level against the tiled matrix, mid-rank
// normalization (t + 0.5)/n^2, black where the sample is below.
BinaryImage vncDitherConstant(const VncMatrix& matrix, double gray, int width, int height);

}  // namespace polydither
