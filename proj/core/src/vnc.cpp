#include "polydither/vnc.hpp"

#include "polydither/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace polydither {

namespace {

// Incrementally maintained toroidal Gaussian energy of the current 1s.
struct Energy {
    int n;
    std::vector<double> kernel;  // wrapped Gaussian, n x n
    std::vector<double> field;

    Energy(int n, double sigma) : n(n), kernel(std::size_t(n) * n), field(std::size_t(n) * n, 0.0) {
        for (int dy = 0; dy < n; ++dy)
            for (int dx = 0; dx < n; ++dx) {
                int wx = std::min(dx, n - dx), wy = std::min(dy, n - dy);
                kernel[std::size_t(dy) * n + dx] =
                    std::exp(-(wx * wx + wy * wy) / (2.0 * sigma * sigma));
            }
    }

    void add(int x, int y, double sign) {
        for (int py = 0; py < n; ++py) {
            const double* krow = &kernel[std::size_t((py - y + n) % n) * n];
            double* frow = &field[std::size_t(py) * n];
            for (int px = 0; px < n; ++px)
                frow[px] += sign * krow[(px - x + n) % n];
        }
    }

    // Extreme-energy pixel among those with the given bit value; ties go to
    // the lexicographically smallest (y, x).
    int pick(const std::vector<std::uint8_t>& bits, std::uint8_t value, bool maximize) const {
        int best = -1;
        double bestE = 0;
        for (int i = 0; i < n * n; ++i) {
            if (bits[i] != value)
                continue;
            if (best < 0 || (maximize ? field[i] > bestE : field[i] < bestE)) {
                best = i;
                bestE = field[i];
            }
        }
        return best;
    }
};

}  // namespace

VncMatrix voidAndClusterMatrix(int n, double d0, double sigma, std::uint64_t seed) {
    if (n < 2)
        throw std::invalid_argument("matrix edge must be at least 2");
    const int total = n * n;
    const int ones = static_cast<int>(d0 * total + 0.5);
    if (ones < 1 || ones >= total / 2)
        throw std::invalid_argument("prototype density must give 1 <= dots < n^2/2");

    std::vector<std::uint8_t> bits(total, 0);
    Energy energy(n, sigma);
    Rng rng(subSeed(seed, "vnc"));
    for (int placed = 0; placed < ones;) {
        int x = rng.intBelow(n), y = rng.intBelow(n);
        if (!bits[std::size_t(y) * n + x]) {
            bits[std::size_t(y) * n + x] = 1;
            energy.add(x, y, 1.0);
            ++placed;
        }
    }

    // Prototype relaxation: move the tightest cluster into the largest void
    // until they coincide.
    for (int guard = 0; guard < total * 8; ++guard) {
        int cluster = energy.pick(bits, 1, true);
        bits[cluster] = 0;
        energy.add(cluster % n, cluster / n, -1.0);
        int voidPos = energy.pick(bits, 0, false);
        bits[voidPos] = 1;
        energy.add(voidPos % n, voidPos / n, 1.0);
        if (voidPos == cluster)
            break;
    }

    VncMatrix matrix;
    matrix.n = n;
    matrix.thresholds.assign(total, -1);

    // Phase 1: rank the prototype dots by removing the tightest cluster.
    {
        std::vector<std::uint8_t> work = bits;
        Energy e(n, sigma);
        for (int i = 0; i < total; ++i)
            if (work[i])
                e.add(i % n, i / n, 1.0);
        for (int rank = ones - 1; rank >= 0; --rank) {
            int pos = e.pick(work, 1, true);
            work[pos] = 0;
            e.add(pos % n, pos / n, -1.0);
            matrix.thresholds[pos] = rank;
        }
    }
    // Phases 2 and 3: fill the largest void. With a full toroidal Gaussian,
    // the classic phase-3 inversion (tightest cluster of 0s) selects the same
    // pixel as the largest-void rule, so one loop covers both phases.
    for (int rank = ones; rank < total; ++rank) {
        int pos = energy.pick(bits, 0, false);
        bits[pos] = 1;
        energy.add(pos % n, pos / n, 1.0);
        matrix.thresholds[pos] = rank;
    }
    return matrix;
}

BinaryImage vncDitherConstant(const VncMatrix& matrix, double gray, int width, int height) {
    BinaryImage out(width, height);
    double denom = static_cast<double>(matrix.n) * matrix.n;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double threshold = (matrix.at(x % matrix.n, y % matrix.n) + 0.5) / denom;
            out.at(x, y) = gray < threshold ? 1 : 0;
        }
    return out;
}

}  // namespace polydither
