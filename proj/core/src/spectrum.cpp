#include "polydither/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polydither {

namespace {

// 2-D power spectrum |DFT|^2 / N^2 of the mean-removed patch, in natural DFT
// layout (DC at [0][0]).
std::vector<double> patchPower(const BinaryImage& patch) {
    const int n = patch.width;
    std::vector<double> input(static_cast<std::size_t>(n) * n);
    double mean = static_cast<double>(patch.onesCount()) / (static_cast<double>(n) * n);
    for (std::size_t i = 0; i < input.size(); ++i)
        input[i] = patch.pixels[i] - mean;

    const int hc = n / 2 + 1;
    std::vector<fftw_complex> out(static_cast<std::size_t>(n) * hc);
    fftw_plan plan = fftw_plan_dft_r2c_2d(n, n, input.data(), out.data(), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    std::vector<double> power(static_cast<std::size_t>(n) * n);
    double norm = static_cast<double>(n) * n;
    for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < n; ++kx) {
            int sx = kx, sy = ky;
            bool conj = sx >= hc;
            if (conj) {  // reconstruct the redundant half from Hermitian symmetry
                sx = (n - kx) % n;
                sy = (n - ky) % n;
            }
            const fftw_complex& c = out[static_cast<std::size_t>(sy) * hc + sx];
            power[static_cast<std::size_t>(ky) * n + kx] = (c[0] * c[0] + c[1] * c[1]) / norm;
        }
    return power;
}

}  // namespace

SpectrumEstimate estimateSpectrum(const std::vector<BinaryImage>& patches,
                                  double blurSigma) {
    if (patches.empty())
        throw std::invalid_argument("estimateSpectrum needs at least one patch");
    const int n = patches.front().width;
    if (n < 2 || patches.front().height != n)
        throw std::invalid_argument("patches must be square");
    for (const BinaryImage& p : patches)
        if (p.width != n || p.height != n)
            throw std::invalid_argument("patches must share one size");

    std::vector<double> total(static_cast<std::size_t>(n) * n, 0.0);
    for (const BinaryImage& p : patches) {
        std::vector<double> power = patchPower(p);
        for (std::size_t i = 0; i < total.size(); ++i)
            total[i] += power[i];
    }

    SpectrumEstimate spec;
    spec.size = n;
    spec.dcPower = total[0];

    // Radial bins of width 1/n over [0, Nyquist]; frequencies past Nyquist
    // (the spectrum corners) fall into the last bin so no energy is dropped.
    const int bins = n / 2;
    spec.radialFrequency.resize(bins);
    spec.radialPower.assign(bins, 0.0);
    spec.anisotropy.assign(bins, 0.0);
    spec.radialCount.assign(bins, 0);
    std::vector<double> sumSq(bins, 0.0);
    for (int b = 0; b < bins; ++b)
        spec.radialFrequency[b] = (b + 0.5) / n;
    for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < n; ++kx) {
            if (kx == 0 && ky == 0)
                continue;  // DC reported separately
            double fx = (kx <= n / 2 ? kx : kx - n) / static_cast<double>(n);
            double fy = (ky <= n / 2 ? ky : ky - n) / static_cast<double>(n);
            double f = std::sqrt(fx * fx + fy * fy);
            int b = std::min(static_cast<int>(f * n), bins - 1);
            double v = total[static_cast<std::size_t>(ky) * n + kx];
            spec.radialPower[b] += v;
            sumSq[b] += v * v;
            spec.radialCount[b] += 1;
        }
    for (int b = 0; b < bins; ++b) {
        int c = spec.radialCount[b];
        if (c == 0)
            continue;
        double mean = spec.radialPower[b] / c;
        spec.radialPower[b] = mean;
        double var = sumSq[b] / c - mean * mean;
        spec.anisotropy[b] = mean > 0 ? std::max(var, 0.0) / (mean * mean) : 0.0;
    }

    // DC-centered 2-D view, optionally blurred for display.
    spec.averagedPower.resize(total.size());
    for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < n; ++kx)
            spec.averagedPower[static_cast<std::size_t>((ky + n / 2) % n) * n +
                               (kx + n / 2) % n] = total[static_cast<std::size_t>(ky) * n + kx];
    if (blurSigma > 0) {
        int r = static_cast<int>(std::ceil(3 * blurSigma));
        std::vector<double> kernel(2 * r + 1);
        double ksum = 0;
        for (int i = -r; i <= r; ++i)
            ksum += kernel[i + r] = std::exp(-i * i / (2 * blurSigma * blurSigma));
        for (double& k : kernel)
            k /= ksum;
        std::vector<double> tmp(total.size());
        auto& img = spec.averagedPower;
        for (int y = 0; y < n; ++y)  // horizontal pass, clamped edges
            for (int x = 0; x < n; ++x) {
                double s = 0;
                for (int i = -r; i <= r; ++i)
                    s += kernel[i + r] * img[std::size_t(y) * n + std::clamp(x + i, 0, n - 1)];
                tmp[std::size_t(y) * n + x] = s;
            }
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                double s = 0;
                for (int i = -r; i <= r; ++i)
                    s += kernel[i + r] * tmp[std::size_t(std::clamp(y + i, 0, n - 1)) * n + x];
                img[std::size_t(y) * n + x] = s;
            }
    }
    return spec;
}

double lowFrequencyEnergyRatio(const SpectrumEstimate& spec, double g) {
    if (g <= 0 || g >= 1)
        throw std::invalid_argument("gray level must be strictly inside (0, 1)");
    double fg = std::sqrt(std::min(g, 1.0 - g));
    double split = fg / 2.0;
    double lowSum = 0, highSum = 0;
    int lowN = 0, highN = 0;
    for (int b = 0; b < spec.bins(); ++b) {
        if (spec.radialFrequency[b] > 0.5)
            break;  // corner tail is not part of [0, Nyquist]
        if (spec.radialFrequency[b] < split) {
            lowSum += spec.radialPower[b];
            ++lowN;
        } else {
            highSum += spec.radialPower[b];
            ++highN;
        }
    }
    if (lowN == 0 || highN == 0)
        throw std::invalid_argument("low-frequency band is empty at this level");
    return (lowSum / lowN) / (highSum / highN);
}

std::vector<double> radialPeakScores(const SpectrumEstimate& spec, int window) {
    std::vector<double> scores(spec.bins(), 0.0);
    for (int b = 0; b < spec.bins(); ++b) {
        double sum = 0;
        int count = 0;
        for (int i = b - window; i <= b + window; ++i) {
            if (i == b || i < 0 || i >= spec.bins())
                continue;
            sum += spec.radialPower[i];
            ++count;
        }
        double background = count > 0 ? sum / count : 0.0;
        scores[b] = background > 0 ? spec.radialPower[b] / background : 0.0;
    }
    return scores;
}

}  // namespace polydither
