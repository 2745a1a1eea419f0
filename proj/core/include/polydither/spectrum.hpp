#pragma once

#include "polydither/halftone.hpp"

#include <cstdint>
#include <vector>

namespace polydither {

// Radially averaged power spectrum of dithered constant patches. Power is
// |DFT|^2 / size^2 of the mean-removed patch, summed across patches, so the
// total (pre-blur, DC excluded) equals the summed patch variances x size^2.
struct SpectrumEstimate {
    int size = 0;
    double dcPower = 0.0;                 // reported separately from the bins
    std::vector<double> averagedPower;    // 2-D, DC centered; post-blur if blurSigma > 0
    std::vector<double> radialFrequency;  // cycles/pixel, floor(size/2) bins
    std::vector<double> radialPower;      // per-bin mean power (always pre-blur)
    std::vector<double> anisotropy;       // per-bin variance / mean^2
    std::vector<int> radialCount;         // cells per bin

    int bins() const { return static_cast<int>(radialPower.size()); }
};

SpectrumEstimate estimateSpectrum(const std::vector<BinaryImage>& patches,
                                  double blurSigma = 0.0);

// (mean radial power below f_g/2) / (mean radial power in [f_g/2, Nyquist])
// with principal frequency f_g = sqrt(min(g, 1-g)).
double lowFrequencyEnergyRatio(const SpectrumEstimate& spec, double g);

// Per-bin peak score: bin power relative to the mean of its radial
// neighborhood (+-window bins, the bin itself excluded). DC is not a bin.
std::vector<double> radialPeakScores(const SpectrumEstimate& spec, int window = 3);

}  // namespace polydither
