#pragma once

#include "drift/contrast.hpp"
#include "drift/frames.hpp"
#include "drift/spectral.hpp"

namespace drift::reference {

/// Direct double-sum DFT, O(N^2) per mode. Oracle for the FFT-backed dft2.
SpectralImage dft2_direct(const Image& frame, double xi);

/// Direct serial contrast evaluation: one complex exponential per (k, t),
/// plain accumulation. Oracle for the parallel kernel.
double tilde_contrast_direct(const DriftParams& theta, const SpectralStack& stack,
                             const ContrastConfig& config);

/// Serial periodic 3x3 correlation. Oracle for the row-parallel version.
Image correlate3x3_direct(const Image& img, const double kernel[3][3]);

/// Exhaustive linear-drift search over slopes theta = (c1, c2) T / N,
/// |c_r| <= max_step pixels per frame, so every frame shift is an integer
/// pixel count. Returns the contrast-minimizing parameters.
DriftParams integer_shift_search(const SpectralStack& stack, const ContrastConfig& config,
                                 int max_step);

}  // namespace drift::reference
