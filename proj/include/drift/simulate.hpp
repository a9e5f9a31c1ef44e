#pragma once

#include <cstdint>
#include <vector>

#include "drift/drift_model.hpp"
#include "drift/frames.hpp"
#include "drift/grid.hpp"

namespace drift {

enum class NoiseKind { gaussian, student_t2, poisson };

struct NoiseModel {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 0.1;  // Gaussian sd / t2 scale; unused for Poisson

    static NoiseModel gaussian(double sigma) { return {NoiseKind::gaussian, sigma}; }
    static NoiseModel student_t2(double scale) { return {NoiseKind::student_t2, scale}; }
    static NoiseModel poisson() { return {NoiseKind::poisson, 0.0}; }
};

struct SimulationSpec {
    Image image;  // ground truth, nonnegative
    DriftParams drift;
    int T = 1;
    NoiseModel noise;
    std::uint64_t seed = 0;
};

/// One frame index per pixel, each independently uniform on {0..T-1};
/// deterministic for a fixed seed (per-pixel substreams).
std::vector<int> sample_times(int N, int T, std::uint64_t seed);

/// Sparse pixel-time sampling: pixel j contributes at frame t_j only, placed
/// at x_j + rounded drift (wrapped on the torus), with the noise model
/// applied to f(x_j). Counts hold n_t and the observation mask marks the
/// touched pixel-time pairs.
FrameStack simulate_stack(const SimulationSpec& spec);

/// sqrt(z + 1/4) on observed entries; unobserved zeros stay zero.
FrameStack variance_stabilize(const FrameStack& stack);

/// Deterministic synthetic ground-truth image: a handful of curved filaments
/// and blobs, values in [0, 1], mean intensity near 0.045.
Image filament_phantom(int N);

/// Band-limited version of an image, clipped into [lo, hi] by an affine map
/// of the mode-0 coefficient (the shape stays inside the window).
Image band_limited_phantom(const Image& source, double xi);

}  // namespace drift
