#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "drift/contrast.hpp"
#include "drift/drift_model.hpp"
#include "drift/frames.hpp"
#include "drift/spectral.hpp"

namespace drift {

struct OptimizerConfig {
    std::vector<double> start;      // empty = all zero
    int max_iterations = 2000;
    double f_tol = 1e-10;           // absolute spread of simplex values
    double x_tol = 1e-8;            // max vertex distance to the best point
    double initial_step = 0.05;     // per-coordinate initial simplex offset
    std::vector<double> jump_grid;  // empty = {2/100, ..., 98/100}
    int subdomains = 1;             // per-axis split count; 1 = whole image
};

struct EstimationResult {
    DriftParams theta_hat;
    double contrast_value = 0.0;
    int iterations = 0;
    bool converged = false;
    std::optional<Image> reconstructed;
};

struct NelderMeadResult {
    std::vector<double> x;
    double fmin = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Nelder-Mead simplex search (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5), initial simplex start + step e_j.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const OptimizerConfig& config);

/// Parameter box checked on results: |theta_j| <= 2, jump time in [0.02, 0.98].
bool inside_theta_box(const DriftParams& params);

/// Minimize the empirical contrast. Polynomial families run a single
/// Nelder-Mead search; the jump family scans the jump-time grid and runs the
/// search over the six remaining coordinates per grid point.
EstimationResult estimate(const SpectralStack& stack, const DriftFamily& family,
                          const ContrastConfig& contrast_config, const OptimizerConfig& config);
EstimationResult estimate(const FrameStack& stack, const DriftFamily& family,
                          const ContrastConfig& contrast_config, const OptimizerConfig& config);

/// Realigned weighted average spectrum rescaled to image level: the raw
/// average carries a factor sum_t w_t n_t / N^2 for sparse stacks, so the
/// coefficients are multiplied by N^2 / sum_t w_t n_t (1 for dense stacks
/// with unknown counts).
SpectralImage reconstruct_spectrum(const SpectralStack& stack, const DriftParams& theta,
                                   const ContrastConfig& config);
Image reconstruct(const FrameStack& stack, const DriftParams& theta,
                  const ContrastConfig& config);

/// Half-open pixel rectangle [i1_lo, i1_hi) x [i2_lo, i2_hi).
struct PixelRect {
    int i1_lo = 0, i1_hi = 0, i2_lo = 0, i2_hi = 0;
};

/// Intensity-weighted centroid of the region per frame, in unit-square
/// coordinates (pixel centers at (i + 0.5)/N); frames with no mass in the
/// region yield no value.
std::vector<std::optional<Vec2>> track_fiducial(const FrameStack& stack, const PixelRect& region);

/// Flat key-value record of an estimation result.
std::string format_estimate_record(const EstimationResult& result, double xi, int T, int N);

}  // namespace drift
