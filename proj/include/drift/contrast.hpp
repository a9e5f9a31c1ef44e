#pragma once

#include <vector>

#include "drift/drift_model.hpp"
#include "drift/spectral.hpp"

namespace drift {

/// Cutoff and per-frame weights for the contrast functional. Empty weights
/// mean uniform 1/T; `counts` weights are n_t / sum n_s.
struct ContrastConfig {
    double xi = 0.0;
    std::vector<double> weights;

    static ContrastConfig uniform(double cutoff) { return ContrastConfig{cutoff, {}}; }
    static ContrastConfig count_weighted(double cutoff, const std::vector<std::int64_t>& counts);
};

/// Weights actually used: validates and defaults to uniform.
std::vector<double> effective_weights(const ContrastConfig& config, int T);

/// S_k = sum_t w_t h_k(delta_t^theta) Y^t_k over the config window, drift
/// evaluated at frame times t/T. The per-mode sums over t run compensated
/// and in fixed order, so results do not depend on the thread count.
std::vector<cdouble> realigned_average(const DriftParams& theta, const SpectralStack& stack,
                                       const ContrastConfig& config);

/// -sum_k |S_k|^2.
double tilde_contrast(const DriftParams& theta, const SpectralStack& stack,
                      const ContrastConfig& config);

/// sum_k sum_t w_t |h_k(delta_t) Y^t_k - S_k|^2, a sum of squared deviations
/// (nonnegative; equals contrast_offset + tilde_contrast up to roundoff).
double full_contrast(const DriftParams& theta, const SpectralStack& stack,
                     const ContrastConfig& config);

/// The theta-independent part sum_k sum_t w_t |Y^t_k|^2.
double contrast_offset(const SpectralStack& stack, const ContrastConfig& config);

/// Population contrast -sum_k |f_k|^2 |int_0^1 h_k(delta_t^theta -
/// delta_t^theta0) dt|^2 with the time integral by composite Simpson
/// quadrature over `quad_intervals` subintervals.
double population_contrast(const DriftParams& theta, const DriftParams& theta0,
                           const SpectralImage& f, int quad_intervals = 2048);

}  // namespace drift
