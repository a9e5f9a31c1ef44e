#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "drift/contrast.hpp"
#include "drift/drift_model.hpp"
#include "drift/estimator.hpp"
#include "drift/frames.hpp"

namespace drift {

struct ResidualStats {
    std::vector<double> residuals;  // at observed pixel-time pairs
    double sigma_hat = 0.0;         // their empirical (population) sd
};

/// r = Z_{j,t} - f_hat(x_j - delta_t^theta_hat) at observed pairs; f_hat is
/// the band-limited reconstruction, evaluated at shifted grid positions
/// through its spectrum.
ResidualStats residuals(const FrameStack& stack, const DriftParams& theta_hat,
                        const SpectralImage& f_hat);

struct BootstrapConfig {
    int B = 200;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int time_grid = 256;
};

struct BootstrapBands {
    double sigma_hat = 0.0;
    double u_plus[2] = {0.0, 0.0};   // per drift component
    double u_minus[2] = {0.0, 0.0};
    double alpha = 0.05;
    int B_requested = 0;
    int B_effective = 0;  // replicates that estimated successfully
    DriftParams theta_hat;
    std::vector<DriftParams> replicates;
    std::vector<double> replicate_sigmas;  // sigma_hat^(b), the Delta denominators
    std::vector<SpectralImage> replicate_spectra;

    /// Band shape g(t) = t (zero width at t = 0).
    static double shape(double t) { return t; }
    double upper(int component, double t) const;
    double lower(int component, double t) const;
};

/// Residual bootstrap: replicate data f_hat(x_j - delta_t) + resampled
/// residuals at the original observed pairs, re-estimated with theta_hat as
/// the start point; per-component (u+, u-) minimize u+ + u- subject to at
/// least ceil((1-alpha) B) replicate curves inside the band.
BootstrapBands bootstrap_bands(const FrameStack& stack, const DriftParams& theta_hat,
                               const SpectralImage& f_hat, const ContrastConfig& cc,
                               const OptimizerConfig& oc, const BootstrapConfig& bc);

/// Average of the replicate reconstructions whose drift curves are the
/// floor((1-alpha) B) nearest to theta_hat in supremum-norm distance.
Image bootstrap_average_image(const FrameStack& stack, const BootstrapBands& bands,
                              const ContrastConfig& cc);

/// Exact order-statistic band fit, exposed for direct testing: curves[b][i]
/// are standardized deviations on the grid, g the shape values; minimizes
/// u+ + u- with at least ceil((1-alpha) B) curves inside [-u+ g, u- g].
struct BandFit {
    double u_plus = 0.0;
    double u_minus = 0.0;
    int inside = 0;
};
BandFit fit_band(const std::vector<std::vector<double>>& curves, const std::vector<double>& g,
                 double alpha);

}  // namespace drift
