#pragma once

#include <optional>
#include <vector>

#include "drift/drift_model.hpp"
#include "drift/spectral.hpp"

namespace drift {

struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    Mat2 inverse() const;
    Mat2 operator*(const Mat2& o) const;
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
};

struct CovariancePair {
    Mat2 sigma;
    Mat2 sigma_tilde;
    double determinant = 0.0;  // det(sigma) via the double-sum form
};

/// Linear-drift limit matrices: Sigma = (1/12) sum_k |f_k|^2 (k k'),
/// SigmaTilde with sigma_A^2 = sigma_B^2 = sigma_sq, summed over the window
/// of f. The determinant field uses
/// (1/144) sum_{k,l} |f_k|^2 |f_l|^2 (k1^2 l2^2 - k1 k2 l1 l2).
CovariancePair linear_drift_covariances(const SpectralImage& f, double sigma_sq);

/// Sandwich (1 / 4 pi^2) Sigma^{-1} SigmaTilde Sigma^{-1}; requires
/// det(Sigma) > 1e-12 trace(Sigma)^2.
Mat2 clt_covariance(const CovariancePair& pair);

/// Null direction of Sigma when det(Sigma) <= tolerance * trace(Sigma)^2
/// (the image is then constant along it); none otherwise. A constant image
/// reports (1, 0).
std::optional<Vec2> is_directionally_constant(const SpectralImage& f, double tolerance);

/// General-family limit matrices via quadrature of
/// q_k = int g g' dt - (int g dt)(int g dt)', g(t) = grad_theta <k, delta_t>.
/// Row-major dim x dim; polynomial families only.
struct CovarianceMatrices {
    int dim = 0;
    std::vector<double> sigma;
    std::vector<double> sigma_tilde;
};
CovarianceMatrices drift_covariances(const SpectralImage& f, const DriftParams& theta0,
                                     double sigma_sq, int quad_intervals = 2048);

}  // namespace drift
