#include "drift/blur.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace drift {

namespace {

/// Periodic 3x3 correlation: out(i,j) = sum_{a,b in -1..1} k[a+1][b+1] in(i+a, j+b).
Image correlate3x3(const Image& img, const double k[3][3]) {
    const int N = img.n();
    if (N < 3) throw std::invalid_argument("3x3 correlation needs at least a 3x3 grid");
    Image out(N);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N; ++i) {
        const int im = (i + N - 1) % N, ip = (i + 1) % N;
        for (int j = 0; j < N; ++j) {
            const int jm = (j + N - 1) % N, jp = (j + 1) % N;
            out(i, j) = k[0][0] * img(im, jm) + k[0][1] * img(im, j) + k[0][2] * img(im, jp) +
                        k[1][0] * img(i, jm) + k[1][1] * img(i, j) + k[1][2] * img(i, jp) +
                        k[2][0] * img(ip, jm) + k[2][1] * img(ip, j) + k[2][2] * img(ip, jp);
        }
    }
    return out;
}

constexpr double kGauss[3][3] = {{1.0 / 16, 2.0 / 16, 1.0 / 16},
                                 {2.0 / 16, 4.0 / 16, 2.0 / 16},
                                 {1.0 / 16, 2.0 / 16, 1.0 / 16}};
constexpr double kSobelX[3][3] = {{-1.0 / 8, 0.0, 1.0 / 8},
                                  {-2.0 / 8, 0.0, 2.0 / 8},
                                  {-1.0 / 8, 0.0, 1.0 / 8}};
constexpr double kSobelY[3][3] = {{-1.0 / 8, -2.0 / 8, -1.0 / 8},
                                  {0.0, 0.0, 0.0},
                                  {1.0 / 8, 2.0 / 8, 1.0 / 8}};

StructureTensor tensor_from(const SobelGradients& g) {
    // x1 is the first grid index, so dI/dx1 = gy and dI/dx2 = gx.
    StructureTensor D;
    for (std::size_t i = 0; i < g.gx.size(); ++i) {
        double d1 = g.gy[i];
        double d2 = g.gx[i];
        D.d11 += d1 * d1;
        D.d12 += d1 * d2;
        D.d22 += d2 * d2;
    }
    return D;
}

}  // namespace

Image gauss_smooth(const Image& img, int passes) {
    Image out = img;
    for (int p = 0; p < passes; ++p) out = correlate3x3(out, kGauss);
    return out;
}

SobelGradients sobel_gradient(const Image& img) {
    return {correlate3x3(img, kSobelX), correlate3x3(img, kSobelY)};
}

StructureTensor structure_tensor(const Image& smoothed) {
    return tensor_from(sobel_gradient(smoothed));
}

double directional_energy(const StructureTensor& D, double phi) {
    double c = std::cos(phi), s = std::sin(phi);
    return c * c * D.d11 + 2.0 * c * s * D.d12 + s * s * D.d22;
}

BlurMeasure motion_blur_m2(const Image& raw) {
    StructureTensor D = structure_tensor(gauss_smooth(raw));
    if (D.d11 + D.d22 == 0.0)
        throw std::domain_error("motion blur undefined for a constant image");

    double phi_m = 0.0;
    if (!(D.d12 == 0.0 && D.d11 == D.d22))
        phi_m = 0.5 * std::atan2(2.0 * D.d12, D.d11 - D.d22);
    // evaluate both extremal directions with one exact (cos, sin) pair so a
    // direction of true constancy yields an exact zero
    const double c = std::cos(phi_m), s = std::sin(phi_m);
    double j0 = c * c * D.d11 + 2.0 * c * s * D.d12 + s * s * D.d22;
    double j1 = s * s * D.d11 - 2.0 * s * c * D.d12 + c * c * D.d22;

    BlurMeasure out;
    out.phi_min = j0 <= j1 ? phi_m : phi_m + std::numbers::pi / 2.0;
    double jmin = std::min(j0, j1), jmax = std::max(j0, j1);
    out.m2 = jmin == 0.0 ? std::numeric_limits<double>::infinity() : std::log(jmax / jmin);
    return out;
}

double motion_blur_known_direction(const Image& raw, Vec2 direction) {
    double norm = std::hypot(direction.x1, direction.x2);
    if (norm == 0.0) throw std::invalid_argument("motion blur direction must be nonzero");
    double u1 = direction.x1 / norm, u2 = direction.x2 / norm;

    StructureTensor D = structure_tensor(gauss_smooth(raw));
    // Rot_{pi/2} u = (-u2, u1)
    double num = u2 * u2 * D.d11 - 2.0 * u1 * u2 * D.d12 + u1 * u1 * D.d22;
    double den = u1 * u1 * D.d11 + 2.0 * u1 * u2 * D.d12 + u2 * u2 * D.d22;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return std::log(num / den);
}

Vec2 mean_drift_direction(const DriftParams& params) {
    if (params.family.kind == FamilyKind::polynomial) return evaluate_drift(params, 1.0);
    double t0 = params.t0();
    Vec2 at_t0 = evaluate_drift(params, t0);
    Vec2 at_1 = evaluate_drift(params, 1.0);
    Vec2 after{params.theta[2], params.theta[5]};  // limit from above at t0
    return {t0 * at_t0.x1 + (1.0 - t0) * (at_1.x1 - after.x1),
            t0 * at_t0.x2 + (1.0 - t0) * (at_1.x2 - after.x2)};
}

}  // namespace drift
