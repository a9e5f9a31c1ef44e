#pragma once

#include "drift/drift_model.hpp"
#include "drift/grid.hpp"

namespace drift {

/// Smooth with the 3x3 kernel (1/16)(1,2,1; 2,4,2; 1,2,1), periodic
/// extension. The blur measures apply two passes.
Image gauss_smooth(const Image& img, int passes = 2);

/// Sobel gradients by 3x3 correlation with periodic extension, reading the
/// first grid index as the mask row: gx is the derivative along the second
/// index, gy along the first.
struct SobelGradients {
    Grid gx;
    Grid gy;
};
SobelGradients sobel_gradient(const Image& img);

/// d_rs = sum_j dI/dx_r dI/dx_s in image coordinates (x1 = first index).
struct StructureTensor {
    double d11 = 0.0;
    double d12 = 0.0;
    double d22 = 0.0;
};
StructureTensor structure_tensor(const Image& smoothed);

/// J(phi) = (cos, sin) D (cos, sin)'.
double directional_energy(const StructureTensor& D, double phi);

struct BlurMeasure {
    double m2 = 0.0;      // log(J(phi_max) / J(phi_min)); +inf when J(phi_min)=0
    double phi_min = 0.0;  // motion direction angle, radians
};

/// Motion blur with the direction estimated from the structure tensor of the
/// twice-smoothed image.
BlurMeasure motion_blur_m2(const Image& raw);

/// Motion blur for a known drift direction: log of perpendicular over
/// parallel squared directional gradient energy (smoothing applied
/// internally). Returns +inf when the parallel energy vanishes.
double motion_blur_known_direction(const Image& raw, Vec2 direction);

/// Direction used for the known-direction measure: delta_1 for polynomial
/// drift; for the jump family t0 delta_{t0} + (1-t0)(delta_1 - delta_{t0+}).
Vec2 mean_drift_direction(const DriftParams& params);

}  // namespace drift
