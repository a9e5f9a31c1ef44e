#pragma once

#include <complex>
#include <vector>

#include "drift/drift_model.hpp"
#include "drift/frames.hpp"
#include "drift/grid.hpp"

namespace drift {

using cdouble = std::complex<double>;

/// Square symmetric mode window k in {-K..K}^2 with K = floor(xi/2).
/// On an N-grid, modes are representatives of Z_N^2; for K = N/2 the border
/// modes +N/2 and -N/2 alias to the same grid frequency.
struct SpectralWindow {
    int K = 0;

    static SpectralWindow from_cutoff(double xi);

    int side() const { return 2 * K + 1; }
    std::size_t count() const { return static_cast<std::size_t>(side()) * side(); }
    std::size_t index(int k1, int k2) const {
        return static_cast<std::size_t>(k1 + K) * side() + static_cast<std::size_t>(k2 + K);
    }
    bool contains(const SpectralWindow& inner) const { return inner.K <= K; }
    bool operator==(const SpectralWindow&) const = default;
};

/// Windowed Fourier coefficients of a single image.
struct SpectralImage {
    int N = 0;
    SpectralWindow window;
    std::vector<cdouble> coeffs;  // window.count() values, (k1,k2) row-major

    cdouble at(int k1, int k2) const { return coeffs[window.index(k1, k2)]; }
};

/// Per-frame windowed Fourier coefficients of a frame stack.
struct SpectralStack {
    int T = 0;
    int N = 0;
    double xi = 0.0;
    SpectralWindow window;
    std::vector<std::vector<cdouble>> coeffs;  // [t][mode]
    std::vector<std::int64_t> counts;
};

/// Windowed 2d DFT, Y_k = (1/N^2) sum_j Z_j exp(-2 pi i <k, x_j>) with
/// x_j = j/N, computed through an FFT.
SpectralImage dft2(const Image& frame, double xi);

/// dft2 of every frame; frames transform in parallel.
SpectralStack dft2_stack(const FrameStack& stack, double xi);

/// Multiply every coefficient by the unit phase h_k(delta) = exp(2 pi i <k, delta>).
SpectralImage phase_shift(const SpectralImage& img, Vec2 delta);
void phase_shift_inplace(std::vector<cdouble>& coeffs, const SpectralWindow& window, Vec2 delta);

/// Band-limited synthesis sum_k c_k exp(2 pi i <k, x>) on the N-grid. The
/// imaginary residue must stay below `imag_tol` (conjugate-symmetric input),
/// otherwise a symmetry error is thrown.
Image reconstruct_image(const SpectralImage& img, int N, double imag_tol = 1e-9);

namespace fft {
/// Unnormalized transforms out_k = sum_j in_j exp(-/+ 2 pi i <j,k> / N);
/// thread-safe once a plan for N exists (plans are cached).
void forward2d(const cdouble* in, cdouble* out, int N);
void backward2d(const cdouble* in, cdouble* out, int N);
}  // namespace fft

}  // namespace drift
