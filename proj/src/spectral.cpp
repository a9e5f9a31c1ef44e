#include "drift/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace drift {

namespace fft {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// FFTW's planner is not thread-safe; executing distinct plans/arrays is.
// FFTW_UNALIGNED lets the cached plans run on ordinary vector storage.
PlanPair plans_for(int N) {
    static std::mutex mtx;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    std::vector<cdouble> a(static_cast<std::size_t>(N) * N), b(a.size());
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    PlanPair p;
    p.fwd = fftw_plan_dft_2d(N, N, ap, bp, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_2d(N, N, ap, bp, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
    cache[N] = p;
    return p;
}

}  // namespace

void forward2d(const cdouble* in, cdouble* out, int N) {
    auto p = plans_for(N);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void backward2d(const cdouble* in, cdouble* out, int N) {
    auto p = plans_for(N);
    fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace fft

SpectralWindow SpectralWindow::from_cutoff(double xi) {
    if (!(xi >= 1.0)) throw std::invalid_argument("cutoff must be >= 1");
    return SpectralWindow{static_cast<int>(std::floor(xi / 2.0))};
}

SpectralImage dft2(const Image& frame, double xi) {
    const int N = frame.n();
    if (N < 2) throw std::invalid_argument("dft2: grid must be at least 2x2");
    if (xi > N) throw std::invalid_argument("dft2: cutoff exceeds grid size");
    SpectralImage out;
    out.N = N;
    out.window = SpectralWindow::from_cutoff(xi);

    std::vector<cdouble> in(frame.size()), full(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) in[i] = frame[i];
    fft::forward2d(in.data(), full.data(), N);

    const int K = out.window.K;
    const double scale = 1.0 / (static_cast<double>(N) * N);
    out.coeffs.resize(out.window.count());
    for (int k1 = -K; k1 <= K; ++k1) {
        int b1 = ((k1 % N) + N) % N;
        for (int k2 = -K; k2 <= K; ++k2) {
            int b2 = ((k2 % N) + N) % N;
            out.coeffs[out.window.index(k1, k2)] =
                full[static_cast<std::size_t>(b1) * N + static_cast<std::size_t>(b2)] * scale;
        }
    }
    return out;
}

SpectralStack dft2_stack(const FrameStack& stack, double xi) {
    SpectralStack out;
    out.T = stack.T;
    out.N = stack.N;
    out.xi = xi;
    out.window = SpectralWindow::from_cutoff(xi);
    out.counts = stack.counts;
    out.coeffs.resize(static_cast<std::size_t>(stack.T));
#pragma omp parallel for schedule(static)
    for (int t = 0; t < stack.T; ++t)
        out.coeffs[static_cast<std::size_t>(t)] =
            dft2(stack.frames[static_cast<std::size_t>(t)], xi).coeffs;
    return out;
}

void phase_shift_inplace(std::vector<cdouble>& coeffs, const SpectralWindow& window, Vec2 delta) {
    const int K = window.K;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<cdouble> p1(static_cast<std::size_t>(window.side()));
    std::vector<cdouble> p2(static_cast<std::size_t>(window.side()));
    for (int k = -K; k <= K; ++k) {
        p1[static_cast<std::size_t>(k + K)] = std::polar(1.0, two_pi * k * delta.x1);
        p2[static_cast<std::size_t>(k + K)] = std::polar(1.0, two_pi * k * delta.x2);
    }
    std::size_t m = 0;
    for (int a = 0; a < window.side(); ++a)
        for (int b = 0; b < window.side(); ++b)
            coeffs[m++] *= p1[static_cast<std::size_t>(a)] * p2[static_cast<std::size_t>(b)];
}

SpectralImage phase_shift(const SpectralImage& img, Vec2 delta) {
    SpectralImage out = img;
    phase_shift_inplace(out.coeffs, out.window, delta);
    return out;
}

Image reconstruct_image(const SpectralImage& img, int N, double imag_tol) {
    const int K = img.window.K;
    if (2 * K > N) throw std::invalid_argument("reconstruct_image: window exceeds {-N/2..N/2}^2");
    std::vector<cdouble> spectrum(static_cast<std::size_t>(N) * N, cdouble{0.0, 0.0});
    for (int k1 = -K; k1 <= K; ++k1) {
        int b1 = ((k1 % N) + N) % N;
        for (int k2 = -K; k2 <= K; ++k2) {
            int b2 = ((k2 % N) + N) % N;
            spectrum[static_cast<std::size_t>(b1) * N + static_cast<std::size_t>(b2)] =
                img.coeffs[img.window.index(k1, k2)];
        }
    }
    std::vector<cdouble> pixels(spectrum.size());
    fft::backward2d(spectrum.data(), pixels.data(), N);

    double max_imag = 0.0;
    for (const auto& z : pixels) max_imag = std::max(max_imag, std::abs(z.imag()));
    if (max_imag > imag_tol)
        throw std::invalid_argument("reconstruct_image: coefficients are not conjugate-symmetric");

    Image out(N);
    for (std::size_t i = 0; i < pixels.size(); ++i) out[i] = pixels[i].real();
    return out;
}

}  // namespace drift
