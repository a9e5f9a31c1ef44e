#include "drift/reference.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace drift::reference {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SpectralImage dft2_direct(const Image& frame, double xi) {
    const int N = frame.n();
    if (N < 2) throw std::invalid_argument("dft2_direct: grid must be at least 2x2");
    if (xi > N) throw std::invalid_argument("dft2_direct: cutoff exceeds grid size");
    SpectralImage out;
    out.N = N;
    out.window = SpectralWindow::from_cutoff(xi);
    out.coeffs.resize(out.window.count());
    const int K = out.window.K;
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) {
            cdouble sum{0.0, 0.0};
            for (int i1 = 0; i1 < N; ++i1)
                for (int i2 = 0; i2 < N; ++i2)
                    sum += frame(i1, i2) *
                           std::polar(1.0, -kTwoPi * (static_cast<double>(k1) * i1 +
                                                      static_cast<double>(k2) * i2) /
                                               N);
            out.coeffs[out.window.index(k1, k2)] = sum / (static_cast<double>(N) * N);
        }
    return out;
}

double tilde_contrast_direct(const DriftParams& theta, const SpectralStack& stack,
                             const ContrastConfig& config) {
    const auto window = SpectralWindow::from_cutoff(config.xi);
    if (!stack.window.contains(window))
        throw std::invalid_argument("contrast window exceeds the stack's spectral window");
    const auto w = effective_weights(config, stack.T);
    const int K = window.K;
    double total = 0.0;
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) {
            cdouble s{0.0, 0.0};
            for (int t = 0; t < stack.T; ++t) {
                Vec2 d = evaluate_drift(theta, static_cast<double>(t) / stack.T);
                cdouble h = std::polar(1.0, kTwoPi * (k1 * d.x1 + k2 * d.x2));
                s += w[static_cast<std::size_t>(t)] * h *
                     stack.coeffs[static_cast<std::size_t>(t)][stack.window.index(k1, k2)];
            }
            total += std::norm(s);
        }
    return -total;
}

Image correlate3x3_direct(const Image& img, const double kernel[3][3]) {
    const int N = img.n();
    Image out(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double acc = 0.0;
            for (int a = -1; a <= 1; ++a)
                for (int b = -1; b <= 1; ++b)
                    acc += kernel[a + 1][b + 1] * img.wrapped(i + a, j + b);
            out(i, j) = acc;
        }
    return out;
}

DriftParams integer_shift_search(const SpectralStack& stack, const ContrastConfig& config,
                                 int max_step) {
    const double step = static_cast<double>(stack.T) / stack.N;
    DriftParams best;
    double best_value = std::numeric_limits<double>::infinity();
    for (int c1 = -max_step; c1 <= max_step; ++c1)
        for (int c2 = -max_step; c2 <= max_step; ++c2) {
            DriftParams cand(DriftFamily::linear(), {c1 * step, c2 * step});
            double value = tilde_contrast_direct(cand, stack, config);
            if (value < best_value) {
                best_value = value;
                best = cand;
            }
        }
    return best;
}

}  // namespace drift::reference
