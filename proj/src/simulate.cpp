#include "drift/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "drift/rng.hpp"
#include "drift/spectral.hpp"

namespace drift {

namespace {
constexpr std::uint64_t kTimeStream = 0x7431;
constexpr std::uint64_t kNoiseStream = 0x6e31;
}  // namespace

std::vector<int> sample_times(int N, int T, std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("sample_times: T must be >= 1");
    std::vector<int> times(static_cast<std::size_t>(N) * N);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < N * N; ++j) {
        Rng rng = Rng::substream(seed, kTimeStream, static_cast<std::uint64_t>(j));
        times[static_cast<std::size_t>(j)] =
            static_cast<int>(rng.next_below(static_cast<std::uint64_t>(T)));
    }
    return times;
}

FrameStack simulate_stack(const SimulationSpec& spec) {
    const int N = spec.image.n();
    const int T = spec.T;
    if (N < 1) throw std::invalid_argument("simulate_stack: empty image");
    if (T < 1) throw std::invalid_argument("simulate_stack: T must be >= 1");
    for (double v : spec.image.data())
        if (v < 0.0) throw std::invalid_argument("simulate_stack: image values must be >= 0");

    const auto times = sample_times(N, T, spec.seed);

    // Per-frame integer pixel shifts of the rounded drift.
    std::vector<int> shift1(static_cast<std::size_t>(T)), shift2(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        Vec2 d = round_drift(evaluate_drift(spec.drift, static_cast<double>(t) / T), N);
        shift1[static_cast<std::size_t>(t)] = static_cast<int>(std::lround(d.x1 * N));
        shift2[static_cast<std::size_t>(t)] = static_cast<int>(std::lround(d.x2 * N));
    }

    FrameStack stack = make_empty_stack(T, N);
    stack.mask.assign(static_cast<std::size_t>(T),
                      std::vector<std::uint8_t>(static_cast<std::size_t>(N) * N, 0));

    // Each (t, target) slot is written by exactly one source pixel, so the
    // loop parallelizes without synchronization.
#pragma omp parallel for schedule(static)
    for (int j = 0; j < N * N; ++j) {
        const int i1 = j / N;
        const int i2 = j % N;
        const int t = times[static_cast<std::size_t>(j)];
        const double f = spec.image(i1, i2);

        Rng rng = Rng::substream(spec.seed, kNoiseStream, static_cast<std::uint64_t>(j));
        double value = 0.0;
        switch (spec.noise.kind) {
            case NoiseKind::gaussian:
                value = f + spec.noise.sigma * rng.next_gauss();
                break;
            case NoiseKind::student_t2:
                value = f + spec.noise.sigma * rng.next_t2();
                break;
            case NoiseKind::poisson:
                value = static_cast<double>(rng.next_poisson(f));
                break;
        }

        int p1 = (i1 + shift1[static_cast<std::size_t>(t)]) % N;
        if (p1 < 0) p1 += N;
        int p2 = (i2 + shift2[static_cast<std::size_t>(t)]) % N;
        if (p2 < 0) p2 += N;
        stack.frames[static_cast<std::size_t>(t)](p1, p2) = value;
        stack.mask[static_cast<std::size_t>(t)][static_cast<std::size_t>(p1) * N + p2] = 1;
    }

    for (int t = 0; t < T; ++t) {
        std::int64_t n = 0;
        for (auto m : stack.mask[static_cast<std::size_t>(t)]) n += m;
        stack.counts[static_cast<std::size_t>(t)] = n;
    }
    return stack;
}

// The map runs over every pixel, observed or not: an unobserved zero lifts
// to the same constant 0.5 as an observed zero count, so the background is
// flat and contributes nothing to any k != 0 mode. Restricting the map to
// observed pixels would instead turn the background into a sparse indicator
// field whose sampling noise swamps the weak Poisson signal.
FrameStack variance_stabilize(const FrameStack& stack) {
    FrameStack out = stack;
    for (auto& frame : out.frames)
        for (double& z : frame.data()) {
            if (z < 0.0) throw std::invalid_argument("variance_stabilize: negative intensity");
            z = std::sqrt(z + 0.25);
        }
    return out;
}

namespace {

/// Splat a Gaussian cross-section profile along a quadratic curve.
void draw_filament(Image& img, Vec2 p0, Vec2 p1, Vec2 p2, double width, double intensity) {
    const int N = img.n();
    const int steps = 4 * N;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * width * N)));
    for (int s = 0; s <= steps; ++s) {
        double u = static_cast<double>(s) / steps;
        double a = (1 - u) * (1 - u), b = 2 * u * (1 - u), c = u * u;
        double cx = a * p0.x1 + b * p1.x1 + c * p2.x1;
        double cy = a * p0.x2 + b * p1.x2 + c * p2.x2;
        int ci1 = static_cast<int>(std::lround(cx * N));
        int ci2 = static_cast<int>(std::lround(cy * N));
        for (int d1 = -radius; d1 <= radius; ++d1)
            for (int d2 = -radius; d2 <= radius; ++d2) {
                double dx = (ci1 + d1) / static_cast<double>(N) - cx;
                double dy = (ci2 + d2) / static_cast<double>(N) - cy;
                double r2 = dx * dx + dy * dy;
                double w = intensity * std::exp(-r2 / (2.0 * width * width));
                double& px = img.wrapped(ci1 + d1, ci2 + d2);
                px = std::max(px, w);
            }
    }
}

void draw_blob(Image& img, Vec2 center, double width, double intensity) {
    const int N = img.n();
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * width * N)));
    int ci1 = static_cast<int>(std::lround(center.x1 * N));
    int ci2 = static_cast<int>(std::lround(center.x2 * N));
    for (int d1 = -radius; d1 <= radius; ++d1)
        for (int d2 = -radius; d2 <= radius; ++d2) {
            double dx = (ci1 + d1) / static_cast<double>(N) - center.x1;
            double dy = (ci2 + d2) / static_cast<double>(N) - center.x2;
            double w = intensity * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
            double& px = img.wrapped(ci1 + d1, ci2 + d2);
            px = std::max(px, w);
        }
}

}  // namespace

Image filament_phantom(int N) {
    Image img(N);
    const double w = 0.007;

    // Filament bands running along (-0.51, 0.86), i.e. across the dominant
    // 31-degree motion axis of the experiments, spaced to load the lowest
    // spectral modes; a weak cross member and blobs keep the content 2d.
    const Vec2 u{0.857, 0.515};  // band normal
    const Vec2 v{-0.515, 0.857};
    auto at = [&](double su, double sv) {
        return Vec2{0.5 + su * u.x1 + sv * v.x1, 0.5 + su * u.x2 + sv * v.x2};
    };
    // broad soft ridge: carries the low-frequency mass, narrow across u
    draw_filament(img, at(0.0, -0.26), at(0.02, 0.0), at(0.0, 0.26), 0.085, 0.17);
    // weak crossing ridge adds perpendicular low-frequency energy
    draw_filament(img, at(-0.24, -0.16), at(0.0, -0.13), at(0.24, -0.16), 0.048, 0.10);
    // side bands spaced for the |k| = 3..4 range across u
    draw_filament(img, at(-0.145, -0.22), at(-0.135, 0.0), at(-0.145, 0.22), 0.012, 0.35);
    draw_filament(img, at(0.145, -0.20), at(0.135, 0.02), at(0.145, 0.24), 0.012, 0.33);

    const double spacing[3] = {-0.10, 0.0, 0.10};
    const double gain[3] = {0.55, 0.65, 0.6};
    const double bend[3] = {0.045, -0.035, 0.05};
    for (int i = 0; i < 3; ++i) {
        double s = spacing[i];
        draw_filament(img, at(s, -0.28), at(s + bend[i], 0.0), at(s, 0.28), w, gain[i]);
    }
    draw_filament(img, at(-0.04, -0.22), at(0.08, -0.04), at(-0.02, 0.20), w, 0.32);
    // thin members crossing the bundle: fine-scale gradients across the
    // motion axis
    draw_filament(img, at(-0.26, 0.10), at(0.0, 0.16), at(0.26, 0.08), w, 0.5);
    draw_filament(img, at(-0.24, -0.12), at(0.02, -0.20), at(0.26, -0.10), w, 0.45);
    draw_blob(img, at(-0.16, 0.18), 0.014, 0.95);
    draw_blob(img, at(0.16, -0.20), 0.010, 0.55);

    for (double& v2 : img.data()) v2 = std::clamp(v2, 0.0, 1.0);
    return img;
}

Image band_limited_phantom(const Image& source, double xi) {
    Image smooth = reconstruct_image(dft2(source, xi), source.n());
    auto [lo_it, hi_it] = std::minmax_element(smooth.data().begin(), smooth.data().end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi == lo) return smooth;
    for (double& v : smooth.data()) v = (v - lo) / (hi - lo);
    return smooth;
}

}  // namespace drift
