#include "drift/contrast.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drift {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

struct KahanComplex {
    KahanSum re, im;
    void add(cdouble z) {
        re.add(z.real());
        im.add(z.imag());
    }
    cdouble value() const { return {re.s, im.s}; }
};

/// Axis phase tables: phases[t * side + (k + K)] = exp(2 pi i k delta_r(t)).
struct PhaseTables {
    int side = 0;
    std::vector<cdouble> axis1, axis2;
};

PhaseTables make_phases(const DriftParams& theta, int T, const SpectralWindow& window) {
    PhaseTables ph;
    ph.side = window.side();
    const int K = window.K;
    ph.axis1.resize(static_cast<std::size_t>(T) * ph.side);
    ph.axis2.resize(static_cast<std::size_t>(T) * ph.side);
    for (int t = 0; t < T; ++t) {
        Vec2 d = evaluate_drift(theta, static_cast<double>(t) / T);
        for (int k = -K; k <= K; ++k) {
            ph.axis1[static_cast<std::size_t>(t) * ph.side + (k + K)] =
                std::polar(1.0, kTwoPi * k * d.x1);
            ph.axis2[static_cast<std::size_t>(t) * ph.side + (k + K)] =
                std::polar(1.0, kTwoPi * k * d.x2);
        }
    }
    return ph;
}

void check_window(const SpectralStack& stack, const SpectralWindow& window) {
    if (!stack.window.contains(window))
        throw std::invalid_argument("contrast window exceeds the stack's spectral window");
}

}  // namespace

ContrastConfig ContrastConfig::count_weighted(double cutoff,
                                              const std::vector<std::int64_t>& counts) {
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    if (!(total > 0.0)) throw std::invalid_argument("count weights need a positive total count");
    ContrastConfig cfg;
    cfg.xi = cutoff;
    cfg.weights.reserve(counts.size());
    for (auto c : counts) cfg.weights.push_back(static_cast<double>(c) / total);
    return cfg;
}

std::vector<double> effective_weights(const ContrastConfig& config, int T) {
    if (config.weights.empty())
        return std::vector<double>(static_cast<std::size_t>(T), 1.0 / static_cast<double>(T));
    if (static_cast<int>(config.weights.size()) != T)
        throw std::invalid_argument("weight vector length does not match frame count");
    double sum = 0.0;
    for (double w : config.weights) {
        if (w < 0.0) throw std::invalid_argument("negative contrast weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("contrast weights must sum to one");
    return config.weights;
}

std::vector<cdouble> realigned_average(const DriftParams& theta, const SpectralStack& stack,
                                       const ContrastConfig& config) {
    const auto window = SpectralWindow::from_cutoff(config.xi);
    check_window(stack, window);
    const auto w = effective_weights(config, stack.T);
    const auto ph = make_phases(theta, stack.T, window);
    const int K = window.K;
    const int side = window.side();
    const int stack_side = stack.window.side();
    const int off = stack.window.K - K;

    std::vector<cdouble> avg(window.count());
#pragma omp parallel for schedule(static)
    for (int a = 0; a < side; ++a) {
        std::vector<KahanComplex> acc(static_cast<std::size_t>(side));
        for (int t = 0; t < stack.T; ++t) {
            const cdouble* row =
                stack.coeffs[static_cast<std::size_t>(t)].data() +
                static_cast<std::size_t>(a + off) * stack_side + off;
            const cdouble h1 =
                w[static_cast<std::size_t>(t)] *
                ph.axis1[static_cast<std::size_t>(t) * side + static_cast<std::size_t>(a)];
            const cdouble* h2 = ph.axis2.data() + static_cast<std::size_t>(t) * side;
            for (int b = 0; b < side; ++b)
                acc[static_cast<std::size_t>(b)].add(h1 * h2[b] * row[b]);
        }
        for (int b = 0; b < side; ++b)
            avg[static_cast<std::size_t>(a) * side + static_cast<std::size_t>(b)] =
                acc[static_cast<std::size_t>(b)].value();
    }
    return avg;
}

double tilde_contrast(const DriftParams& theta, const SpectralStack& stack,
                      const ContrastConfig& config) {
    const auto avg = realigned_average(theta, stack, config);
    KahanSum total;
    for (const auto& z : avg) total.add(std::norm(z));
    return -total.s;
}

double full_contrast(const DriftParams& theta, const SpectralStack& stack,
                     const ContrastConfig& config) {
    const auto window = SpectralWindow::from_cutoff(config.xi);
    check_window(stack, window);
    const auto w = effective_weights(config, stack.T);
    const auto avg = realigned_average(theta, stack, config);
    const auto ph = make_phases(theta, stack.T, window);
    const int K = window.K;
    const int side = window.side();
    const int stack_side = stack.window.side();
    const int off = stack.window.K - K;

    std::vector<double> row_sums(static_cast<std::size_t>(side), 0.0);
#pragma omp parallel for schedule(static)
    for (int a = 0; a < side; ++a) {
        KahanSum acc;
        for (int t = 0; t < stack.T; ++t) {
            const cdouble* row =
                stack.coeffs[static_cast<std::size_t>(t)].data() +
                static_cast<std::size_t>(a + off) * stack_side + off;
            const cdouble h1 =
                ph.axis1[static_cast<std::size_t>(t) * side + static_cast<std::size_t>(a)];
            const cdouble* h2 = ph.axis2.data() + static_cast<std::size_t>(t) * side;
            const double wt = w[static_cast<std::size_t>(t)];
            for (int b = 0; b < side; ++b) {
                cdouble dev = h1 * h2[b] * row[b] -
                              avg[static_cast<std::size_t>(a) * side + static_cast<std::size_t>(b)];
                acc.add(wt * std::norm(dev));
            }
        }
        row_sums[static_cast<std::size_t>(a)] = acc.s;
    }
    KahanSum total;
    for (double s : row_sums) total.add(s);
    return total.s;
}

double contrast_offset(const SpectralStack& stack, const ContrastConfig& config) {
    const auto window = SpectralWindow::from_cutoff(config.xi);
    check_window(stack, window);
    const auto w = effective_weights(config, stack.T);
    const int K = window.K;
    const int stack_side = stack.window.side();
    const int off = stack.window.K - K;
    KahanSum total;
    for (int a = 0; a < window.side(); ++a)
        for (int b = 0; b < window.side(); ++b) {
            KahanSum mode;
            for (int t = 0; t < stack.T; ++t) {
                cdouble y = stack.coeffs[static_cast<std::size_t>(t)]
                                        [static_cast<std::size_t>(a + off) * stack_side + off + b];
                mode.add(w[static_cast<std::size_t>(t)] * std::norm(y));
            }
            total.add(mode.s);
        }
    return total.s;
}

double population_contrast(const DriftParams& theta, const DriftParams& theta0,
                           const SpectralImage& f, int quad_intervals) {
    if (quad_intervals < 2 || quad_intervals % 2 != 0)
        throw std::invalid_argument("population_contrast: quadrature intervals must be even");
    const int K = f.window.K;
    const int n = quad_intervals;
    const double h = 1.0 / n;

    // Per-node drift differences, reused across modes.
    std::vector<Vec2> diff(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) * h;
        Vec2 a = evaluate_drift(theta, t);
        Vec2 b = evaluate_drift(theta0, t);
        diff[static_cast<std::size_t>(i)] = {a.x1 - b.x1, a.x2 - b.x2};
    }

    KahanSum total;
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) {
            double fk2 = std::norm(f.at(k1, k2));
            if (fk2 == 0.0) continue;
            KahanComplex integral;
            for (int i = 0; i <= n; ++i) {
                double weight = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                const Vec2& d = diff[static_cast<std::size_t>(i)];
                integral.add(weight * std::polar(1.0, kTwoPi * (k1 * d.x1 + k2 * d.x2)));
            }
            cdouble I = integral.value() * (h / 3.0);
            total.add(fk2 * std::norm(I));
        }
    return -total.s;
}

}  // namespace drift
