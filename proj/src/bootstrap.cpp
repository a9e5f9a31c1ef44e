#include "drift/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "drift/rng.hpp"
#include "drift/spectral.hpp"

namespace drift {

namespace {

constexpr std::uint64_t kBootStream = 0xb007;

struct ObservedPair {
    int t;
    int pixel;
};

std::vector<ObservedPair> observed_pairs(const FrameStack& stack) {
    std::vector<ObservedPair> pairs;
    for (int t = 0; t < stack.T; ++t)
        for (int i1 = 0; i1 < stack.N; ++i1)
            for (int i2 = 0; i2 < stack.N; ++i2)
                if (stack.observed(t, i1, i2)) pairs.push_back({t, i1 * stack.N + i2});
    return pairs;
}

double population_sd(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(v.size()));
}

/// f_hat(x - delta_t) synthesized on the grid for every frame.
std::vector<Image> shifted_fit(const SpectralImage& f_hat, const DriftParams& theta, int T,
                               int N) {
    std::vector<Image> out(static_cast<std::size_t>(T));
#pragma omp parallel for schedule(static)
    for (int t = 0; t < T; ++t) {
        Vec2 d = evaluate_drift(theta, static_cast<double>(t) / T);
        out[static_cast<std::size_t>(t)] =
            reconstruct_image(phase_shift(f_hat, {-d.x1, -d.x2}), N);
    }
    return out;
}

std::vector<double> residuals_against(const FrameStack& stack,
                                      const std::vector<ObservedPair>& pairs,
                                      const std::vector<Image>& fit) {
    std::vector<double> r;
    r.reserve(pairs.size());
    for (const auto& p : pairs)
        r.push_back(stack.frames[static_cast<std::size_t>(p.t)][static_cast<std::size_t>(p.pixel)] -
                    fit[static_cast<std::size_t>(p.t)][static_cast<std::size_t>(p.pixel)]);
    return r;
}

}  // namespace

ResidualStats residuals(const FrameStack& stack, const DriftParams& theta_hat,
                        const SpectralImage& f_hat) {
    auto pairs = observed_pairs(stack);
    if (pairs.empty()) throw std::invalid_argument("residuals: no observed pixel-time pairs");
    auto fit = shifted_fit(f_hat, theta_hat, stack.T, stack.N);
    ResidualStats stats;
    stats.residuals = residuals_against(stack, pairs, fit);
    stats.sigma_hat = population_sd(stats.residuals);
    return stats;
}

BandFit fit_band(const std::vector<std::vector<double>>& curves, const std::vector<double>& g,
                 double alpha) {
    const int B = static_cast<int>(curves.size());
    if (B < 1) throw std::invalid_argument("fit_band: no replicate curves");
    const int need = static_cast<int>(std::ceil((1.0 - alpha) * B));

    // Per replicate: the smallest u+ (resp. u-) that admits the whole curve.
    std::vector<double> p(static_cast<std::size_t>(B), 0.0), q(static_cast<std::size_t>(B), 0.0);
    for (int b = 0; b < B; ++b) {
        double pb = 0.0, qb = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double d = curves[static_cast<std::size_t>(b)][i];
            if (g[i] == 0.0) {
                if (d != 0.0) {
                    pb = std::numeric_limits<double>::infinity();
                    qb = std::numeric_limits<double>::infinity();
                }
                continue;
            }
            pb = std::max(pb, -d / g[i]);
            qb = std::max(qb, d / g[i]);
        }
        p[static_cast<std::size_t>(b)] = pb;
        q[static_cast<std::size_t>(b)] = qb;
    }

    std::vector<int> by_p(static_cast<std::size_t>(B));
    std::iota(by_p.begin(), by_p.end(), 0);
    std::stable_sort(by_p.begin(), by_p.end(), [&](int a, int b) {
        return p[static_cast<std::size_t>(a)] < p[static_cast<std::size_t>(b)];
    });

    BandFit best;
    double best_sum = std::numeric_limits<double>::infinity();
    std::vector<double> qs;
    qs.reserve(static_cast<std::size_t>(B));
    for (int i = 0; i < B; ++i) {
        qs.push_back(q[static_cast<std::size_t>(by_p[static_cast<std::size_t>(i)])]);
        if (i + 1 < need) continue;
        std::vector<double> sorted = qs;
        std::nth_element(sorted.begin(), sorted.begin() + (need - 1), sorted.end());
        double u_plus = p[static_cast<std::size_t>(by_p[static_cast<std::size_t>(i)])];
        double u_minus = sorted[static_cast<std::size_t>(need - 1)];
        if (u_plus + u_minus < best_sum) {
            best_sum = u_plus + u_minus;
            best.u_plus = u_plus;
            best.u_minus = u_minus;
        }
    }
    int inside = 0;
    for (int b = 0; b < B; ++b)
        if (p[static_cast<std::size_t>(b)] <= best.u_plus &&
            q[static_cast<std::size_t>(b)] <= best.u_minus)
            ++inside;
    best.inside = inside;
    return best;
}

double BootstrapBands::upper(int component, double t) const {
    Vec2 d = evaluate_drift(theta_hat, t);
    double base = component == 0 ? d.x1 : d.x2;
    return base + sigma_hat * u_plus[component] * shape(t);
}

double BootstrapBands::lower(int component, double t) const {
    Vec2 d = evaluate_drift(theta_hat, t);
    double base = component == 0 ? d.x1 : d.x2;
    return base - sigma_hat * u_minus[component] * shape(t);
}

BootstrapBands bootstrap_bands(const FrameStack& stack, const DriftParams& theta_hat,
                               const SpectralImage& f_hat, const ContrastConfig& cc,
                               const OptimizerConfig& oc, const BootstrapConfig& bc) {
    if (bc.B < 2) throw std::invalid_argument("bootstrap_bands: need B >= 2");
    if (!(bc.alpha > 0.0 && bc.alpha < 1.0))
        throw std::invalid_argument("bootstrap_bands: alpha must lie in (0, 1)");
    if (theta_hat.family.kind != FamilyKind::polynomial)
        throw std::invalid_argument("bootstrap_bands: polynomial drift families only");

    const auto pairs = observed_pairs(stack);
    if (pairs.empty()) throw std::invalid_argument("bootstrap_bands: empty observation set");
    const auto fit = shifted_fit(f_hat, theta_hat, stack.T, stack.N);
    const auto base_residuals = residuals_against(stack, pairs, fit);
    const double sigma_hat = population_sd(base_residuals);

    OptimizerConfig replicate_oc = oc;
    replicate_oc.start = theta_hat.theta;
    replicate_oc.subdomains = 1;

    const int G = bc.time_grid;
    std::vector<double> grid_t(static_cast<std::size_t>(G));
    for (int i = 0; i < G; ++i) grid_t[static_cast<std::size_t>(i)] = static_cast<double>(i) / (G - 1);

    struct ReplicateOut {
        bool ok = false;
        DriftParams theta;
        double sigma = 0.0;
        SpectralImage spectrum;
        std::vector<double> delta1, delta2;  // standardized deviation curves
    };
    std::vector<ReplicateOut> reps(static_cast<std::size_t>(bc.B));

#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < bc.B; ++b) {
        Rng rng = Rng::substream(bc.seed, kBootStream, static_cast<std::uint64_t>(b));
        FrameStack replicate = make_empty_stack(stack.T, stack.N);
        replicate.counts = stack.counts;
        if (stack.has_mask()) replicate.mask = stack.mask;
        for (const auto& pr : pairs) {
            double eps =
                base_residuals[static_cast<std::size_t>(rng.next_below(base_residuals.size()))];
            replicate.frames[static_cast<std::size_t>(pr.t)][static_cast<std::size_t>(pr.pixel)] =
                fit[static_cast<std::size_t>(pr.t)][static_cast<std::size_t>(pr.pixel)] + eps;
        }
        if (!stack.has_mask()) replicate.mask.clear();

        EstimationResult est;
        try {
            est = estimate(replicate, theta_hat.family, cc, replicate_oc);
        } catch (const std::exception&) {
            continue;  // replicate dropped
        }
        if (!est.converged) continue;

        ReplicateOut out;
        out.ok = true;
        out.theta = est.theta_hat;
        SpectralStack rep_spec = dft2_stack(replicate, cc.xi);
        out.spectrum = reconstruct_spectrum(rep_spec, est.theta_hat, cc);

        auto rep_fit = shifted_fit(out.spectrum, est.theta_hat, stack.T, stack.N);
        double rep_sigma = population_sd(residuals_against(replicate, pairs, rep_fit));
        out.sigma = rep_sigma;

        out.delta1.resize(static_cast<std::size_t>(G));
        out.delta2.resize(static_cast<std::size_t>(G));
        for (int i = 0; i < G; ++i) {
            Vec2 dr = evaluate_drift(est.theta_hat, grid_t[static_cast<std::size_t>(i)]);
            Vec2 dh = evaluate_drift(theta_hat, grid_t[static_cast<std::size_t>(i)]);
            double n1 = dr.x1 - dh.x1, n2 = dr.x2 - dh.x2;
            out.delta1[static_cast<std::size_t>(i)] = n1 == 0.0 ? 0.0 : n1 / rep_sigma;
            out.delta2[static_cast<std::size_t>(i)] = n2 == 0.0 ? 0.0 : n2 / rep_sigma;
        }
        reps[static_cast<std::size_t>(b)] = std::move(out);
    }

    BootstrapBands bands;
    bands.sigma_hat = sigma_hat;
    bands.alpha = bc.alpha;
    bands.B_requested = bc.B;
    bands.theta_hat = theta_hat;

    std::vector<std::vector<double>> curves1, curves2;
    for (auto& r : reps) {
        if (!r.ok) continue;
        bands.replicates.push_back(r.theta);
        bands.replicate_sigmas.push_back(r.sigma);
        bands.replicate_spectra.push_back(std::move(r.spectrum));
        curves1.push_back(std::move(r.delta1));
        curves2.push_back(std::move(r.delta2));
    }
    bands.B_effective = static_cast<int>(bands.replicates.size());
    if (bands.B_effective < 2)
        throw std::runtime_error("bootstrap_bands: all replicate estimations failed");

    std::vector<double> g(static_cast<std::size_t>(G));
    for (int i = 0; i < G; ++i) g[static_cast<std::size_t>(i)] =
        BootstrapBands::shape(grid_t[static_cast<std::size_t>(i)]);
    BandFit fit1 = fit_band(curves1, g, bc.alpha);
    BandFit fit2 = fit_band(curves2, g, bc.alpha);
    bands.u_plus[0] = fit1.u_plus;
    bands.u_minus[0] = fit1.u_minus;
    bands.u_plus[1] = fit2.u_plus;
    bands.u_minus[1] = fit2.u_minus;
    return bands;
}

Image bootstrap_average_image(const FrameStack& stack, const BootstrapBands& bands,
                              const ContrastConfig& cc) {
    (void)cc;
    const int B = bands.B_effective;
    if (B < 1) throw std::invalid_argument("bootstrap_average_image: no replicates");
    int m = static_cast<int>(std::floor((1.0 - bands.alpha) * bands.B_requested));
    m = std::clamp(m, 1, B);

    const int G = 256;
    std::vector<std::pair<double, int>> dist(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        double worst = 0.0;
        for (int i = 0; i < G; ++i) {
            double t = static_cast<double>(i) / (G - 1);
            Vec2 dr = evaluate_drift(bands.replicates[static_cast<std::size_t>(b)], t);
            Vec2 dh = evaluate_drift(bands.theta_hat, t);
            worst = std::max(worst, std::hypot(dr.x1 - dh.x1, dr.x2 - dh.x2));
        }
        dist[static_cast<std::size_t>(b)] = {worst, b};
    }
    std::stable_sort(dist.begin(), dist.end());

    Image avg(stack.N);
    for (int i = 0; i < m; ++i) {
        Image rec = reconstruct_image(
            bands.replicate_spectra[static_cast<std::size_t>(dist[static_cast<std::size_t>(i)].second)],
            stack.N);
        for (std::size_t px = 0; px < avg.size(); ++px) avg[px] += rec[px] / m;
    }
    return avg;
}

}  // namespace drift
