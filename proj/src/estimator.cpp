#include "drift/estimator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace drift {

namespace {

std::vector<double> default_jump_grid() {
    std::vector<double> grid;
    grid.reserve(97);
    for (int i = 2; i <= 98; ++i) grid.push_back(static_cast<double>(i) / 100.0);
    return grid;
}

double max_abs_spread(const std::vector<double>& fvals) {
    auto [lo, hi] = std::minmax_element(fvals.begin(), fvals.end());
    return *hi - *lo;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const OptimizerConfig& config) {
    const std::size_t d = start.size();
    if (d == 0) throw std::invalid_argument("nelder_mead: empty start vector");

    std::vector<std::vector<double>> simplex(d + 1, start);
    for (std::size_t j = 0; j < d; ++j) simplex[j + 1][j] += config.initial_step;
    std::vector<double> fvals(d + 1);
    for (std::size_t i = 0; i <= d; ++i) fvals[i] = objective(simplex[i]);

    NelderMeadResult result;
    int iter = 0;
    auto order = [&] {
        std::vector<std::size_t> idx(d + 1);
        for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
        std::vector<std::vector<double>> s2(d + 1);
        std::vector<double> f2(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            s2[i] = simplex[idx[i]];
            f2[i] = fvals[idx[i]];
        }
        simplex = std::move(s2);
        fvals = std::move(f2);
    };

    for (; iter < config.max_iterations; ++iter) {
        order();
        double size = 0.0;
        for (std::size_t i = 1; i <= d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                size = std::max(size, std::abs(simplex[i][j] - simplex[0][j]));
        if (max_abs_spread(fvals) < config.f_tol || size < config.x_tol) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j] / static_cast<double>(d);

        auto blend = [&](double coeff) {
            std::vector<double> x(d);
            for (std::size_t j = 0; j < d; ++j)
                x[j] = centroid[j] + coeff * (centroid[j] - simplex[d][j]);
            return x;
        };

        std::vector<double> xr = blend(1.0);
        double fr = objective(xr);
        if (fr < fvals[0]) {
            std::vector<double> xe = blend(2.0);
            double fe = objective(xe);
            if (fe < fr) {
                simplex[d] = std::move(xe);
                fvals[d] = fe;
            } else {
                simplex[d] = std::move(xr);
                fvals[d] = fr;
            }
            continue;
        }
        if (fr < fvals[d - 1]) {
            simplex[d] = std::move(xr);
            fvals[d] = fr;
            continue;
        }
        if (fr < fvals[d]) {
            std::vector<double> xc = blend(0.5);  // outside contraction
            double fc = objective(xc);
            if (fc <= fr) {
                simplex[d] = std::move(xc);
                fvals[d] = fc;
                continue;
            }
        } else {
            std::vector<double> xc = blend(-0.5);  // inside contraction
            double fc = objective(xc);
            if (fc < fvals[d]) {
                simplex[d] = std::move(xc);
                fvals[d] = fc;
                continue;
            }
        }
        for (std::size_t i = 1; i <= d; ++i) {  // shrink toward the best vertex
            for (std::size_t j = 0; j < d; ++j)
                simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
            fvals[i] = objective(simplex[i]);
        }
    }
    order();
    result.x = simplex[0];
    result.fmin = fvals[0];
    result.iterations = iter;
    return result;
}

bool inside_theta_box(const DriftParams& params) {
    const int d = params.family.dim();
    for (int j = 0; j < d; ++j) {
        if (params.family.kind == FamilyKind::linear_with_jump && j == 6) {
            if (params.theta[6] < 0.02 || params.theta[6] > 0.98) return false;
        } else if (std::abs(params.theta[static_cast<std::size_t>(j)]) > 2.0) {
            return false;
        }
    }
    return true;
}

namespace {

EstimationResult estimate_polynomial(const SpectralStack& stack, const DriftFamily& family,
                                     const ContrastConfig& cc, const OptimizerConfig& oc) {
    std::vector<double> start = oc.start;
    if (start.empty()) start.assign(static_cast<std::size_t>(family.dim()), 0.0);
    if (static_cast<int>(start.size()) != family.dim())
        throw std::invalid_argument("start vector length does not match family dimension");

    auto objective = [&](const std::vector<double>& theta) {
        return tilde_contrast(DriftParams(family, theta), stack, cc);
    };
    NelderMeadResult nm = nelder_mead(objective, start, oc);

    EstimationResult result;
    result.theta_hat = DriftParams(family, nm.x);
    result.contrast_value = nm.fmin;
    result.iterations = nm.iterations;
    result.converged = nm.converged && inside_theta_box(result.theta_hat);
    return result;
}

EstimationResult estimate_jump(const SpectralStack& stack, const DriftFamily& family,
                               const ContrastConfig& cc, const OptimizerConfig& oc) {
    std::vector<double> grid = oc.jump_grid.empty() ? default_jump_grid() : oc.jump_grid;
    std::vector<double> start6 = oc.start;
    if (start6.empty()) start6.assign(6, 0.0);
    if (start6.size() == 7) start6.resize(6);
    if (start6.size() != 6)
        throw std::invalid_argument("jump family start vector must have 6 coordinates");

    const int G = static_cast<int>(grid.size());
    std::vector<NelderMeadResult> runs(static_cast<std::size_t>(G));
#pragma omp parallel for schedule(dynamic)
    for (int g = 0; g < G; ++g) {
        double t0 = grid[static_cast<std::size_t>(g)];
        auto objective = [&, t0](const std::vector<double>& theta6) {
            std::vector<double> full = theta6;
            full.push_back(t0);
            return tilde_contrast(DriftParams(family, full), stack, cc);
        };
        runs[static_cast<std::size_t>(g)] = nelder_mead(objective, start6, oc);
    }

    int best = 0;
    for (int g = 1; g < G; ++g)
        if (runs[static_cast<std::size_t>(g)].fmin < runs[static_cast<std::size_t>(best)].fmin)
            best = g;

    EstimationResult result;
    std::vector<double> full = runs[static_cast<std::size_t>(best)].x;
    full.push_back(grid[static_cast<std::size_t>(best)]);
    result.theta_hat = DriftParams(family, full);
    result.contrast_value = runs[static_cast<std::size_t>(best)].fmin;
    for (const auto& r : runs) result.iterations += r.iterations;
    result.converged =
        runs[static_cast<std::size_t>(best)].converged && inside_theta_box(result.theta_hat);
    return result;
}

}  // namespace

EstimationResult estimate(const SpectralStack& stack, const DriftFamily& family,
                          const ContrastConfig& cc, const OptimizerConfig& oc) {
    if (stack.T < 2) throw std::invalid_argument("estimate: need at least two frames");
    if (family.kind == FamilyKind::linear_with_jump) return estimate_jump(stack, family, cc, oc);
    return estimate_polynomial(stack, family, cc, oc);
}

namespace {

std::vector<std::int64_t> block_counts(const FrameStack& stack, int r0, int c0, int side) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(stack.T), 0);
    for (int t = 0; t < stack.T; ++t) {
        std::int64_t n = 0;
        for (int a = 0; a < side; ++a)
            for (int b = 0; b < side; ++b)
                if (stack.observed(t, r0 + a, c0 + b)) ++n;
        counts[static_cast<std::size_t>(t)] = n;
    }
    return counts;
}

EstimationResult estimate_split(const FrameStack& stack, const DriftFamily& family,
                                const ContrastConfig& cc, const OptimizerConfig& oc) {
    if (family.kind != FamilyKind::polynomial)
        throw std::invalid_argument("sub-domain estimation supports polynomial families only");
    const int S = oc.subdomains;
    if (stack.N % S != 0)
        throw std::invalid_argument("sub-domain split must divide the grid size");
    const int side = stack.N / S;
    if (SpectralWindow::from_cutoff(cc.xi).K * 2 > side)
        throw std::invalid_argument("contrast window too large for the sub-domain size");

    OptimizerConfig single = oc;
    single.subdomains = 1;

    std::vector<double> mean_theta(static_cast<std::size_t>(family.dim()), 0.0);
    EstimationResult result;
    result.converged = true;
    for (int r = 0; r < S; ++r)
        for (int c = 0; c < S; ++c) {
            FrameStack block = make_empty_stack(stack.T, side);
            for (int t = 0; t < stack.T; ++t)
                for (int a = 0; a < side; ++a)
                    for (int b = 0; b < side; ++b)
                        block.frames[static_cast<std::size_t>(t)](a, b) =
                            stack.frames[static_cast<std::size_t>(t)](r * side + a, c * side + b);
            block.counts = block_counts(stack, r * side, c * side, side);
            EstimationResult er = estimate(dft2_stack(block, cc.xi), family, cc, single);
            // block estimates live in the sub-image's unit square; one block
            // pixel is 1/side, one full-image pixel 1/N
            const double rescale = static_cast<double>(side) / stack.N;
            for (std::size_t j = 0; j < mean_theta.size(); ++j)
                mean_theta[j] += rescale * er.theta_hat.theta[j] / static_cast<double>(S * S);
            result.iterations += er.iterations;
            result.converged = result.converged && er.converged;
        }
    result.theta_hat = DriftParams(family, mean_theta);
    result.contrast_value =
        tilde_contrast(result.theta_hat, dft2_stack(stack, cc.xi), cc);
    result.converged = result.converged && inside_theta_box(result.theta_hat);
    return result;
}

}  // namespace

EstimationResult estimate(const FrameStack& stack, const DriftFamily& family,
                          const ContrastConfig& cc, const OptimizerConfig& oc) {
    if (oc.subdomains > 1) return estimate_split(stack, family, cc, oc);
    return estimate(dft2_stack(stack, cc.xi), family, cc, oc);
}

SpectralImage reconstruct_spectrum(const SpectralStack& stack, const DriftParams& theta,
                                   const ContrastConfig& config) {
    SpectralImage out;
    out.N = stack.N;
    out.window = SpectralWindow::from_cutoff(config.xi);
    out.coeffs = realigned_average(theta, stack, config);

    const auto w = effective_weights(config, stack.T);
    double covered = 0.0;
    if (static_cast<int>(stack.counts.size()) == stack.T)
        for (int t = 0; t < stack.T; ++t)
            covered += w[static_cast<std::size_t>(t)] *
                       static_cast<double>(stack.counts[static_cast<std::size_t>(t)]);
    if (covered > 0.0) {
        double scale = static_cast<double>(stack.N) * stack.N / covered;
        for (auto& c : out.coeffs) c *= scale;
    }
    return out;
}

Image reconstruct(const FrameStack& stack, const DriftParams& theta, const ContrastConfig& config) {
    return reconstruct_image(reconstruct_spectrum(dft2_stack(stack, config.xi), theta, config),
                             stack.N);
}

std::vector<std::optional<Vec2>> track_fiducial(const FrameStack& stack, const PixelRect& region) {
    if (region.i1_lo >= region.i1_hi || region.i2_lo >= region.i2_hi || region.i1_lo < 0 ||
        region.i2_lo < 0 || region.i1_hi > stack.N || region.i2_hi > stack.N)
        throw std::invalid_argument("track_fiducial: empty or out-of-range region");
    std::vector<std::optional<Vec2>> positions(static_cast<std::size_t>(stack.T));
    for (int t = 0; t < stack.T; ++t) {
        double mass = 0.0, m1 = 0.0, m2 = 0.0;
        for (int a = region.i1_lo; a < region.i1_hi; ++a)
            for (int b = region.i2_lo; b < region.i2_hi; ++b) {
                double z = stack.frames[static_cast<std::size_t>(t)](a, b);
                mass += z;
                m1 += z * (a + 0.5);
                m2 += z * (b + 0.5);
            }
        if (mass > 0.0)
            positions[static_cast<std::size_t>(t)] =
                Vec2{m1 / mass / stack.N, m2 / mass / stack.N};
    }
    return positions;
}

std::string format_estimate_record(const EstimationResult& result, double xi, int T, int N) {
    std::string out;
    out += "family " + result.theta_hat.family.str() + "\n";
    out += "theta " + format_theta(result.theta_hat.theta) + "\n";
    char buf[64];
    auto num = [&buf](double v) {
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    };
    out += "contrast " + num(result.contrast_value) + "\n";
    out += "converged " + std::string(result.converged ? "true" : "false") + "\n";
    out += "iterations " + std::to_string(result.iterations) + "\n";
    out += "xi " + num(xi) + "\n";
    out += "T " + std::to_string(T) + "\n";
    out += "N " + std::to_string(N) + "\n";
    return out;
}

}  // namespace drift
