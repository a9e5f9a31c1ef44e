#pragma once

#include <cmath>
#include <vector>

#include "drift/frames.hpp"
#include "drift/grid.hpp"
#include "drift/rng.hpp"

namespace testutil {

inline drift::Image random_grid(int n, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    drift::Rng rng(seed);
    drift::Image img(n);
    for (double& v : img.data()) v = lo + (hi - lo) * rng.next_double();
    return img;
}

/// Content moved by (s1, s2) pixels: out(i + s) = in(i), torus wrap.
inline drift::Image circshift(const drift::Image& in, int s1, int s2) {
    drift::Image out(in.n());
    for (int i1 = 0; i1 < in.n(); ++i1)
        for (int i2 = 0; i2 < in.n(); ++i2) out.wrapped(i1 + s1, i2 + s2) = in(i1, i2);
    return out;
}

inline double max_abs_diff(const drift::Image& a, const drift::Image& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

/// Stack whose frames all hold full images (counts = N^2).
inline drift::FrameStack dense_stack(std::vector<drift::Image> frames) {
    drift::FrameStack s;
    s.T = static_cast<int>(frames.size());
    s.N = frames.front().n();
    s.counts.assign(frames.size(), static_cast<std::int64_t>(frames.front().size()));
    s.frames = std::move(frames);
    return s;
}

}  // namespace testutil
