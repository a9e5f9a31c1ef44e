#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace drift {

/// Square pixel grid of reals, row-major. The index pair (i1, i2) maps to the
/// point x = (i1/N, i2/N) of the unit square; the first index follows the
/// first image coordinate.
class Grid {
public:
    Grid() = default;
    explicit Grid(int n, double fill = 0.0)
        : n_(n), v_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {
        if (n < 0) throw std::invalid_argument("Grid: negative size");
    }

    int n() const { return n_; }
    std::size_t size() const { return v_.size(); }

    double& operator()(int i1, int i2) { return v_[idx(i1, i2)]; }
    double operator()(int i1, int i2) const { return v_[idx(i1, i2)]; }

    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

    /// Access with periodic (torus) index wrapping.
    double wrapped(int i1, int i2) const { return v_[idx(mod(i1), mod(i2))]; }
    double& wrapped(int i1, int i2) { return v_[idx(mod(i1), mod(i2))]; }

    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

    bool operator==(const Grid&) const = default;

private:
    std::size_t idx(int i1, int i2) const {
        return static_cast<std::size_t>(i1) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(i2);
    }
    int mod(int i) const {
        int r = i % n_;
        return r < 0 ? r + n_ : r;
    }

    int n_ = 0;
    std::vector<double> v_;
};

using Image = Grid;

inline double grid_sum(const Grid& g) {
    double s = 0.0;
    for (double x : g.data()) s += x;
    return s;
}

inline double grid_mean(const Grid& g) {
    return g.size() ? grid_sum(g) / static_cast<double>(g.size()) : 0.0;
}

}  // namespace drift
