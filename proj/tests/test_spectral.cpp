#include <doctest.h>

#include <cmath>
#include <complex>

#include "drift/reference.hpp"
#include "drift/spectral.hpp"
#include "helpers.hpp"

using namespace drift;

TEST_CASE("constant frame concentrates at k = 0") {
    Image frame(8, 0.37);
    SpectralImage y = dft2(frame, 4.0);
    CHECK(std::abs(y.at(0, 0) - cdouble{0.37, 0.0}) < 1e-12);
    for (int k1 = -2; k1 <= 2; ++k1)
        for (int k2 = -2; k2 <= 2; ++k2)
            if (k1 || k2) CHECK(std::abs(y.at(k1, k2)) < 1e-12);
}

TEST_CASE("unit impulse at the origin has a flat spectrum") {
    Image frame(4);
    frame(0, 0) = 1.0;
    SpectralImage y = dft2(frame, 4.0);
    for (int k1 = -2; k1 <= 2; ++k1)
        for (int k2 = -2; k2 <= 2; ++k2)
            CHECK(std::abs(y.at(k1, k2) - cdouble{1.0 / 16, 0.0}) < 1e-14);
}

TEST_CASE("fft agrees with the direct double sum") {
    Image frame = testutil::random_grid(4, 99);
    SpectralImage fast = dft2(frame, 4.0);
    SpectralImage direct = reference::dft2_direct(frame, 4.0);
    for (std::size_t i = 0; i < fast.coeffs.size(); ++i)
        CHECK(std::abs(fast.coeffs[i] - direct.coeffs[i]) < 1e-12);
}

TEST_CASE("fft oracle on a larger window") {
    Image frame = testutil::random_grid(9, 123);
    SpectralImage fast = dft2(frame, 7.0);
    SpectralImage direct = reference::dft2_direct(frame, 7.0);
    for (std::size_t i = 0; i < fast.coeffs.size(); ++i)
        CHECK(std::abs(fast.coeffs[i] - direct.coeffs[i]) < 1e-12);
}

TEST_CASE("conjugate symmetry for real frames") {
    Image frame = testutil::random_grid(8, 5);
    SpectralImage y = dft2(frame, 6.0);
    for (int k1 = -3; k1 <= 3; ++k1)
        for (int k2 = -3; k2 <= 3; ++k2)
            CHECK(std::abs(y.at(-k1, -k2) - std::conj(y.at(k1, k2))) < 1e-14);
}

TEST_CASE("phase shift basics") {
    Image frame = testutil::random_grid(8, 17);
    SpectralImage y = dft2(frame, 8.0);

    SpectralImage same = phase_shift(y, {0.0, 0.0});
    for (std::size_t i = 0; i < y.coeffs.size(); ++i) CHECK(same.coeffs[i] == y.coeffs[i]);

    Vec2 d{0.23, -0.11};
    SpectralImage shifted = phase_shift(y, d);
    for (std::size_t i = 0; i < y.coeffs.size(); ++i)
        CHECK(std::abs(std::abs(shifted.coeffs[i]) - std::abs(y.coeffs[i])) <
              1e-15 + 1e-15 * std::abs(y.coeffs[i]));

    SpectralImage back = phase_shift(shifted, {-d.x1, -d.x2});
    for (std::size_t i = 0; i < y.coeffs.size(); ++i)
        CHECK(std::abs(back.coeffs[i] - y.coeffs[i]) < 1e-14);
}

TEST_CASE("phase shifts compose additively") {
    Image frame = testutil::random_grid(8, 29);
    SpectralImage y = dft2(frame, 6.0);
    SpectralImage two_steps = phase_shift(phase_shift(y, {0.1, 0.2}), {0.15, -0.05});
    SpectralImage one_step = phase_shift(y, {0.25, 0.15});
    for (std::size_t i = 0; i < y.coeffs.size(); ++i)
        CHECK(std::abs(two_steps.coeffs[i] - one_step.coeffs[i]) < 1e-13);
}

TEST_CASE("integer-pixel phase shift equals a circular shift") {
    for (int rep = 0; rep < 10; ++rep) {
        Image frame = testutil::random_grid(8, 1000 + static_cast<std::uint64_t>(rep));
        int m = rep % 5 - 2;
        int l = (rep * 3) % 7 - 3;
        SpectralImage shifted = phase_shift(dft2(frame, 8.0), {m / 8.0, l / 8.0});
        Image moved = reconstruct_image(shifted, 8);
        Image expected = testutil::circshift(frame, -m, -l);
        CHECK(testutil::max_abs_diff(moved, expected) < 1e-12);
    }
}

TEST_CASE("reconstruct inverts dft2 on the full window") {
    for (int n : {8, 9}) {
        Image frame = testutil::random_grid(n, 7 + static_cast<std::uint64_t>(n));
        Image back = reconstruct_image(dft2(frame, static_cast<double>(n)), n);
        CHECK(testutil::max_abs_diff(back, frame) < 1e-10);
    }
}

TEST_CASE("reconstructing a constant spectrum gives a constant grid") {
    SpectralImage c;
    c.N = 8;
    c.window = SpectralWindow::from_cutoff(1.0);
    c.coeffs = {cdouble{0.7, 0.0}};
    Image img = reconstruct_image(c, 8);
    for (double v : img.data()) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("full-window Parseval identity on an odd grid") {
    Image frame = testutil::random_grid(9, 71);
    SpectralImage y = dft2(frame, 9.0);
    double pixel_energy = 0.0;
    for (double v : frame.data()) pixel_energy += v * v;
    pixel_energy /= 81.0;
    double mode_energy = 0.0;
    for (const auto& z : y.coeffs) mode_energy += std::norm(z);
    CHECK(pixel_energy == doctest::Approx(mode_energy).epsilon(1e-12));
}

TEST_CASE("band energy equals windowed coefficient energy") {
    Image frame = testutil::random_grid(16, 41);
    SpectralImage y = dft2(frame, 6.0);  // strict truncation
    Image smooth = reconstruct_image(y, 16);
    double pixel_energy = 0.0;
    for (double v : smooth.data()) pixel_energy += v * v;
    pixel_energy /= smooth.size();
    double mode_energy = 0.0;
    for (const auto& z : y.coeffs) mode_energy += std::norm(z);
    CHECK(pixel_energy == doctest::Approx(mode_energy).epsilon(1e-12));
}

TEST_CASE("dft2 is linear") {
    Image f = testutil::random_grid(8, 3);
    Image g = testutil::random_grid(8, 4);
    Image combo(8);
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 1.5 * f[i] - 0.25 * g[i];
    SpectralImage yc = dft2(combo, 6.0);
    SpectralImage yf = dft2(f, 6.0);
    SpectralImage yg = dft2(g, 6.0);
    for (std::size_t i = 0; i < yc.coeffs.size(); ++i)
        CHECK(std::abs(yc.coeffs[i] - (1.5 * yf.coeffs[i] - 0.25 * yg.coeffs[i])) < 1e-12);
}

TEST_CASE("asymmetric coefficients are rejected at synthesis") {
    SpectralImage bad;
    bad.N = 8;
    bad.window = SpectralWindow::from_cutoff(3.0);
    bad.coeffs.assign(bad.window.count(), cdouble{0.0, 0.0});
    bad.coeffs[bad.window.index(1, 0)] = cdouble{1.0, 0.0};
    CHECK_THROWS_AS(reconstruct_image(bad, 8), std::invalid_argument);
}

TEST_CASE("window validation") {
    Image frame = testutil::random_grid(8, 1);
    CHECK_THROWS_AS(dft2(frame, 9.0), std::invalid_argument);
    CHECK_THROWS_AS(dft2(frame, 0.5), std::invalid_argument);
    SpectralImage y = dft2(frame, 8.0);
    CHECK_THROWS_AS(reconstruct_image(y, 6), std::invalid_argument);
}
