#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "drift/blur.hpp"
#include "drift/reference.hpp"
#include "helpers.hpp"

using namespace drift;

TEST_CASE("gauss smoothing fixes constants and preserves mass") {
    Image c(8, 0.42);
    Image out = gauss_smooth(c);
    for (double v : out.data()) CHECK(v == doctest::Approx(0.42).epsilon(1e-15));

    Image random = testutil::random_grid(16, 3);
    Image smooth = gauss_smooth(random);
    CHECK(grid_sum(smooth) == doctest::Approx(grid_sum(random)).epsilon(1e-12));
}

TEST_CASE("one smoothing pass of an impulse prints the kernel") {
    Image impulse(8);
    impulse(4, 4) = 1.0;
    Image out = gauss_smooth(impulse, 1);
    const double expect[3][3] = {{1.0 / 16, 2.0 / 16, 1.0 / 16},
                                 {2.0 / 16, 4.0 / 16, 2.0 / 16},
                                 {1.0 / 16, 2.0 / 16, 1.0 / 16}};
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            CHECK(out(4 + a, 4 + b) == doctest::Approx(expect[a + 1][b + 1]).epsilon(1e-15));
    CHECK(out(0, 0) == 0.0);
}

TEST_CASE("row-parallel smoothing matches the direct correlation") {
    const double kernel[3][3] = {{1.0 / 16, 2.0 / 16, 1.0 / 16},
                                 {2.0 / 16, 4.0 / 16, 2.0 / 16},
                                 {1.0 / 16, 2.0 / 16, 1.0 / 16}};
    Image img = testutil::random_grid(32, 8);
    Image fast = gauss_smooth(img, 1);
    Image slow = reference::correlate3x3_direct(img, kernel);
    CHECK(testutil::max_abs_diff(fast, slow) < 1e-15);
}

TEST_CASE("sobel gradients of simple fields") {
    Image c(8, 1.3);
    SobelGradients g = sobel_gradient(c);
    for (std::size_t i = 0; i < g.gx.size(); ++i) {
        CHECK(std::abs(g.gx[i]) < 1e-15);
        CHECK(std::abs(g.gy[i]) < 1e-15);
    }

    // ramp along the second index: I(i, j) = j
    Image ramp(8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) ramp(i, j) = static_cast<double>(j);
    SobelGradients gr = sobel_gradient(ramp);
    for (int i = 0; i < 8; ++i)
        for (int j = 2; j < 6; ++j) {  // away from the periodic seam
            CHECK(gr.gx(i, j) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(gr.gy(i, j) == doctest::Approx(0.0).epsilon(1e-14));
        }
}

TEST_CASE("transposing the image swaps the gradient roles") {
    Image img = testutil::random_grid(12, 9);
    Image transposed(12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) transposed(i, j) = img(j, i);
    SobelGradients g = sobel_gradient(img);
    SobelGradients gt = sobel_gradient(transposed);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            CHECK(gt.gx(i, j) == doctest::Approx(g.gy(j, i)).epsilon(1e-13));
}

TEST_CASE("directional energy from the tensor matches the direct sum") {
    Image img = gauss_smooth(testutil::random_grid(24, 5));
    SobelGradients g = sobel_gradient(img);
    StructureTensor D = structure_tensor(img);
    for (int a = 0; a < 64; ++a) {
        double phi = 2.0 * std::numbers::pi * a / 64.0;
        double direct = 0.0;
        for (std::size_t i = 0; i < g.gx.size(); ++i) {
            double dd = std::cos(phi) * g.gy[i] + std::sin(phi) * g.gx[i];
            direct += dd * dd;
        }
        CHECK(directional_energy(D, phi) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("tensor is positive semidefinite with ordered energies") {
    Image img = testutil::random_grid(16, 21);
    StructureTensor D = structure_tensor(gauss_smooth(img));
    CHECK(D.d11 >= 0.0);
    CHECK(D.d22 >= 0.0);
    CHECK(D.d11 * D.d22 - D.d12 * D.d12 >= -1e-9);

    BlurMeasure m = motion_blur_m2(img);
    CHECK(m.m2 >= 0.0);
    double jmin = directional_energy(D, m.phi_min);
    double jmax = directional_energy(D, m.phi_min + std::numbers::pi / 2);
    for (int a = 0; a < 360; ++a) {
        double phi = 2.0 * std::numbers::pi * a / 360.0;
        double j = directional_energy(D, phi);
        CHECK(j >= jmin - 1e-9);
        CHECK(j <= jmax + 1e-9);
    }
}

TEST_CASE("radially symmetric bump has almost no directional preference") {
    const int N = 64;
    Image bump(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double dx = (i - N / 2) / static_cast<double>(N);
            double dy = (j - N / 2) / static_cast<double>(N);
            bump(i, j) = std::exp(-(dx * dx + dy * dy) / 0.01);
        }
    BlurMeasure m = motion_blur_m2(bump);
    CHECK(std::abs(m.m2) < 0.05);
}

TEST_CASE("an image varying only along x1 blurs to the infinity sentinel") {
    const int N = 16;
    Image stripes(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            stripes(i, j) = std::sin(2.0 * std::numbers::pi * i / N);
    BlurMeasure m = motion_blur_m2(stripes);
    CHECK(m.m2 == std::numeric_limits<double>::infinity());
    CHECK(m.phi_min == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
}

TEST_CASE("constant images have no blur measure") {
    Image c(8, 0.5);
    CHECK_THROWS_AS(motion_blur_m2(c), std::domain_error);
}

TEST_CASE("known-direction measure flips sign under rotation") {
    Image img = testutil::random_grid(32, 13);
    Vec2 u{0.8, 0.6};
    Vec2 rot{-0.6, 0.8};
    double a = motion_blur_known_direction(img, u);
    double b = motion_blur_known_direction(img, rot);
    CHECK(a == doctest::Approx(-b).epsilon(1e-12));
}

TEST_CASE("known-direction measure ignores scale and offset") {
    Image img = testutil::random_grid(32, 14);
    Vec2 u{0.31, -0.87};
    double base = motion_blur_known_direction(img, u);

    Image scaled = img;
    for (double& v : scaled.data()) v *= 7.5;
    CHECK(motion_blur_known_direction(scaled, u) == doctest::Approx(base).epsilon(1e-12));

    Image offset = img;
    for (double& v : offset.data()) v += 3.0;
    CHECK(motion_blur_known_direction(offset, u) == doctest::Approx(base).epsilon(1e-10));

    // direction normalization is internal
    CHECK(motion_blur_known_direction(img, {u.x1 * 4, u.x2 * 4}) ==
          doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("known-direction measure rejects a zero direction") {
    Image img = testutil::random_grid(8, 15);
    CHECK_THROWS_AS(motion_blur_known_direction(img, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("zero parallel energy yields the infinity sentinel") {
    const int N = 16;
    Image stripes(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            stripes(i, j) = std::sin(2.0 * std::numbers::pi * i / N);
    // constant along x2: differentiating along x2 gives zero denominator
    double v = motion_blur_known_direction(stripes, {0.0, 1.0});
    CHECK(v == std::numeric_limits<double>::infinity());
}

TEST_CASE("mean drift direction for the blur measure") {
    DriftParams lin(DriftFamily::linear(), {0.195, 0.117});
    Vec2 d = mean_drift_direction(lin);
    CHECK(d.x1 == doctest::Approx(0.195));
    CHECK(d.x2 == doctest::Approx(0.117));

    DriftParams quad(DriftFamily::quadratic(), {0.195, 0.039, 0.0, 0.078});
    Vec2 dq = mean_drift_direction(quad);
    CHECK(dq.x1 == doctest::Approx(0.234));
    CHECK(dq.x2 == doctest::Approx(0.078));

    // jump family: t0 delta_{t0} + (1 - t0)(delta_1 - lim_{t -> t0+} delta_t)
    DriftParams jump(DriftFamily::jump(), {0.312, 0.312, 0.156, 0.312, 0.156, 0.234, 0.5});
    Vec2 dj = mean_drift_direction(jump);
    CHECK(dj.x1 == doctest::Approx(0.5 * 0.156 + 0.5 * (0.312 - 0.156)).epsilon(1e-12));
    CHECK(dj.x2 == doctest::Approx(0.5 * 0.156 + 0.5 * (0.312 - 0.234)).epsilon(1e-12));
}
