#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "drift/asymptotics.hpp"
#include "drift/rng.hpp"
#include "drift/spectral.hpp"
#include "helpers.hpp"

using namespace drift;

namespace {

Image cosine_image(int N, int k1, int k2) {
    Image img(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            img(i, j) = std::cos(2.0 * std::numbers::pi * (k1 * i + k2 * j) / N);
    return img;
}

SpectralImage random_band_limited(int modes, std::uint64_t seed) {
    Rng rng(seed);
    SpectralImage f;
    f.N = 32;
    f.window = SpectralWindow::from_cutoff(7.0);
    f.coeffs.assign(f.window.count(), cdouble{0.0, 0.0});
    for (int m = 0; m < modes; ++m) {
        int k1 = 0, k2 = 0;
        while (k1 == 0 && k2 == 0) {
            k1 = static_cast<int>(rng.next_below(7)) - 3;
            k2 = static_cast<int>(rng.next_below(7)) - 3;
        }
        cdouble v{rng.next_double() - 0.5, rng.next_double() - 0.5};
        f.coeffs[f.window.index(k1, k2)] += v;
        f.coeffs[f.window.index(-k1, -k2)] += std::conj(v);
    }
    return f;
}

}  // namespace

TEST_CASE("cos(2 pi x1) gives the two-mode closed form") {
    SpectralImage f = dft2(cosine_image(16, 1, 0), 8.0);
    CovariancePair pair = linear_drift_covariances(f, 0.005);
    CHECK(pair.sigma.a11 == doctest::Approx(1.0 / 24).epsilon(1e-10));
    CHECK(pair.sigma.a12 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(pair.sigma.a22) < 1e-12);
    CHECK(std::abs(pair.determinant) < 1e-14);
    CHECK(std::abs(pair.sigma.det()) < 1e-14);
}

TEST_CASE("two perpendicular cosines give (1/24) identity") {
    const int N = 16;
    Image img(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            img(i, j) = std::cos(2.0 * std::numbers::pi * i / N) +
                        std::cos(2.0 * std::numbers::pi * j / N);
    CovariancePair pair = linear_drift_covariances(dft2(img, 8.0), 0.005);
    CHECK(pair.sigma.a11 == doctest::Approx(1.0 / 24).epsilon(1e-10));
    CHECK(pair.sigma.a22 == doctest::Approx(1.0 / 24).epsilon(1e-10));
    CHECK(std::abs(pair.sigma.a12) < 1e-12);
    CHECK(pair.determinant > 0.0);
}

TEST_CASE("zero image gives zero matrices") {
    SpectralImage f = dft2(Image(8, 0.0), 4.0);
    CovariancePair pair = linear_drift_covariances(f, 1.0);
    CHECK(pair.sigma.a11 == 0.0);
    CHECK(pair.sigma.a22 == 0.0);
    CHECK(pair.determinant == 0.0);
}

TEST_CASE("paper determinant formula matches the direct determinant") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SpectralImage f = random_band_limited(6, seed);
        CovariancePair pair = linear_drift_covariances(f, 1.0);
        double direct = pair.sigma.det();
        CHECK(pair.determinant ==
              doctest::Approx(direct).epsilon(1e-10).scale(std::max(1e-30, std::abs(direct))));
    }
}

TEST_CASE("sigma is positive semidefinite") {
    Rng rng(4);
    SpectralImage f = random_band_limited(8, 99);
    CovariancePair pair = linear_drift_covariances(f, 1.0);
    for (int i = 0; i < 100; ++i) {
        double x1 = rng.next_double() - 0.5, x2 = rng.next_double() - 0.5;
        double quad = pair.sigma.a11 * x1 * x1 + 2 * pair.sigma.a12 * x1 * x2 +
                      pair.sigma.a22 * x2 * x2;
        CHECK(quad >= -1e-12);
    }
}

TEST_CASE("clt covariance sandwich") {
    CovariancePair ident;
    ident.sigma = {1.0, 0.0, 0.0, 1.0};
    ident.sigma_tilde = {1.0, 0.0, 0.0, 1.0};
    ident.determinant = 1.0;
    Mat2 cov = clt_covariance(ident);
    const double expect = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
    CHECK(cov.a11 == doctest::Approx(expect).epsilon(1e-12));
    CHECK(cov.a22 == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(cov.a12) < 1e-15);

    // isotropic f: SigmaTilde = s Sigma, so the sandwich is (s / 4 pi^2) Sigma^{-1}
    const int N = 16;
    Image img(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            img(i, j) = std::cos(2.0 * std::numbers::pi * i / N) +
                        std::cos(2.0 * std::numbers::pi * j / N);
    double s = 0.005;
    CovariancePair pair = linear_drift_covariances(dft2(img, 8.0), s);
    Mat2 cov2 = clt_covariance(pair);
    Mat2 expect2 = pair.sigma.inverse() * (s / (4.0 * std::numbers::pi * std::numbers::pi));
    CHECK(cov2.a11 == doctest::Approx(expect2.a11).epsilon(1e-10));
    CHECK(cov2.a22 == doctest::Approx(expect2.a22).epsilon(1e-10));
}

TEST_CASE("singular sigma is rejected") {
    SpectralImage f = dft2(cosine_image(16, 1, 0), 8.0);
    CovariancePair pair = linear_drift_covariances(f, 1.0);
    CHECK_THROWS_AS(clt_covariance(pair), std::domain_error);
}

TEST_CASE("directional constancy detection") {
    // f = cos(2 pi x1) is constant along (0, 1)
    auto dir = is_directionally_constant(dft2(cosine_image(16, 1, 0), 8.0), 1e-12);
    REQUIRE(dir.has_value());
    CHECK(std::abs(dir->x1) < 1e-9);
    CHECK(dir->x2 == doctest::Approx(1.0).epsilon(1e-9));

    // constant image: any direction works, (1, 0) by convention
    auto any = is_directionally_constant(dft2(Image(8, 0.3), 4.0), 1e-12);
    REQUIRE(any.has_value());
    CHECK(any->x1 == 1.0);

    // diagonal stripes cos(2 pi (x1 + x2)) are constant along (1, -1)/sqrt(2)
    auto diag = is_directionally_constant(dft2(cosine_image(16, 1, 1), 8.0), 1e-12);
    REQUIRE(diag.has_value());
    CHECK(diag->x1 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(diag->x2 == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-9));

    // generic band-limited images with several modes are not degenerate
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        SpectralImage f = random_band_limited(4 + static_cast<int>(seed % 4), seed);
        CHECK_FALSE(is_directionally_constant(f, 1e-12).has_value());
    }
}

TEST_CASE("general quadrature covariances reduce to the linear closed form") {
    SpectralImage f = random_band_limited(6, 7);
    CovariancePair closed = linear_drift_covariances(f, 0.005);
    DriftParams lin(DriftFamily::linear(), {0.1, -0.2});
    CovarianceMatrices general = drift_covariances(f, lin, 0.005, 2048);
    REQUIRE(general.dim == 2);
    CHECK(general.sigma[0] == doctest::Approx(closed.sigma.a11).epsilon(1e-9));
    CHECK(general.sigma[1] == doctest::Approx(closed.sigma.a12).epsilon(1e-9));
    CHECK(general.sigma[3] == doctest::Approx(closed.sigma.a22).epsilon(1e-9));
    CHECK(general.sigma_tilde[0] == doctest::Approx(closed.sigma_tilde.a11).epsilon(1e-9));
}

TEST_CASE("quadratic-family covariance is 4x4 and symmetric psd on the diagonal") {
    SpectralImage f = random_band_limited(6, 8);
    DriftParams quad(DriftFamily::quadratic(), {0.1, 0.0, 0.0, 0.1});
    CovarianceMatrices m = drift_covariances(f, quad, 1.0, 1024);
    REQUIRE(m.dim == 4);
    for (int a = 0; a < 4; ++a) {
        CHECK(m.sigma[static_cast<std::size_t>(a) * 4 + a] >= -1e-12);
        for (int b = 0; b < 4; ++b)
            CHECK(m.sigma[static_cast<std::size_t>(a) * 4 + b] ==
                  doctest::Approx(m.sigma[static_cast<std::size_t>(b) * 4 + a]).epsilon(1e-9));
    }
}
