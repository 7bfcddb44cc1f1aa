#include <doctest.h>

#include <cmath>

#include "nightforge/errors.hpp"
#include "nightforge/gaussian.hpp"
#include "support/fixtures.hpp"

using namespace nightforge;

TEST_CASE("KernelSpec: radius, symmetry, unit sum") {
    for (double sigma : {0.8, 2.5, 5.0, 15.0}) {
        const KernelSpec k = KernelSpec::make(sigma);
        CHECK(k.radius == static_cast<int>(std::ceil(3.0 * sigma)));
        CHECK(k.weights.size() == static_cast<std::size_t>(2 * k.radius + 1));
        double sum = 0.0;
        for (double w : k.weights) sum += w;
        CHECK(std::fabs(sum - 1.0) <= 1e-12);
        for (int i = 0; i <= k.radius; ++i) {
            CHECK(k.weights[k.radius - i] == k.weights[k.radius + i]);
        }
    }
    CHECK_THROWS_AS(KernelSpec::make(0.0), ParamError);
}

TEST_CASE("gaussian_blur: constant image is a fixed point at any sigma") {
    for (double sigma : {2.0, 15.0, 80.0}) {
        const Image img(40, 30, 3, 0.37);
        const Image out = gaussian_blur(img, sigma);
        CHECK(max_abs_diff(img, out) <= 1e-9);
    }
}

TEST_CASE("gaussian_blur: impulse response equals the sampled kernel (sigma=5)") {
    Image img(65, 65, 1, 0.0);
    img.at(32, 32, 0) = 1.0;
    const Image out = gaussian_blur(img, 5.0);
    const KernelSpec k = KernelSpec::make(5.0);
    double sum = 0.0;
    for (int y = 0; y < 65; ++y) {
        for (int x = 0; x < 65; ++x) {
            const int dx = std::abs(x - 32), dy = std::abs(y - 32);
            const double expect = (dx <= k.radius && dy <= k.radius)
                                      ? k.weights[k.radius + dx] * k.weights[k.radius + dy]
                                      : 0.0;
            CHECK(std::fabs(out.at(x, y, 0) - expect) <= 1e-9);
            sum += out.at(x, y, 0);
        }
    }
    // interior-supported impulse preserves total mass
    CHECK(std::fabs(sum - 1.0) <= 1e-6);
}

TEST_CASE("gaussian_blur is linear") {
    const Image a = testsupport::synth_rgb(48, 36, 1);
    const Image b = testsupport::synth_rgb(48, 36, 2);
    for (double sigma : {3.0, 15.0}) {
        Image mix(48, 36, 3);
        for (std::size_t i = 0; i < mix.data.size(); ++i) {
            mix.data[i] = 0.7 * a.data[i] + 0.3 * b.data[i];
        }
        const Image lhs = gaussian_blur(mix, sigma);
        const Image ba = gaussian_blur(a, sigma);
        const Image bb = gaussian_blur(b, sigma);
        double worst = 0.0;
        for (std::size_t i = 0; i < lhs.data.size(); ++i) {
            worst = std::max(worst,
                             std::fabs(lhs.data[i] - (0.7 * ba.data[i] + 0.3 * bb.data[i])));
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("fast path stays within 1e-3 RMS of the direct reference") {
    // High-noise fixture so the comparison stresses the full band.
    SUBCASE("sigma 15") {
        const Image img = testsupport::synth_rgb(128, 96, 21, 0.4);
        const double rms = rms_diff(gaussian_blur(img, 15.0), gaussian_blur_direct(img, 15.0));
        CHECK(rms <= 1e-3);
    }
    SUBCASE("sigma 80") {
        const Image img = testsupport::synth_rgb(128, 96, 22, 0.4);
        const double rms = rms_diff(gaussian_blur(img, 80.0), gaussian_blur_direct(img, 80.0));
        CHECK(rms <= 1e-3);
    }
    SUBCASE("sigma 250") {
        const Image img = testsupport::synth_rgb(96, 64, 23, 0.4);
        const double rms = rms_diff(gaussian_blur(img, 250.0), gaussian_blur_direct(img, 250.0));
        CHECK(rms <= 1e-3);
    }
}

TEST_CASE("gaussian_blur rejects non-positive sigma") {
    const Image img(8, 8, 1, 0.0);
    CHECK_THROWS_AS(gaussian_blur(img, 0.0), ParamError);
    CHECK_THROWS_AS(gaussian_blur(img, -1.0), ParamError);
}
