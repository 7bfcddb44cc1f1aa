#include <doctest.h>

#include "nightforge/errors.hpp"
#include "nightforge/resize.hpp"
#include "support/fixtures.hpp"

using namespace nightforge;

TEST_CASE("resize_bilinear: identity dimensions are bit-exact") {
    const Image img = testsupport::synth_rgb(23, 17, 9);
    const Image out = resize_bilinear(img, 23, 17);
    CHECK(max_abs_diff(img, out) == 0.0);
}

TEST_CASE("resize_bilinear: constant image stays constant at any size") {
    const Image img(10, 8, 3, 0.42);
    for (auto [w, h] : {std::pair{3, 3}, {25, 11}, {64, 64}}) {
        const Image out = resize_bilinear(img, w, h);
        CHECK(out.width == w);
        CHECK(out.height == h);
        CHECK(max_abs_diff(Image(w, h, 3, 0.42), out) <= 1e-15);
    }
}

TEST_CASE("resize_bilinear: half-pixel-center samples of a 2x1 ramp") {
    Image img(2, 1, 1);
    img.at(0, 0, 0) = 0.0;
    img.at(1, 0, 0) = 1.0;
    const Image out = resize_bilinear(img, 4, 1);
    // src_x = (x + 0.5) * 0.5 - 0.5 clamped: -0.25->0, 0.25, 0.75, 1.25->1
    CHECK(out.at(0, 0, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(out.at(1, 0, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(out.at(2, 0, 0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(out.at(3, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("resize_bilinear rejects degenerate targets") {
    const Image img(4, 4, 1, 0.0);
    CHECK_THROWS_AS(resize_bilinear(img, 0, 4), ParamError);
    CHECK_THROWS_AS(resize_bilinear(img, 4, -1), ParamError);
}
