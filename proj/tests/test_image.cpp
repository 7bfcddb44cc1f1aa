#include <doctest.h>

#include "nightforge/errors.hpp"
#include "nightforge/image.hpp"
#include "nightforge/rng.hpp"
#include "support/fixtures.hpp"

using namespace nightforge;

TEST_CASE("Image shape validation") {
    CHECK_THROWS_AS(Image(0, 4, 3), ShapeError);
    CHECK_THROWS_AS(Image(4, 0, 1), ShapeError);
    CHECK_THROWS_AS(Image(4, 4, 2), ShapeError);
    const Image img(5, 4, 3, 0.25);
    CHECK(img.size() == 5 * 4 * 3);
    CHECK(img.at(2, 3, 1) == 0.25);
}

TEST_CASE("to_grayscale uses BT.601 weights") {
    Image img(1, 1, 3);
    img.at(0, 0, 0) = 1.0;
    img.at(0, 0, 1) = 1.0;
    img.at(0, 0, 2) = 1.0;
    CHECK(to_grayscale(img).at(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    img.at(0, 0, 1) = 0.0;
    img.at(0, 0, 2) = 0.0;
    CHECK(to_grayscale(img).at(0, 0, 0) == doctest::Approx(0.299).epsilon(1e-12));
}

TEST_CASE("to_grayscale matches the scalar formula on random pixels") {
    const Image img = testsupport::synth_rgb(17, 11, 3);
    const Image gray = to_grayscale(img);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double expect =
                0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
            CHECK(gray.at(x, y, 0) == doctest::Approx(expect).epsilon(1e-14));
        }
    }
}

TEST_CASE("to_grayscale stays in [0,1] for inputs in [0,1]") {
    const Image img = testsupport::synth_rgb(32, 24, 11);
    const Image gray = to_grayscale(img);
    for (double v : gray.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("to_grayscale rejects non-RGB input") {
    CHECK_THROWS_AS(to_grayscale(Image(4, 4, 1)), ShapeError);
}
