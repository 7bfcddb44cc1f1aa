#include <doctest.h>

#include <cmath>
#include <string>

#include "nightforge/boxes.hpp"
#include "nightforge/errors.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace nightforge;

TEST_CASE("iou: identity, disjoint, and the 1/7 overlap") {
    const BBox a{0, 0, 2, 2};
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(a, BBox{5, 5, 6, 6}) == 0.0);
    CHECK(iou(a, BBox{2, 0, 4, 2}) == 0.0);  // touching edges do not intersect

    const BBox b{1, 1, 3, 3};
    CHECK(iou(a, b) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    // cross-check against the rasterization oracle
    const double raster =
        testsupport::oracle_iou_raster({0, 0, 2, 2, 0}, {1, 1, 3, 3, 0});
    CHECK(std::fabs(raster - 1.0 / 7.0) <= 2e-3);
}

TEST_CASE("iou is symmetric and bounded") {
    Rng rng(50);
    for (int i = 0; i < 200; ++i) {
        auto rand_box = [&rng]() {
            const double x1 = rng.uniform() * 50;
            const double y1 = rng.uniform() * 50;
            return BBox{x1, y1, x1 + 1 + rng.uniform() * 20, y1 + 1 + rng.uniform() * 20};
        };
        const BBox a = rand_box(), b = rand_box();
        const double ab = iou(a, b);
        CHECK(ab == iou(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("detection files round-trip at six decimals") {
    const std::string dir = testsupport::scratch_dir("dets");
    std::vector<Detection> dets = {
        {{10.1234567, 20.7654321, 30.5, 44.25}, 0.87654321, 0, 0},
        {{1.0, 2.0, 3.0, 4.0}, 0.5, 0, 0},
    };
    const std::string path = dir + "/a.txt";
    write_detections(path, dets);
    const std::vector<Detection> back = read_detections(path);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::fabs(back[i].box.x1 - dets[i].box.x1) <= 5e-7);
        CHECK(std::fabs(back[i].box.y2 - dets[i].box.y2) <= 5e-7);
        CHECK(std::fabs(back[i].score - dets[i].score) <= 5e-7);
    }
}

TEST_CASE("detection file errors carry context") {
    const std::string dir = testsupport::scratch_dir("dets_err");
    CHECK_THROWS_AS(read_detections(dir + "/none.txt"), IngestError);

    {
        std::ofstream f(dir + "/badcount.txt");
        f << "zork\n";
    }
    CHECK_THROWS_WITH_AS(read_detections(dir + "/badcount.txt"),
                         doctest::Contains("line 1"), IngestError);

    {
        std::ofstream f(dir + "/badline.txt");
        f << "2\n1 2 3 4 0.5\n5 6 seven\n";
    }
    CHECK_THROWS_WITH_AS(read_detections(dir + "/badline.txt"),
                         doctest::Contains("line 3"), IngestError);

    {
        std::ofstream f(dir + "/short.txt");
        f << "3\n1 2 3 4 0.5\n";
    }
    CHECK_THROWS_AS(read_detections(dir + "/short.txt"), IngestError);

    {
        std::ofstream f(dir + "/degenerate.txt");
        f << "1\n3 2 3 4 0.5\n";
    }
    CHECK_THROWS_AS(read_detections(dir + "/degenerate.txt"), IngestError);
}

TEST_CASE("FusionParams validation") {
    FusionParams p;
    CHECK_NOTHROW(p.validate());
    p.soft_nms_sigma = 0.0;
    CHECK_THROWS_AS(p.validate(), ParamError);
    p = FusionParams{};
    p.wbf_iou = 1.5;
    CHECK_THROWS_AS(p.validate(), ParamError);
    p = FusionParams{};
    p.model_weights = {1.0, 0.0};
    CHECK_THROWS_AS(p.validate(), ParamError);
}
