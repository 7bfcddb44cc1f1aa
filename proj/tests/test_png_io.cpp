#include <doctest.h>

#include <string>

#include "nightforge/errors.hpp"
#include "nightforge/png_io.hpp"
#include "nightforge/rng.hpp"
#include "support/fixtures.hpp"
#include "support/png_fixtures.hpp"

using namespace nightforge;
using namespace testsupport;

TEST_CASE("decode_png: 1x1 RGB (255,0,128)") {
    const Image img = decode_png(kPng1x1Rgb);
    CHECK(img.width == 1);
    CHECK(img.height == 1);
    CHECK(img.channels == 3);
    CHECK(img.linear_range);
    CHECK(img.at(0, 0, 0) == 1.0);
    CHECK(img.at(0, 0, 1) == 0.0);
    CHECK(img.at(0, 0, 2) == 128.0 / 255.0);
}

TEST_CASE("decode_png: 1x1 gray zero") {
    const Image img = decode_png(kPng1x1Gray0);
    CHECK(img.channels == 1);
    CHECK(img.at(0, 0, 0) == 0.0);
}

TEST_CASE("decode_png: 2x2 fixture matches the independent encoder") {
    const Image img = decode_png(kPng2x2Rgb);
    REQUIRE(img.width == 2);
    REQUIRE(img.height == 2);
    const int expect[4][3] = {{10, 20, 30}, {200, 100, 50}, {0, 255, 0}, {128, 128, 128}};
    for (int y = 0; y < 2; ++y) {
        for (int x = 0; x < 2; ++x) {
            for (int c = 0; c < 3; ++c) {
                CHECK(img.at(x, y, c) == expect[y * 2 + x][c] / 255.0);
            }
        }
    }
    // encode -> decode reproduces the decode byte-for-byte
    const Image again = decode_png(encode_png(img));
    CHECK(max_abs_diff(img, again) == 0.0);
}

TEST_CASE("decode_png: error paths name the byte offset / unsupported format") {
    SUBCASE("bad signature") {
        std::vector<std::uint8_t> bad = kPng1x1Rgb;
        bad[2] ^= 0xFF;
        CHECK_THROWS_WITH_AS(decode_png(bad),
                             doctest::Contains("byte offset 2"), DecodeError);
    }
    SUBCASE("corrupted IDAT payload fails its CRC") {
        std::vector<std::uint8_t> bad = kPng2x2Rgb;
        bad[45] ^= 0x10;  // inside the IDAT data
        try {
            decode_png(bad);
            FAIL("expected DecodeError");
        } catch (const DecodeError& e) {
            CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
            CHECK(std::string(e.what()).find("CRC") != std::string::npos);
        }
    }
    SUBCASE("truncated stream") {
        std::vector<std::uint8_t> bad(kPng2x2Rgb.begin(), kPng2x2Rgb.begin() + 40);
        CHECK_THROWS_AS(decode_png(bad), DecodeError);
    }
    SUBCASE("16-bit depth unsupported") {
        CHECK_THROWS_WITH_AS(decode_png(kPng16Bit), doctest::Contains("16-bit"), DecodeError);
    }
    SUBCASE("palette unsupported") {
        std::vector<std::uint8_t> pal = kPng2x2Rgb;
        pal[25] = 3;  // IHDR color type
        CHECK_THROWS_WITH_AS(decode_png(pal), doctest::Contains("palette"), DecodeError);
    }
    SUBCASE("interlaced unsupported") {
        CHECK_THROWS_WITH_AS(decode_png(kPngInterlaced), doctest::Contains("interlaced"),
                             DecodeError);
    }
}

TEST_CASE("encode_png: trivial codes") {
    SUBCASE("all-zero image encodes to all-zero codes") {
        const Image zero(3, 2, 3, 0.0);
        const Image back = decode_png(encode_png(zero));
        for (double v : back.data) CHECK(v == 0.0);
    }
    SUBCASE("0.5 maps to code 128 (round half up)") {
        const Image half(1, 1, 1, 0.5);
        const Image back = decode_png(encode_png(half));
        CHECK(back.at(0, 0, 0) == 128.0 / 255.0);
    }
    SUBCASE("linear_range is required") {
        Image img(2, 2, 1, 0.5);
        img.linear_range = false;
        CHECK_THROWS_AS(encode_png(img), RangeError);
    }
}

TEST_CASE("encode/decode round-trips every 8-bit code") {
    Image img(256, 1, 1);
    for (int x = 0; x < 256; ++x) img.at(x, 0, 0) = x / 255.0;
    const Image back = decode_png(encode_png(img));
    CHECK(max_abs_diff(img, back) == 0.0);
}

TEST_CASE("decode(encode(x)) is the identity on random 8-bit-exact images") {
    Rng rng(99);
    for (int ch : {1, 3}) {
        Image img(37, 23, ch);
        for (double& v : img.data) v = static_cast<double>(rng.uniform_index(256)) / 255.0;
        const Image back = decode_png(encode_png(img));
        CHECK(back.channels == ch);
        CHECK(max_abs_diff(img, back) == 0.0);
    }
}

TEST_CASE("read_png_header reports dimensions without a full decode") {
    const PngHeader h = read_png_header(kPng2x2Rgb);
    CHECK(h.width == 2);
    CHECK(h.height == 2);
    CHECK(h.channels == 3);
}

TEST_CASE("save/load round-trip through the filesystem") {
    const std::string dir = scratch_dir("png");
    const Image img = synth_rgb(20, 14, 5);
    // quantize to 8-bit-exact values first
    Image q = img;
    for (double& v : q.data) v = std::floor(v * 255.0 + 0.5) / 255.0;
    save_png(dir + "/x.png", q);
    const Image back = load_png(dir + "/x.png");
    CHECK(max_abs_diff(q, back) == 0.0);
    const PngHeader h = read_png_header_file(dir + "/x.png");
    CHECK(h.width == 20);
    CHECK(h.channels == 3);
    CHECK_THROWS_AS(load_png(dir + "/missing.png"), IngestError);
}
