#pragma once

// Deterministic synthetic fixtures shared across test binaries.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "nightforge/image.hpp"
#include "nightforge/rng.hpp"

namespace testsupport {

/// Smooth gradients + a few bright blobs + seeded noise; a stand-in for a
/// natural photo with full-band spectrum content.
inline nightforge::Image synth_rgb(int w, int h, std::uint64_t seed, double noise_amp = 0.05) {
    nightforge::Image img(w, h, 3);
    nightforge::Rng rng(nightforge::mix64(seed));
    const double cx[3] = {0.3 * w, 0.7 * w, 0.5 * w};
    const double cy[3] = {0.4 * h, 0.6 * h, 0.25 * h};
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double v = 0.25 + 0.35 * x / w + 0.2 * y / h;
                const double dx = (x - cx[c]) / (0.12 * w);
                const double dy = (y - cy[c]) / (0.12 * h);
                v += 0.3 * std::exp(-(dx * dx + dy * dy));
                v += noise_amp * (rng.uniform() - 0.5);
                img.at(x, y, c) = std::clamp(v, 0.0, 1.0);
            }
        }
    }
    return img;
}

/// Dark low-light-street-like fixture: low base level, strong vignette,
/// a few bright light blobs, sensor-ish noise.
inline nightforge::Image dark_street(int w, int h, std::uint64_t seed = 7) {
    nightforge::Image img(w, h, 3);
    nightforge::Rng rng(nightforge::mix64(seed));
    const double lx[4] = {0.2 * w, 0.45 * w, 0.8 * w, 0.6 * w};
    const double ly[4] = {0.3 * h, 0.15 * h, 0.35 * h, 0.7 * h};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double vign =
                1.0 - 0.6 * (std::pow((x - 0.5 * w) / (0.5 * w), 2) +
                             std::pow((y - 0.5 * h) / (0.5 * h), 2));
            double base = 0.02 + 0.05 * vign + 0.02 * y / h;
            double lights = 0.0;
            for (int i = 0; i < 4; ++i) {
                const double dx = (x - lx[i]) / (0.05 * w);
                const double dy = (y - ly[i]) / (0.05 * h);
                lights += 0.8 * std::exp(-(dx * dx + dy * dy));
            }
            for (int c = 0; c < 3; ++c) {
                const double tint = c == 0 ? 1.1 : (c == 1 ? 1.0 : 0.85);
                const double noise = 0.01 * (rng.uniform() - 0.5);
                img.at(x, y, c) = std::clamp(base * tint + lights * (0.9 + 0.1 * tint) + noise,
                                             0.0, 1.0);
            }
        }
    }
    return img;
}

inline nightforge::Image constant_image(int w, int h, int c, double v) {
    return nightforge::Image(w, h, c, v);
}

/// Fresh scratch directory under the build tree's temp area.
inline std::string scratch_dir(const std::string& tag) {
    namespace fs = std::filesystem;
    static std::uint64_t counter = 0;
    const fs::path dir =
        fs::temp_directory_path() / ("nightforge_test_" + tag + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

}  // namespace testsupport
