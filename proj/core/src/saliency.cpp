#include "nightforge/saliency.hpp"

#include <algorithm>
#include <cmath>

#include "dft.hpp"
#include "nightforge/errors.hpp"
#include "nightforge/gaussian.hpp"
#include "nightforge/resize.hpp"

namespace nightforge {

namespace {

constexpr int kWorkingWidth = 64;
constexpr double kAmpGuard = 1e-20;

// 3x3 box average with replicated borders.
std::vector<double> box3(const std::vector<double>& src, int w, int h) {
    std::vector<double> out(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = std::clamp(x + dx, 0, w - 1);
                    acc += src[static_cast<std::size_t>(yy) * w + xx];
                }
            }
            out[static_cast<std::size_t>(y) * w + x] = acc / 9.0;
        }
    }
    return out;
}

}  // namespace

Image spectral_saliency(const Image& img, double smooth_sigma) {
    if (img.width < 8 || img.height < 8) {
        throw ShapeError("spectral_saliency: image must be at least 8x8, got " +
                         std::to_string(img.width) + "x" + std::to_string(img.height));
    }
    if (!(smooth_sigma > 0.0)) {
        throw ParamError("spectral_saliency: smooth_sigma must be > 0");
    }

    const Image gray = img.channels == 3 ? to_grayscale(img) : img;
    const int sw = kWorkingWidth;
    const int sh = std::max(
        8, static_cast<int>(std::lround(static_cast<double>(img.height) * sw / img.width)));
    const Image small = resize_bilinear(gray, sw, sh);

    std::vector<detail::cplx> spec(small.plane_size());
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = detail::cplx(small.data[i], 0.0);
    detail::dft_2d(spec, sw, sh, false);

    std::vector<double> log_amp(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        log_amp[i] = std::log(std::abs(spec[i]) + kAmpGuard);
    }
    const std::vector<double> smoothed_log = box3(log_amp, sw, sh);

    // Rebuild the spectrum as amplitude * exp(-box(L)) with the original
    // phase. Writing it as a scale on the complex bin keeps zero bins at
    // exactly zero, so a constant image stays constant through the inverse.
    for (std::size_t i = 0; i < spec.size(); ++i) {
        spec[i] *= std::exp(-smoothed_log[i]);
    }
    detail::dft_2d(spec, sw, sh, true);

    Image sal_small(sw, sh, 1);
    for (std::size_t i = 0; i < spec.size(); ++i) sal_small.data[i] = std::norm(spec[i]);
    sal_small.linear_range = false;

    Image smoothed = gaussian_blur(sal_small, smooth_sigma);
    Image full = resize_bilinear(smoothed, img.width, img.height);

    const auto [mn_it, mx_it] = std::minmax_element(full.data.begin(), full.data.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mx - mn < 1e-15) {
        std::fill(full.data.begin(), full.data.end(), 0.0);
    } else {
        const double inv = 1.0 / (mx - mn);
        for (double& v : full.data) v = (v - mn) * inv;
    }
    full.linear_range = true;
    return full;
}

}  // namespace nightforge
