#include "nightforge/image.hpp"

#include <algorithm>
#include <cmath>

#include "nightforge/errors.hpp"

namespace nightforge {

Image::Image(int w, int h, int c, double fill)
    : width(w), height(h), channels(c) {
    if (w < 1 || h < 1 || (c != 1 && c != 3)) {
        throw ShapeError("Image: invalid shape " + std::to_string(w) + "x" +
                         std::to_string(h) + "x" + std::to_string(c));
    }
    data.assign(static_cast<std::size_t>(w) * h * c, fill);
}

Image to_grayscale(const Image& img) {
    if (img.channels != 3) {
        throw ShapeError("to_grayscale: expected 3 channels, got " +
                         std::to_string(img.channels));
    }
    Image out(img.width, img.height, 1);
    const double* r = img.plane(0);
    const double* g = img.plane(1);
    const double* b = img.plane(2);
    double* y = out.plane(0);
    const std::size_t n = img.plane_size();
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
    }
    out.linear_range = img.linear_range;
    return out;
}

Image clamp01(const Image& img) {
    Image out = img;
    for (double& v : out.data) v = std::clamp(v, 0.0, 1.0);
    out.linear_range = true;
    return out;
}

double mean_intensity(const Image& img) {
    double s = 0.0;
    for (double v : img.data) s += v;
    return img.data.empty() ? 0.0 : s / static_cast<double>(img.data.size());
}

double max_abs_diff(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw ShapeError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        m = std::max(m, std::fabs(a.data[i] - b.data[i]));
    }
    return m;
}

double rms_diff(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw ShapeError("rms_diff: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        s += d * d;
    }
    return a.data.empty() ? 0.0 : std::sqrt(s / static_cast<double>(a.data.size()));
}

}  // namespace nightforge
