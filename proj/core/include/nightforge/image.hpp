#pragma once

#include <cstddef>
#include <vector>

namespace nightforge {

/// Planar floating-point raster. data holds channels back to back, each
/// channel row-major: data[c*W*H + y*W + x]. Nominal value range is [0,1];
/// stages that legitimately leave that range (pre-balance retinex) clear
/// linear_range so codecs can refuse them.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> data;
    bool linear_range = true;

    Image() = default;
    Image(int w, int h, int c, double fill = 0.0);

    std::size_t plane_size() const { return static_cast<std::size_t>(width) * height; }
    std::size_t size() const { return plane_size() * channels; }

    double& at(int x, int y, int c) {
        return data[static_cast<std::size_t>(c) * plane_size() +
                    static_cast<std::size_t>(y) * width + x];
    }
    double at(int x, int y, int c) const {
        return data[static_cast<std::size_t>(c) * plane_size() +
                    static_cast<std::size_t>(y) * width + x];
    }

    double* plane(int c) { return data.data() + static_cast<std::size_t>(c) * plane_size(); }
    const double* plane(int c) const {
        return data.data() + static_cast<std::size_t>(c) * plane_size();
    }

    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

/// BT.601 luma from an RGB image. Throws ShapeError unless channels == 3.
Image to_grayscale(const Image& img);

/// Clamp every sample to [0,1] and set linear_range.
Image clamp01(const Image& img);

/// Mean over all samples of all channels.
double mean_intensity(const Image& img);

/// Largest absolute per-sample difference. Shapes must match.
double max_abs_diff(const Image& a, const Image& b);

/// Root-mean-square per-sample difference. Shapes must match.
double rms_diff(const Image& a, const Image& b);

}  // namespace nightforge
