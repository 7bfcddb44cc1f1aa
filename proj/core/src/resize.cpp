#include "nightforge/resize.hpp"

#include <algorithm>
#include <cmath>

#include "nightforge/errors.hpp"

namespace nightforge {

LinearTaps make_linear_taps(int src_size, int dst_size) {
    LinearTaps t;
    t.i0.resize(dst_size);
    t.i1.resize(dst_size);
    t.f.resize(dst_size);
    const double scale = static_cast<double>(src_size) / dst_size;
    for (int i = 0; i < dst_size; ++i) {
        double src = (i + 0.5) * scale - 0.5;
        src = std::clamp(src, 0.0, static_cast<double>(src_size - 1));
        t.i0[i] = static_cast<int>(std::floor(src));
        t.i1[i] = std::min(t.i0[i] + 1, src_size - 1);
        t.f[i] = src - t.i0[i];
    }
    return t;
}

Image resize_bilinear(const Image& img, int new_w, int new_h) {
    if (new_w < 1 || new_h < 1) {
        throw ParamError("resize_bilinear: target dimensions must be >= 1");
    }
    if (new_w == img.width && new_h == img.height) {
        return img;
    }

    Image out(new_w, new_h, img.channels);
    out.linear_range = img.linear_range;

    const LinearTaps tx = make_linear_taps(img.width, new_w);
    const LinearTaps ty = make_linear_taps(img.height, new_h);

    for (int c = 0; c < img.channels; ++c) {
        const double* sp = img.plane(c);
        double* dp = out.plane(c);
        for (int y = 0; y < new_h; ++y) {
            const double* r0 = sp + static_cast<std::size_t>(ty.i0[y]) * img.width;
            const double* r1 = sp + static_cast<std::size_t>(ty.i1[y]) * img.width;
            const double fy = ty.f[y];
            for (int x = 0; x < new_w; ++x) {
                const double top = r0[tx.i0[x]] + tx.f[x] * (r0[tx.i1[x]] - r0[tx.i0[x]]);
                const double bot = r1[tx.i0[x]] + tx.f[x] * (r1[tx.i1[x]] - r1[tx.i0[x]]);
                dp[static_cast<std::size_t>(y) * new_w + x] = top + fy * (bot - top);
            }
        }
    }
    return out;
}

}  // namespace nightforge
