#pragma once

#include <vector>

#include "nightforge/image.hpp"

namespace nightforge {

/// Per-axis bilinear sampling taps under half-pixel-center alignment:
/// source coordinate of output index i is (i + 0.5) * src/dst - 0.5,
/// clamped to the source extent. out[i] = (1-f[i])*src[i0[i]] + f[i]*src[i1[i]].
struct LinearTaps {
    std::vector<int> i0, i1;
    std::vector<double> f;
};

LinearTaps make_linear_taps(int src_size, int dst_size);

/// Bilinear resampling with half-pixel-center alignment. Identity
/// dimensions reproduce the input bit-exactly.
Image resize_bilinear(const Image& img, int new_w, int new_h);

}  // namespace nightforge
