#pragma once

#include "nightforge/image.hpp"

namespace nightforge {

/// Blend weight for saliency-over-retinex fusion.
struct FusionConfig {
    double alpha = 0.3;

    void validate() const;
};

/// Convex blend alpha*saliency + (1-alpha)*enhanced, the single-channel
/// saliency broadcast over the enhanced image's channels. Spatial
/// dimensions must match.
Image fuse_saliency(const Image& enhanced, const Image& saliency, const FusionConfig& cfg);

}  // namespace nightforge
