#include "nightforge/fusion.hpp"

#include <string>

#include "nightforge/errors.hpp"

namespace nightforge {

void FusionConfig::validate() const {
    if (alpha < 0.0 || alpha > 1.0) {
        throw ParamError("FusionConfig: alpha must be in [0,1], got " + std::to_string(alpha));
    }
}

Image fuse_saliency(const Image& enhanced, const Image& saliency, const FusionConfig& cfg) {
    cfg.validate();
    if (saliency.channels != 1) {
        throw ShapeError("fuse_saliency: saliency must be single-channel");
    }
    if (saliency.width != enhanced.width || saliency.height != enhanced.height) {
        throw ShapeError("fuse_saliency: dimension mismatch " + std::to_string(enhanced.width) +
                         "x" + std::to_string(enhanced.height) + " vs " +
                         std::to_string(saliency.width) + "x" + std::to_string(saliency.height));
    }

    Image out = enhanced;
    const double a = cfg.alpha;
    const std::size_t np = enhanced.plane_size();
    const double* s = saliency.plane(0);
    for (int c = 0; c < enhanced.channels; ++c) {
        double* p = out.plane(c);
        for (std::size_t i = 0; i < np; ++i) {
            p[i] = a * s[i] + (1.0 - a) * p[i];
        }
    }
    return out;
}

}  // namespace nightforge
