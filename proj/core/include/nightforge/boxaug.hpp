#pragma once

#include <utility>

#include "nightforge/annotations.hpp"
#include "nightforge/image.hpp"
#include "nightforge/rng.hpp"

namespace nightforge {

/// Resize image and annotations together; box coordinates scale by
/// (target_w/width, target_h/height).
std::pair<Image, ImageAnnotations> resize_with_boxes(const ImageAnnotations& ann,
                                                     const Image& img, int target_w,
                                                     int target_h);

struct CropResult {
    Image image;
    ImageAnnotations ann;
    bool crop_clamped = false;  // requested crop exceeded the image and was shrunk
};

/// Random crop with box bookkeeping. The origin is drawn uniformly over
/// valid positions (x first, then y). Boxes whose center falls outside the
/// crop are dropped; the rest are clipped and kept only if they retain at
/// least 30% of their original area.
CropResult crop_with_boxes(const ImageAnnotations& ann, const Image& img, int crop_w,
                           int crop_h, Rng& stream);

}  // namespace nightforge
