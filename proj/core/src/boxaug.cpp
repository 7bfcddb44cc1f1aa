#include "nightforge/boxaug.hpp"

#include <algorithm>

#include "nightforge/errors.hpp"
#include "nightforge/resize.hpp"

namespace nightforge {

std::pair<Image, ImageAnnotations> resize_with_boxes(const ImageAnnotations& ann,
                                                     const Image& img, int target_w,
                                                     int target_h) {
    if (img.width != ann.width || img.height != ann.height) {
        throw ShapeError("resize_with_boxes: image and annotation dimensions disagree");
    }
    Image out = resize_bilinear(img, target_w, target_h);
    ImageAnnotations out_ann = ann;
    out_ann.width = target_w;
    out_ann.height = target_h;
    const double sx = static_cast<double>(target_w) / ann.width;
    const double sy = static_cast<double>(target_h) / ann.height;
    for (BBox& b : out_ann.boxes) {
        b.x1 *= sx;
        b.x2 *= sx;
        b.y1 *= sy;
        b.y2 *= sy;
    }
    return {std::move(out), std::move(out_ann)};
}

CropResult crop_with_boxes(const ImageAnnotations& ann, const Image& img, int crop_w,
                           int crop_h, Rng& stream) {
    if (crop_w < 1 || crop_h < 1) {
        throw ParamError("crop_with_boxes: crop dimensions must be >= 1");
    }
    if (img.width != ann.width || img.height != ann.height) {
        throw ShapeError("crop_with_boxes: image and annotation dimensions disagree");
    }

    CropResult res;
    if (crop_w > img.width || crop_h > img.height) {
        res.crop_clamped = true;
        crop_w = std::min(crop_w, img.width);
        crop_h = std::min(crop_h, img.height);
    }

    const int x0 = static_cast<int>(stream.uniform_index(img.width - crop_w + 1));
    const int y0 = static_cast<int>(stream.uniform_index(img.height - crop_h + 1));

    res.image = Image(crop_w, crop_h, img.channels);
    res.image.linear_range = img.linear_range;
    for (int c = 0; c < img.channels; ++c) {
        for (int y = 0; y < crop_h; ++y) {
            const double* src = img.plane(c) + static_cast<std::size_t>(y0 + y) * img.width + x0;
            double* dst = res.image.plane(c) + static_cast<std::size_t>(y) * crop_w;
            std::copy(src, src + crop_w, dst);
        }
    }

    res.ann.image_path = ann.image_path;
    res.ann.width = crop_w;
    res.ann.height = crop_h;
    for (const BBox& b : ann.boxes) {
        const double cx = 0.5 * (b.x1 + b.x2);
        const double cy = 0.5 * (b.y1 + b.y2);
        if (cx < x0 || cx >= x0 + crop_w || cy < y0 || cy >= y0 + crop_h) continue;

        BBox t{b.x1 - x0, b.y1 - y0, b.x2 - x0, b.y2 - y0};
        BBox clipped{std::clamp(t.x1, 0.0, static_cast<double>(crop_w)),
                     std::clamp(t.y1, 0.0, static_cast<double>(crop_h)),
                     std::clamp(t.x2, 0.0, static_cast<double>(crop_w)),
                     std::clamp(t.y2, 0.0, static_cast<double>(crop_h))};
        if (!clipped.valid()) continue;
        if (clipped.area() < 0.3 * b.area()) continue;
        res.ann.boxes.push_back(clipped);
    }
    return res;
}

}  // namespace nightforge
