#pragma once

#include <string>
#include <vector>

namespace nightforge {

/// Axis-aligned box, corner representation. Valid boxes have x2 > x1 and
/// y2 > y1 (strictly positive area) with finite coordinates.
struct BBox {
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
    bool valid() const;
};

/// A scored box. model_id identifies the source detector within fusion
/// calls; the single-class artifact keeps label for format compatibility.
struct Detection {
    BBox box;
    double score = 0.0;
    int model_id = 0;
    int label = 0;
};

/// Thresholds for NMS/Soft-NMS/WBF. model_weights, when non-empty, must
/// align with the per-model lists handed to wbf.
struct FusionParams {
    double iou_thr_nms = 0.5;

    enum class SoftNmsMethod { Linear, Gaussian };
    SoftNmsMethod soft_nms_method = SoftNmsMethod::Linear;
    double soft_nms_sigma = 0.5;
    double soft_nms_iou = 0.3;
    double soft_nms_score_floor = 0.001;

    double wbf_iou = 0.55;
    double wbf_skip_score = 0.0;
    std::vector<double> model_weights;

    void validate() const;
};

/// Intersection over union; 0 for disjoint boxes.
double iou(const BBox& a, const BBox& b);

/// Detection file: first line N, then N lines "x1 y1 x2 y2 score" with six
/// decimal places. Errors carry the offending line number.
std::vector<Detection> read_detections(const std::string& path);
void write_detections(const std::string& path, const std::vector<Detection>& dets);

}  // namespace nightforge
