#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nightforge/annotations.hpp"
#include "nightforge/boxes.hpp"

namespace nightforge {

/// Average-precision report. pr_curve holds the raw (recall, precision)
/// point after each ranked detection; ap integrates the precision
/// envelope (max precision at recall >= r) over all points.
struct ApReport {
    double ap = 0.0;
    std::size_t n_images = 0;
    std::size_t n_gt = 0;
    std::size_t n_det = 0;
    std::vector<std::pair<double, double>> pr_curve;
};

/// Single-class AP at the given IoU threshold. Detections pool across
/// images and rank by (score desc, image index asc, x1 asc); each matches
/// the highest-IoU unmatched ground truth of its image when that IoU
/// reaches the threshold (equal IoUs break to the earliest ground-truth
/// index). dets must align with gts one list per image.
ApReport evaluate_map(const std::vector<ImageAnnotations>& gts,
                      const std::vector<std::vector<Detection>>& dets, double iou_thr);

/// JSON document {ap, n_images, n_gt, n_det, pr_curve: [[r,p],...]}.
std::string ap_report_to_json(const ApReport& report);

}  // namespace nightforge
