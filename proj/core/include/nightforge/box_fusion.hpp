#pragma once

#include <string>
#include <vector>

#include "nightforge/boxes.hpp"

namespace nightforge {

/// Classic hard NMS at params.iou_thr_nms: greedy keep-or-suppress in
/// score order with the shared tie-break (score desc, then x1, y1, x2, y2).
std::vector<Detection> nms(std::vector<Detection> dets, const FusionParams& params);

/// Soft-NMS over one model's detections. Pop the best-scoring detection
/// (ties by smaller x1, then y1), decay the rest: linear multiplies by
/// (1 - iou) when iou exceeds soft_nms_iou; gaussian multiplies by
/// exp(-iou^2/sigma) unconditionally. Detections falling below
/// soft_nms_score_floor are dropped. Mixed model ids raise UsageError.
std::vector<Detection> soft_nms(std::vector<Detection> dets, const FusionParams& params);

/// Weighted boxes fusion across models. Scores are pre-multiplied by the
/// per-model weights, detections are clustered against the running fused
/// boxes (highest-iou match above wbf_iou wins, earliest cluster on ties),
/// each fused box is the score-weighted mean of its members and its score
/// the member mean, rescaled by min(cluster_size, T)/T.
std::vector<Detection> wbf(const std::vector<std::vector<Detection>>& dets_per_model,
                           const FusionParams& params);

/// Inverse test-time-augmentation transform for predictions made on a
/// transformed image.
struct TtaTransform {
    enum class Kind { Identity, HFlip, Scale };
    Kind kind = Kind::Identity;
    double width = 0.0;   // original image width, required for HFlip
    double factor = 1.0;  // resize factor, required for Scale

    static TtaTransform identity() { return {}; }
    static TtaTransform hflip(double width);
    static TtaTransform scale(double factor);

    /// Parse a transform directory name: "identity", "hflip", or
    /// "scale_<factor>". HFlip widths are filled in per image later.
    static TtaTransform parse(const std::string& name);
    std::string name() const;
};

/// Map detections back into the original image frame. Invalid resulting
/// boxes raise Error naming the detection.
std::vector<Detection> tta_backmap(const std::vector<Detection>& dets,
                                   const TtaTransform& transform);

/// One (model, transform) prediction set entering the ensemble.
struct EnsembleLeaf {
    std::vector<Detection> dets;
    TtaTransform transform;
    double weight = 1.0;
};

/// Full ensemble: per leaf backmap + soft-NMS, then WBF across leaves.
std::vector<Detection> ensemble(const std::vector<EnsembleLeaf>& leaves,
                                const FusionParams& params);

}  // namespace nightforge
