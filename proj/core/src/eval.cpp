#include "nightforge/eval.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "nightforge/errors.hpp"

namespace nightforge {

ApReport evaluate_map(const std::vector<ImageAnnotations>& gts,
                      const std::vector<std::vector<Detection>>& dets, double iou_thr) {
    if (!(iou_thr > 0.0 && iou_thr < 1.0)) {
        throw ParamError("evaluate_map: iou_thr must be in (0,1)");
    }
    if (dets.size() != gts.size()) {
        throw ParamError("evaluate_map: detections for " + std::to_string(dets.size()) +
                         " images, ground truth for " + std::to_string(gts.size()));
    }

    ApReport report;
    report.n_images = gts.size();
    for (const ImageAnnotations& g : gts) report.n_gt += g.boxes.size();

    struct Ranked {
        double score;
        std::size_t image;
        const Detection* det;
    };
    std::vector<Ranked> ranked;
    for (std::size_t i = 0; i < dets.size(); ++i) {
        for (const Detection& d : dets[i]) {
            if (!d.box.valid()) {
                throw ParamError("evaluate_map: invalid detection box in image " +
                                 std::to_string(i));
            }
            ranked.push_back({d.score, i, &d});
        }
    }
    report.n_det = ranked.size();
    std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.image != b.image) return a.image < b.image;
        return a.det->box.x1 < b.det->box.x1;
    });

    std::vector<std::vector<bool>> matched(gts.size());
    for (std::size_t i = 0; i < gts.size(); ++i) matched[i].assign(gts[i].boxes.size(), false);

    std::size_t tp = 0, fp = 0;
    std::vector<std::pair<double, double>> curve;
    curve.reserve(ranked.size());
    for (const Ranked& r : ranked) {
        const std::vector<BBox>& gt_boxes = gts[r.image].boxes;
        double best_iou = 0.0;
        std::size_t best_gt = gt_boxes.size();
        for (std::size_t j = 0; j < gt_boxes.size(); ++j) {
            if (matched[r.image][j]) continue;
            const double ov = iou(r.det->box, gt_boxes[j]);
            if (ov > best_iou) {  // strict: equal IoUs keep the earliest gt
                best_iou = ov;
                best_gt = j;
            }
        }
        if (best_gt < gt_boxes.size() && best_iou >= iou_thr) {
            matched[r.image][best_gt] = true;
            ++tp;
        } else {
            ++fp;
        }
        const double recall =
            report.n_gt == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(report.n_gt);
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        curve.emplace_back(recall, precision);
    }
    report.pr_curve = curve;

    // All-points AP with the precision envelope.
    double ap = 0.0;
    double env = 0.0;
    for (std::size_t i = curve.size(); i-- > 0;) {
        env = std::max(env, curve[i].second);
        const double r_lo = i == 0 ? 0.0 : curve[i - 1].first;
        ap += (curve[i].first - r_lo) * env;
    }
    report.ap = ap;
    return report;
}

std::string ap_report_to_json(const ApReport& report) {
    nlohmann::json j;
    j["ap"] = report.ap;
    j["n_images"] = report.n_images;
    j["n_gt"] = report.n_gt;
    j["n_det"] = report.n_det;
    nlohmann::json pr = nlohmann::json::array();
    for (const auto& [r, p] : report.pr_curve) pr.push_back({r, p});
    j["pr_curve"] = pr;
    return j.dump(2);
}

}  // namespace nightforge
