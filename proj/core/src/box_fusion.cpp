#include "nightforge/box_fusion.hpp"

#include <algorithm>
#include <cmath>

#include "nightforge/errors.hpp"

namespace nightforge {

namespace {

// Deterministic ordering used everywhere boxes are ranked: score desc,
// then coordinates ascending so exact ties have one canonical order.
bool rank_before(const Detection& a, const Detection& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.box.x1 != b.box.x1) return a.box.x1 < b.box.x1;
    if (a.box.y1 != b.box.y1) return a.box.y1 < b.box.y1;
    if (a.box.x2 != b.box.x2) return a.box.x2 < b.box.x2;
    return a.box.y2 < b.box.y2;
}

void require_valid(const std::vector<Detection>& dets, const char* op) {
    for (std::size_t i = 0; i < dets.size(); ++i) {
        if (!dets[i].box.valid()) {
            throw ParamError(std::string(op) + ": invalid box at index " + std::to_string(i));
        }
        if (dets[i].score < 0.0 || dets[i].score > 1.0) {
            throw ParamError(std::string(op) + ": score outside [0,1] at index " +
                             std::to_string(i));
        }
    }
}

}  // namespace

std::vector<Detection> nms(std::vector<Detection> dets, const FusionParams& params) {
    params.validate();
    require_valid(dets, "nms");
    std::stable_sort(dets.begin(), dets.end(), rank_before);
    std::vector<Detection> kept;
    for (const Detection& d : dets) {
        bool suppressed = false;
        for (const Detection& k : kept) {
            if (iou(d.box, k.box) > params.iou_thr_nms) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(d);
    }
    return kept;
}

std::vector<Detection> soft_nms(std::vector<Detection> dets, const FusionParams& params) {
    params.validate();
    if (dets.empty()) return {};
    require_valid(dets, "soft_nms");
    for (const Detection& d : dets) {
        if (d.model_id != dets.front().model_id) {
            throw UsageError("soft_nms: detections from mixed model ids");
        }
    }

    std::vector<Detection> out;
    out.reserve(dets.size());
    while (!dets.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < dets.size(); ++i) {
            if (rank_before(dets[i], dets[best])) best = i;
        }
        const Detection top = dets[best];
        dets.erase(dets.begin() + static_cast<std::ptrdiff_t>(best));
        out.push_back(top);

        for (std::size_t i = 0; i < dets.size();) {
            const double ov = iou(top.box, dets[i].box);
            if (params.soft_nms_method == FusionParams::SoftNmsMethod::Linear) {
                if (ov > params.soft_nms_iou) dets[i].score *= 1.0 - ov;
            } else {
                dets[i].score *= std::exp(-(ov * ov) / params.soft_nms_sigma);
            }
            if (dets[i].score < params.soft_nms_score_floor) {
                dets.erase(dets.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                ++i;
            }
        }
    }
    return out;
}

std::vector<Detection> wbf(const std::vector<std::vector<Detection>>& dets_per_model,
                           const FusionParams& params) {
    params.validate();
    const std::size_t T = dets_per_model.size();
    if (T == 0) return {};
    if (!params.model_weights.empty() && params.model_weights.size() != T) {
        throw ParamError("wbf: model_weights size " + std::to_string(params.model_weights.size()) +
                         " does not match model count " + std::to_string(T));
    }

    std::vector<Detection> pool;
    for (std::size_t m = 0; m < T; ++m) {
        require_valid(dets_per_model[m], "wbf");
        const double w = params.model_weights.empty() ? 1.0 : params.model_weights[m];
        for (const Detection& d : dets_per_model[m]) {
            if (d.score < params.wbf_skip_score) continue;
            Detection p = d;
            p.score *= w;
            p.model_id = static_cast<int>(m);
            pool.push_back(p);
        }
    }
    std::stable_sort(pool.begin(), pool.end(), rank_before);

    struct Cluster {
        std::vector<Detection> members;
        BBox fused;
        double score_sum = 0.0;
    };
    std::vector<Cluster> clusters;
    for (const Detection& d : pool) {
        double best_iou = 0.0;
        std::size_t best = 0;
        for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
            const double ov = iou(d.box, clusters[ci].fused);
            if (ov > best_iou) {
                best_iou = ov;
                best = ci;
            }
        }
        if (!clusters.empty() && best_iou > params.wbf_iou) {
            Cluster& c = clusters[best];
            c.members.push_back(d);
            c.score_sum += d.score;
            // Score-weighted coordinate mean over all members.
            BBox f{0.0, 0.0, 0.0, 0.0};
            for (const Detection& m : c.members) {
                f.x1 += m.score * m.box.x1;
                f.y1 += m.score * m.box.y1;
                f.x2 += m.score * m.box.x2;
                f.y2 += m.score * m.box.y2;
            }
            const double inv = 1.0 / c.score_sum;
            c.fused = {f.x1 * inv, f.y1 * inv, f.x2 * inv, f.y2 * inv};
        } else {
            clusters.push_back({{d}, d.box, d.score});
        }
    }

    std::vector<Detection> out;
    out.reserve(clusters.size());
    for (const Cluster& c : clusters) {
        Detection d;
        d.box = c.fused;
        d.label = c.members.front().label;
        d.model_id = 0;
        const double mean_score = c.score_sum / static_cast<double>(c.members.size());
        d.score = mean_score *
                  (static_cast<double>(std::min(c.members.size(), T)) / static_cast<double>(T));
        out.push_back(d);
    }
    std::stable_sort(out.begin(), out.end(), rank_before);
    return out;
}

TtaTransform TtaTransform::hflip(double width) {
    if (!(width > 0.0)) throw ParamError("TtaTransform: hflip width must be > 0");
    TtaTransform t;
    t.kind = Kind::HFlip;
    t.width = width;
    return t;
}

TtaTransform TtaTransform::scale(double factor) {
    if (!(factor > 0.0)) throw ParamError("TtaTransform: scale factor must be > 0");
    TtaTransform t;
    t.kind = Kind::Scale;
    t.factor = factor;
    return t;
}

TtaTransform TtaTransform::parse(const std::string& name) {
    if (name == "identity") return identity();
    if (name == "hflip") {
        TtaTransform t;
        t.kind = Kind::HFlip;
        return t;
    }
    if (name.rfind("scale_", 0) == 0) {
        try {
            const double f = std::stod(name.substr(6));
            return scale(f);
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("unknown transform name '" + name +
                      "' (expected identity, hflip, or scale_<factor>)");
}

std::string TtaTransform::name() const {
    switch (kind) {
        case Kind::Identity: return "identity";
        case Kind::HFlip: return "hflip";
        case Kind::Scale: return "scale_" + std::to_string(factor);
    }
    return "identity";
}

std::vector<Detection> tta_backmap(const std::vector<Detection>& dets,
                                   const TtaTransform& transform) {
    if (transform.kind == TtaTransform::Kind::HFlip && !(transform.width > 0.0)) {
        throw ParamError("tta_backmap: hflip requires a positive image width");
    }
    if (transform.kind == TtaTransform::Kind::Scale && !(transform.factor > 0.0)) {
        throw ParamError("tta_backmap: scale requires a positive factor");
    }

    std::vector<Detection> out;
    out.reserve(dets.size());
    for (std::size_t i = 0; i < dets.size(); ++i) {
        Detection d = dets[i];
        switch (transform.kind) {
            case TtaTransform::Kind::Identity:
                break;
            case TtaTransform::Kind::HFlip: {
                const double nx1 = transform.width - d.box.x2;
                const double nx2 = transform.width - d.box.x1;
                d.box.x1 = nx1;
                d.box.x2 = nx2;
                break;
            }
            case TtaTransform::Kind::Scale:
                d.box.x1 /= transform.factor;
                d.box.y1 /= transform.factor;
                d.box.x2 /= transform.factor;
                d.box.y2 /= transform.factor;
                break;
        }
        if (!d.box.valid()) {
            throw Error("tta_backmap: detection " + std::to_string(i) + " maps to invalid box [" +
                        std::to_string(d.box.x1) + "," + std::to_string(d.box.y1) + "," +
                        std::to_string(d.box.x2) + "," + std::to_string(d.box.y2) + "]");
        }
        out.push_back(d);
    }
    return out;
}

std::vector<Detection> ensemble(const std::vector<EnsembleLeaf>& leaves,
                                const FusionParams& params) {
    params.validate();
    std::vector<std::vector<Detection>> per_leaf;
    FusionParams wbf_params = params;
    wbf_params.model_weights.clear();
    per_leaf.reserve(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        std::vector<Detection> dets = tta_backmap(leaves[i].dets, leaves[i].transform);
        for (Detection& d : dets) d.model_id = static_cast<int>(i);
        per_leaf.push_back(soft_nms(std::move(dets), params));
        if (!(leaves[i].weight > 0.0)) {
            throw ParamError("ensemble: leaf weight must be > 0");
        }
        wbf_params.model_weights.push_back(leaves[i].weight);
    }
    return wbf(per_leaf, wbf_params);
}

}  // namespace nightforge
