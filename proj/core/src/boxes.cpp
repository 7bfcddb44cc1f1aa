#include "nightforge/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nightforge/errors.hpp"

namespace nightforge {

bool BBox::valid() const {
    return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
           std::isfinite(y2) && x2 > x1 && y2 > y1;
}

void FusionParams::validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(iou_thr_nms) || !in01(soft_nms_iou) || !in01(wbf_iou) ||
        !in01(soft_nms_score_floor) || !in01(wbf_skip_score)) {
        throw ParamError("FusionParams: thresholds must be in [0,1]");
    }
    if (!(soft_nms_sigma > 0.0)) {
        throw ParamError("FusionParams: soft_nms_sigma must be > 0");
    }
    for (double w : model_weights) {
        if (!(w > 0.0)) throw ParamError("FusionParams: model weights must be > 0");
    }
}

double iou(const BBox& a, const BBox& b) {
    const double ix = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    if (ix <= 0.0) return 0.0;
    const double iy = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    return inter / (a.area() + b.area() - inter);
}

std::vector<Detection> read_detections(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IngestError("cannot open detection file: " + path);
    std::string line;
    if (!std::getline(f, line)) {
        throw IngestError("detection file " + path + ": missing count line");
    }
    long n = 0;
    try {
        n = std::stol(line);
    } catch (const std::exception&) {
        throw IngestError("detection file " + path + " line 1: bad count '" + line + "'");
    }
    if (n < 0) throw IngestError("detection file " + path + " line 1: negative count");

    std::vector<Detection> dets;
    dets.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        if (!std::getline(f, line)) {
            throw IngestError("detection file " + path + ": expected " + std::to_string(n) +
                              " detections, got " + std::to_string(i));
        }
        std::istringstream ss(line);
        Detection d;
        if (!(ss >> d.box.x1 >> d.box.y1 >> d.box.x2 >> d.box.y2 >> d.score)) {
            throw IngestError("detection file " + path + " line " + std::to_string(i + 2) +
                              ": malformed detection '" + line + "'");
        }
        if (!d.box.valid()) {
            throw IngestError("detection file " + path + " line " + std::to_string(i + 2) +
                              ": degenerate box");
        }
        dets.push_back(d);
    }
    return dets;
}

void write_detections(const std::string& path, const std::vector<Detection>& dets) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IngestError("cannot open output file: " + path);
    f << dets.size() << "\n";
    char buf[160];
    for (const Detection& d : dets) {
        std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f %.6f %.6f\n", d.box.x1, d.box.y1,
                      d.box.x2, d.box.y2, d.score);
        f << buf;
    }
    if (!f) throw IngestError("failed writing detection file: " + path);
}

}  // namespace nightforge
