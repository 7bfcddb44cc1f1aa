#pragma once

// Independent straight-line reference implementations used as test oracles.
// These deliberately share no code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "nightforge/boxes.hpp"
#include "nightforge/image.hpp"
#include "nightforge/zerodce.hpp"

namespace testsupport {

// ---------------------------------------------------------------------------
// Box fusion oracles
// ---------------------------------------------------------------------------

struct ODet {
    double x1, y1, x2, y2, score;
};

inline double oracle_iou(const ODet& a, const ODet& b) {
    const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    const double inter = w * h;
    const double area_a = (a.x2 - a.x1) * (a.y2 - a.y1);
    const double area_b = (b.x2 - b.x1) * (b.y2 - b.y1);
    return inter / (area_a + area_b - inter);
}

/// Monte-Carlo-free rasterized IoU on a fine uniform grid over the union
/// extent; converges to the analytic value as cells shrink.
inline double oracle_iou_raster(const ODet& a, const ODet& b, int cells = 2000) {
    const double x_lo = std::min(a.x1, b.x1), x_hi = std::max(a.x2, b.x2);
    const double y_lo = std::min(a.y1, b.y1), y_hi = std::max(a.y2, b.y2);
    const double dx = (x_hi - x_lo) / cells, dy = (y_hi - y_lo) / cells;
    long long inter = 0, uni = 0;
    for (int iy = 0; iy < cells; ++iy) {
        const double y = y_lo + (iy + 0.5) * dy;
        const bool in_ay = y > a.y1 && y < a.y2;
        const bool in_by = y > b.y1 && y < b.y2;
        if (!in_ay && !in_by) continue;
        for (int ix = 0; ix < cells; ++ix) {
            const double x = x_lo + (ix + 0.5) * dx;
            const bool in_a = in_ay && x > a.x1 && x < a.x2;
            const bool in_b = in_by && x > b.x1 && x < b.x2;
            if (in_a && in_b) ++inter;
            if (in_a || in_b) ++uni;
        }
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline bool oracle_rank(const ODet& a, const ODet& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.x1 != b.x1) return a.x1 < b.x1;
    if (a.y1 != b.y1) return a.y1 < b.y1;
    if (a.x2 != b.x2) return a.x2 < b.x2;
    return a.y2 < b.y2;
}

inline std::vector<ODet> oracle_soft_nms(std::vector<ODet> dets, bool gaussian, double sigma,
                                         double iou_thr, double score_floor) {
    std::vector<ODet> out;
    while (!dets.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < dets.size(); ++i) {
            if (oracle_rank(dets[i], dets[best])) best = i;
        }
        const ODet top = dets[best];
        dets.erase(dets.begin() + static_cast<std::ptrdiff_t>(best));
        out.push_back(top);
        std::vector<ODet> kept;
        for (ODet d : dets) {
            const double ov = oracle_iou(top, d);
            if (gaussian) {
                d.score *= std::exp(-(ov * ov) / sigma);
            } else if (ov > iou_thr) {
                d.score *= 1.0 - ov;
            }
            if (d.score >= score_floor) kept.push_back(d);
        }
        dets = std::move(kept);
    }
    return out;
}

inline std::vector<ODet> oracle_wbf(const std::vector<std::vector<ODet>>& models,
                                    double wbf_iou, double skip_score,
                                    const std::vector<double>& weights) {
    const std::size_t T = models.size();
    std::vector<ODet> pool;
    for (std::size_t m = 0; m < T; ++m) {
        const double w = weights.empty() ? 1.0 : weights[m];
        for (const ODet& d : models[m]) {
            if (d.score < skip_score) continue;
            pool.push_back({d.x1, d.y1, d.x2, d.y2, d.score * w});
        }
    }
    std::stable_sort(pool.begin(), pool.end(), oracle_rank);

    std::vector<std::vector<ODet>> members;
    std::vector<ODet> fused;
    for (const ODet& d : pool) {
        double best_iou = 0.0;
        std::size_t best = 0;
        for (std::size_t i = 0; i < fused.size(); ++i) {
            const double ov = oracle_iou(d, fused[i]);
            if (ov > best_iou) {
                best_iou = ov;
                best = i;
            }
        }
        if (!fused.empty() && best_iou > wbf_iou) {
            members[best].push_back(d);
            double sx1 = 0, sy1 = 0, sx2 = 0, sy2 = 0, ssum = 0, smean = 0;
            for (const ODet& m : members[best]) {
                sx1 += m.score * m.x1;
                sy1 += m.score * m.y1;
                sx2 += m.score * m.x2;
                sy2 += m.score * m.y2;
                ssum += m.score;
                smean += m.score;
            }
            fused[best] = {sx1 / ssum, sy1 / ssum, sx2 / ssum, sy2 / ssum,
                           smean / static_cast<double>(members[best].size())};
        } else {
            members.push_back({d});
            fused.push_back(d);
        }
    }
    for (std::size_t i = 0; i < fused.size(); ++i) {
        fused[i].score *=
            static_cast<double>(std::min(members[i].size(), T)) / static_cast<double>(T);
    }
    std::stable_sort(fused.begin(), fused.end(), oracle_rank);
    return fused;
}

inline std::vector<ODet> to_odets(const std::vector<nightforge::Detection>& dets) {
    std::vector<ODet> out;
    out.reserve(dets.size());
    for (const auto& d : dets) out.push_back({d.box.x1, d.box.y1, d.box.x2, d.box.y2, d.score});
    return out;
}

// ---------------------------------------------------------------------------
// Curve-loss scalar oracle
// ---------------------------------------------------------------------------

/// Iterated quadratic curve on one scalar, evaluated in extended precision.
inline double scalar_curve(double x, double a, int iterations) {
    long double v = x;
    for (int k = 0; k < iterations; ++k) v = v + static_cast<long double>(a) * v * (1.0L - v);
    return static_cast<double>(v);
}

/// Straight-line re-implementation of the non-reference loss, scalar loops
/// only. Mirrors the documented tiling rule (full tiles; whole image when
/// smaller than one tile).
inline double oracle_dce_loss(const nightforge::Image& in, const nightforge::Image& out,
                              const nightforge::CurveMap& cm,
                              const nightforge::DceLossConfig& cfg) {
    auto gray_at = [](const nightforge::Image& img, int x, int y) {
        double s = 0.0;
        for (int c = 0; c < img.channels; ++c) s += img.at(x, y, c);
        return s / img.channels;
    };
    auto tile_mean = [&](const nightforge::Image& img, int x0, int y0, int tw, int th) {
        double s = 0.0;
        for (int y = y0; y < y0 + th; ++y) {
            for (int x = x0; x < x0 + tw; ++x) s += gray_at(img, x, y);
        }
        return s / (static_cast<double>(tw) * th);
    };
    auto tiling = [](int extent, int tile, int* n, int* t) {
        if (extent >= tile) {
            *n = extent / tile;
            *t = tile;
        } else {
            *n = 1;
            *t = extent;
        }
    };

    int enx, eny, etw, eth;
    tiling(out.width, cfg.exposure_patch, &enx, &etw);
    tiling(out.height, cfg.exposure_patch, &eny, &eth);
    double l_exp = 0.0;
    for (int ty = 0; ty < eny; ++ty) {
        for (int tx = 0; tx < enx; ++tx) {
            const double m = tile_mean(out, tx * etw, ty * eth, etw, eth);
            l_exp += (m - cfg.exposure_target) * (m - cfg.exposure_target);
        }
    }
    l_exp /= static_cast<double>(enx) * eny;

    double l_col = 0.0;
    if (out.channels == 3) {
        double mu[3] = {0, 0, 0};
        for (int c = 0; c < 3; ++c) {
            for (int y = 0; y < out.height; ++y) {
                for (int x = 0; x < out.width; ++x) mu[c] += out.at(x, y, c);
            }
            mu[c] /= static_cast<double>(out.width) * out.height;
        }
        l_col = (mu[0] - mu[1]) * (mu[0] - mu[1]) + (mu[0] - mu[2]) * (mu[0] - mu[2]) +
                (mu[1] - mu[2]) * (mu[1] - mu[2]);
    }

    int snx, sny, stw, sth;
    tiling(out.width, 4, &snx, &stw);
    tiling(out.height, 4, &sny, &sth);
    std::vector<double> ym(static_cast<std::size_t>(snx) * sny), xm(ym.size());
    for (int ty = 0; ty < sny; ++ty) {
        for (int tx = 0; tx < snx; ++tx) {
            ym[static_cast<std::size_t>(ty) * snx + tx] = tile_mean(out, tx * stw, ty * sth, stw, sth);
            xm[static_cast<std::size_t>(ty) * snx + tx] = tile_mean(in, tx * stw, ty * sth, stw, sth);
        }
    }
    double l_spa = 0.0;
    for (int ty = 0; ty < sny; ++ty) {
        for (int tx = 0; tx < snx; ++tx) {
            const std::size_t r = static_cast<std::size_t>(ty) * snx + tx;
            const int nxs[4] = {tx + 1, tx - 1, tx, tx};
            const int nys[4] = {ty, ty, ty + 1, ty - 1};
            for (int k = 0; k < 4; ++k) {
                if (nxs[k] < 0 || nxs[k] >= snx || nys[k] < 0 || nys[k] >= sny) continue;
                const std::size_t j = static_cast<std::size_t>(nys[k]) * snx + nxs[k];
                const double t = std::fabs(ym[r] - ym[j]) - std::fabs(xm[r] - xm[j]);
                l_spa += t * t;
            }
        }
    }
    l_spa /= static_cast<double>(snx) * sny;

    double l_tv = 0.0;
    std::size_t n_pairs = 0;
    for (int it = 0; it < cm.iterations; ++it) {
        for (int c = 0; c < 3; ++c) {
            for (int gy = 0; gy < cm.grid_h; ++gy) {
                for (int gx = 0; gx < cm.grid_w; ++gx) {
                    if (gx + 1 < cm.grid_w) {
                        const double d = cm.a(it, c, gy, gx + 1) - cm.a(it, c, gy, gx);
                        l_tv += d * d;
                        ++n_pairs;
                    }
                    if (gy + 1 < cm.grid_h) {
                        const double d = cm.a(it, c, gy + 1, gx) - cm.a(it, c, gy, gx);
                        l_tv += d * d;
                        ++n_pairs;
                    }
                }
            }
        }
    }
    if (n_pairs > 0) l_tv /= static_cast<double>(n_pairs);

    return cfg.w_exposure * l_exp + cfg.w_color * l_col + cfg.w_spatial * l_spa +
           cfg.w_smooth * l_tv;
}

}  // namespace testsupport
