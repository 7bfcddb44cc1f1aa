#include "nightforge/msrcr.hpp"

#include <algorithm>
#include <cmath>

#include "nightforge/errors.hpp"
#include "nightforge/gaussian.hpp"

namespace nightforge {

void MsrcrConfig::validate() const {
    if (scales.empty() || scales.size() != weights.size()) {
        throw ParamError("MsrcrConfig: scales and weights must be non-empty and equal length");
    }
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ParamError("MsrcrConfig: weights must be >= 0");
        wsum += w;
    }
    if (std::fabs(wsum - 1.0) > 1e-12) {
        throw ParamError("MsrcrConfig: weights must sum to 1");
    }
    double prev = 0.0;
    for (double s : scales) {
        if (s <= prev) throw ParamError("MsrcrConfig: scales must be strictly positive and increasing");
        prev = s;
    }
    if (clip_fraction < 0.0 || clip_fraction >= 0.5) {
        throw ParamError("MsrcrConfig: clip_fraction must be in [0, 0.5)");
    }
    if (epsilon <= 0.0) throw ParamError("MsrcrConfig: epsilon must be > 0");
}

namespace {

void require_rgb_linear(const Image& img, const char* op) {
    if (img.channels != 3) {
        throw ShapeError(std::string(op) + ": expected RGB image, got " +
                         std::to_string(img.channels) + " channel(s)");
    }
    if (!img.linear_range) {
        throw RangeError(std::string(op) + ": input must be in linear [0,1] range");
    }
}

}  // namespace

Image msr_log_ratios(const Image& img, const MsrcrConfig& cfg) {
    cfg.validate();
    require_rgb_linear(img, "msr_log_ratios");

    Image acc(img.width, img.height, 3, 0.0);
    const std::size_t n = img.plane_size() * 3;
    for (std::size_t s = 0; s < cfg.scales.size(); ++s) {
        const Image blurred = gaussian_blur(img, cfg.scales[s]);
        const double w = cfg.weights[s];
        for (std::size_t i = 0; i < n; ++i) {
            acc.data[i] += w * (std::log(img.data[i] + cfg.epsilon) -
                                std::log(blurred.data[i] + cfg.epsilon));
        }
    }
    acc.linear_range = false;
    return acc;
}

Image msrcr_color_restoration(const Image& img, const MsrcrConfig& cfg) {
    cfg.validate();
    require_rgb_linear(img, "msrcr_color_restoration");

    Image crf(img.width, img.height, 3);
    const std::size_t np = img.plane_size();
    const double* r = img.plane(0);
    const double* g = img.plane(1);
    const double* b = img.plane(2);
    for (std::size_t i = 0; i < np; ++i) {
        const double chroma = std::log(r[i] + g[i] + b[i] + cfg.epsilon);
        crf.plane(0)[i] = cfg.beta * (std::log(cfg.alpha_c * r[i] + cfg.epsilon) - chroma);
        crf.plane(1)[i] = cfg.beta * (std::log(cfg.alpha_c * g[i] + cfg.epsilon) - chroma);
        crf.plane(2)[i] = cfg.beta * (std::log(cfg.alpha_c * b[i] + cfg.epsilon) - chroma);
    }
    crf.linear_range = false;
    return crf;
}

Image msrcr(const Image& img, const MsrcrConfig& cfg) {
    cfg.validate();
    require_rgb_linear(img, "msrcr");

    Image msr = msr_log_ratios(img, cfg);
    const Image crf = msrcr_color_restoration(img, cfg);
    for (std::size_t i = 0; i < msr.data.size(); ++i) {
        msr.data[i] *= crf.data[i];
    }

    // Simplest color balance per channel: clip the configured tails, then
    // stretch linearly to [0,1].
    const std::size_t np = msr.plane_size();
    std::vector<double> sorted(np);
    for (int c = 0; c < 3; ++c) {
        double* p = msr.plane(c);
        std::copy(p, p + np, sorted.begin());
        const auto lo_idx = static_cast<std::size_t>(std::floor(cfg.clip_fraction * (np - 1)));
        const auto hi_idx = static_cast<std::size_t>(std::ceil((1.0 - cfg.clip_fraction) * (np - 1)));
        std::nth_element(sorted.begin(), sorted.begin() + lo_idx, sorted.end());
        const double lo = sorted[lo_idx];
        std::nth_element(sorted.begin() + lo_idx, sorted.begin() + hi_idx, sorted.end());
        const double hi = sorted[hi_idx];
        // Flat channel (including flat-up-to-fp-noise: a constant input leaves
        // MSR at ~1e-13 which the CRF factor scales to ~1e-11).
        if (hi - lo < 1e-9) {
            std::fill(p, p + np, 0.5);
            continue;
        }
        const double inv = 1.0 / (hi - lo);
        for (std::size_t i = 0; i < np; ++i) {
            p[i] = std::clamp((p[i] - lo) * inv, 0.0, 1.0);
        }
    }
    msr.linear_range = true;
    return msr;
}

}  // namespace nightforge
