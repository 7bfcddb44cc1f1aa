#pragma once

#include <vector>

#include "nightforge/image.hpp"

namespace nightforge {

/// Multi-scale retinex with color restoration. Scale sigmas and per-scale
/// weights drive the surround blurs; alpha_c/beta shape the chromatic
/// restoration term; clip_fraction sets the percentile tails of the final
/// per-channel balance.
struct MsrcrConfig {
    std::vector<double> scales{15.0, 80.0, 250.0};
    std::vector<double> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    double alpha_c = 125.0;
    double beta = 46.0;
    double epsilon = 1e-6;
    double clip_fraction = 0.01;

    void validate() const;
};

/// Pre-balance multi-scale retinex: per channel the weighted sum of
/// log(I + eps) - log(blur(I, sigma) + eps). Values are log-domain and not
/// confined to [0,1]; the result carries linear_range = false.
Image msr_log_ratios(const Image& img, const MsrcrConfig& cfg);

/// Color restoration factor per channel:
/// beta * (log(alpha_c * I_c + eps) - log(I_R + I_G + I_B + eps)).
Image msrcr_color_restoration(const Image& img, const MsrcrConfig& cfg);

/// Full MSRCR: MSR * CRF followed by per-channel simplest color balance
/// (clip at the clip_fraction tails, stretch to [0,1]). A flat channel maps
/// to 0.5 uniformly. Requires an RGB image with linear_range set.
Image msrcr(const Image& img, const MsrcrConfig& cfg);

}  // namespace nightforge
