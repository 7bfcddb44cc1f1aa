#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nightforge/image.hpp"

namespace nightforge {

/// Spatially varying parameters of the iterated quadratic enhancement
/// curve x <- x + A*x*(1-x). One grid_w x grid_h grid per iteration per
/// color channel, stored iteration-major, channel-major, row-major.
struct CurveMap {
    int grid_w = 32;
    int grid_h = 32;
    int iterations = 8;
    std::vector<double> params;  // iterations * 3 * grid_h * grid_w

    static CurveMap zeros(int grid_w, int grid_h, int iterations);

    std::size_t plane_size() const { return static_cast<std::size_t>(grid_w) * grid_h; }
    std::size_t expected_size() const {
        return static_cast<std::size_t>(iterations) * 3 * plane_size();
    }

    double& a(int it, int c, int gy, int gx) {
        return params[(static_cast<std::size_t>(it) * 3 + c) * plane_size() +
                      static_cast<std::size_t>(gy) * grid_w + gx];
    }
    double a(int it, int c, int gy, int gx) const {
        return params[(static_cast<std::size_t>(it) * 3 + c) * plane_size() +
                      static_cast<std::size_t>(gy) * grid_w + gx];
    }

    void validate() const;
};

/// Non-reference loss weights for the curve fit.
struct DceLossConfig {
    double exposure_target = 0.6;
    int exposure_patch = 16;
    double w_exposure = 1.0;
    double w_color = 0.5;
    double w_spatial = 1.0;
    double w_smooth = 20.0;

    void validate() const;
};

struct DceLossBreakdown {
    double total = 0.0;
    double exposure = 0.0;
    double color = 0.0;
    double spatial = 0.0;
    double smooth = 0.0;
};

/// Apply the iterated enhancement curve. Grids are bilinearly upsampled to
/// the image size per iteration. For A in [-1,1] the map keeps [0,1]
/// invariant; out-of-range parameters raise ParamError.
Image apply_curve(const Image& img, const CurveMap& cm);

/// Total non-reference loss of a candidate output against its input, plus
/// the per-term breakdown. Exposure and spatial terms pool over full
/// patches/regions only (trailing partial tiles are ignored; an image
/// smaller than one tile is treated as a single tile).
DceLossBreakdown dce_loss(const Image& img_in, const Image& img_out, const CurveMap& cm,
                          const DceLossConfig& cfg);

/// Loss of apply_curve(img, cm) as a function of the curve parameters.
double curve_objective(const Image& img, const CurveMap& cm, const DceLossConfig& cfg);

/// Analytic gradient of curve_objective with respect to cm.params, via the
/// chain rule through all curve iterations, the grid upsampling and every
/// loss term. Same layout as CurveMap::params.
std::vector<double> curve_objective_gradient(const Image& img, const CurveMap& cm,
                                             const DceLossConfig& cfg);

struct CurveFitResult {
    CurveMap curve;
    std::vector<double> loss_trace;  // initial loss + accepted loss per step
};

/// Projected gradient descent on the curve grids from zero initialization.
/// Steps move along the (max-normalized) negative gradient; backtracking
/// halves the step when the loss would increase, so the accepted trace is
/// non-increasing. Deterministic; the seed is reserved for optional
/// stochastic variants and unused by the default path.
CurveFitResult optimize_curve(const Image& img, const DceLossConfig& cfg, int steps,
                              double step_size, std::uint64_t seed, int grid_w = 32,
                              int grid_h = 32, int iterations = 8);

/// Flat binary container: magic "DCE1", grid_w/grid_h/iterations as u32 LE,
/// params as f32 LE in storage order.
std::vector<std::uint8_t> serialize_curve_map(const CurveMap& cm);
CurveMap deserialize_curve_map(const std::vector<std::uint8_t>& bytes);
void save_curve_map(const std::string& path, const CurveMap& cm);
CurveMap load_curve_map(const std::string& path);

}  // namespace nightforge
