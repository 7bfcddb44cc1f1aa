#pragma once

#include "nightforge/image.hpp"

namespace nightforge {

/// Spectral-residual saliency. Works on a 64-pixel-wide grayscale copy:
/// the log-amplitude spectrum minus its 3x3 box average drives a rebuilt
/// spectrum whose inverse transform, squared, smoothed with smooth_sigma
/// and upsampled back, is min-max normalized to [0,1]. A constant input
/// (min == max after smoothing) maps to all zeros. Single-channel output.
Image spectral_saliency(const Image& img, double smooth_sigma = 2.5);

}  // namespace nightforge
