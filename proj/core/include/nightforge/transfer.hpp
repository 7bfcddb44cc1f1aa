#pragma once

#include <cstdint>
#include <vector>

#include "nightforge/image.hpp"
#include "nightforge/msrcr.hpp"
#include "nightforge/rng.hpp"

namespace nightforge {

/// Darkening and sensor-noise parameters for normal-to-dark transfer.
/// Per-image randomness derives from (seed, image index) only.
struct DarkenConfig {
    double gamma_lo = 2.0;
    double gamma_hi = 3.5;
    double scale_lo = 0.1;
    double scale_hi = 0.35;
    double sigma_read = 0.02;
    double sigma_shot = 0.06;
    std::uint64_t seed = 0;

    void validate() const;
};

/// v' = scale * v^gamma per channel. gamma >= 1, 0 < scale <= 1.
Image darken(const Image& img, double gamma, double scale);

/// Raw noise draws n with n ~ Normal(0, sqrt(sigma_shot^2 * v + sigma_read^2)),
/// one per sample in row-major pixel order with the channel varying fastest.
/// This draw order is part of the determinism contract.
std::vector<double> sample_noise(const Image& img, const DarkenConfig& cfg, Rng& stream);

/// clamp(v + n, 0, 1) with n as produced by sample_noise on the same stream.
Image add_noise(const Image& img, const DarkenConfig& cfg, Rng& stream);

struct TransferResult {
    Image image;
    double gamma = 1.0;
    double scale = 1.0;
    std::uint64_t stream_seed = 0;  // derived per-image seed, recorded for the manifest
};

/// darken -> add_noise -> msrcr with gamma/scale sampled uniformly from the
/// configured ranges. The per-image stream is Rng(derive_stream_seed(seed,
/// image_index)); gamma is drawn first, then scale, then the noise field.
TransferResult transfer_pipeline(const Image& img, const DarkenConfig& cfg,
                                 const MsrcrConfig& msrcr_cfg, std::uint64_t image_index);

}  // namespace nightforge
