#include "nightforge/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "nightforge/errors.hpp"

namespace nightforge {

void DarkenConfig::validate() const {
    if (!(gamma_lo >= 1.0 && gamma_hi >= gamma_lo)) {
        throw ParamError("DarkenConfig: require 1 <= gamma_lo <= gamma_hi");
    }
    if (!(scale_lo > 0.0 && scale_hi >= scale_lo && scale_hi <= 1.0)) {
        throw ParamError("DarkenConfig: require 0 < scale_lo <= scale_hi <= 1");
    }
    if (sigma_read < 0.0 || sigma_shot < 0.0) {
        throw ParamError("DarkenConfig: noise sigmas must be >= 0");
    }
}

Image darken(const Image& img, double gamma, double scale) {
    if (!(gamma >= 1.0)) {
        throw ParamError("darken: gamma must be >= 1, got " + std::to_string(gamma));
    }
    if (!(scale > 0.0 && scale <= 1.0)) {
        throw ParamError("darken: scale must be in (0,1], got " + std::to_string(scale));
    }
    Image out = img;
    for (double& v : out.data) {
        v = scale * std::pow(v, gamma);
    }
    return out;
}

std::vector<double> sample_noise(const Image& img, const DarkenConfig& cfg, Rng& stream) {
    cfg.validate();
    std::vector<double> draws(img.size());
    const double read2 = cfg.sigma_read * cfg.sigma_read;
    const double shot2 = cfg.sigma_shot * cfg.sigma_shot;
    std::size_t k = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                const double v = img.at(x, y, c);
                draws[k++] = stream.normal() * std::sqrt(shot2 * v + read2);
            }
        }
    }
    return draws;
}

Image add_noise(const Image& img, const DarkenConfig& cfg, Rng& stream) {
    const std::vector<double> draws = sample_noise(img, cfg, stream);
    Image out = img;
    std::size_t k = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                out.at(x, y, c) = std::clamp(img.at(x, y, c) + draws[k++], 0.0, 1.0);
            }
        }
    }
    out.linear_range = true;
    return out;
}

TransferResult transfer_pipeline(const Image& img, const DarkenConfig& cfg,
                                 const MsrcrConfig& msrcr_cfg, std::uint64_t image_index) {
    cfg.validate();
    TransferResult res;
    res.stream_seed = derive_stream_seed(cfg.seed, image_index);
    Rng stream(res.stream_seed);
    res.gamma = stream.uniform_in(cfg.gamma_lo, cfg.gamma_hi);
    res.scale = stream.uniform_in(cfg.scale_lo, cfg.scale_hi);

    const Image dark = darken(img, res.gamma, res.scale);
    const Image noisy = add_noise(dark, cfg, stream);
    res.image = msrcr(noisy, msrcr_cfg);
    return res;
}

}  // namespace nightforge
