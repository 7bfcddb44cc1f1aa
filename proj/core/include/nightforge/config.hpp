#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "nightforge/boxes.hpp"
#include "nightforge/fusion.hpp"
#include "nightforge/msrcr.hpp"
#include "nightforge/transfer.hpp"
#include "nightforge/zerodce.hpp"

namespace nightforge {

struct EnhanceSettings {
    std::string method = "msrcr";  // msrcr | msrcr+saliency | zerodce
    double saliency_sigma = 2.5;
};

struct ZeroDceSettings {
    int grid_w = 32;
    int grid_h = 32;
    int iterations = 8;
    DceLossConfig loss;
    int steps = 100;
    double step_size = 0.1;
    int working_width = 256;  // optimization runs on a copy this wide
    bool save_curves = false;
};

/// Every tunable of the pipeline with schema defaults. Loading rejects
/// unknown keys; the resolved configuration echoes verbatim into each
/// run's output directory and reloads to an identical value.
struct PipelineConfig {
    int version = 1;
    std::uint64_t seed = 0;
    int workers = 0;  // 0: hardware concurrency
    bool strict = false;
    std::string input_root;
    std::string output_root;

    EnhanceSettings enhance;
    MsrcrConfig msrcr;
    FusionConfig fusion;
    ZeroDceSettings zerodce;
    DarkenConfig darken;  // seed follows the global seed
    FusionParams fuse;
    std::map<std::string, double> fuse_model_weights;

    double split_val_fraction = 0.1;
    int anchors_k = 5;
    double eval_iou_thr = 0.5;

    void validate() const;
};

PipelineConfig default_config();

/// Parse a config JSON document. Missing keys take defaults, unknown keys
/// raise ConfigError, and the result is validated.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config_file(const std::string& path);

/// Serialize every resolved field.
std::string config_to_json(const PipelineConfig& cfg);
void save_config_file(const std::string& path, const PipelineConfig& cfg);

}  // namespace nightforge
