#include "nightforge/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "nightforge/errors.hpp"

namespace nightforge {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& scope,
                    const std::set<std::string>& known) {
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError("config: unknown key '" + scope + key + "'");
        }
    }
}

template <typename T>
void get_to(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            j.at(key).get_to(out);
        } catch (const json::exception& e) {
            throw ConfigError("config: bad value for '" + std::string(key) + "': " + e.what());
        }
    }
}

void get_range(const json& j, const char* key, double& lo, double& hi) {
    if (!j.contains(key)) return;
    const json& r = j.at(key);
    if (!r.is_array() || r.size() != 2) {
        throw ConfigError("config: '" + std::string(key) + "' must be [lo, hi]");
    }
    try {
        lo = r[0].get<double>();
        hi = r[1].get<double>();
    } catch (const json::exception& e) {
        throw ConfigError("config: bad range '" + std::string(key) + "': " + e.what());
    }
}

void parse_msrcr(const json& j, MsrcrConfig& cfg) {
    reject_unknown(j, "msrcr.",
                   {"scales", "weights", "alpha_c", "beta", "epsilon", "clip_fraction"});
    get_to(j, "scales", cfg.scales);
    if (j.contains("scales") && !j.contains("weights")) {
        cfg.weights.assign(cfg.scales.size(), 1.0 / static_cast<double>(cfg.scales.size()));
    }
    get_to(j, "weights", cfg.weights);
    get_to(j, "alpha_c", cfg.alpha_c);
    get_to(j, "beta", cfg.beta);
    get_to(j, "epsilon", cfg.epsilon);
    get_to(j, "clip_fraction", cfg.clip_fraction);
}

void parse_zerodce(const json& j, ZeroDceSettings& z) {
    reject_unknown(j, "zerodce.",
                   {"grid_w", "grid_h", "iterations", "exposure_target", "exposure_patch",
                    "w_exposure", "w_color", "w_spatial", "w_smooth", "steps", "step_size",
                    "working_width", "save_curves"});
    get_to(j, "grid_w", z.grid_w);
    get_to(j, "grid_h", z.grid_h);
    get_to(j, "iterations", z.iterations);
    get_to(j, "exposure_target", z.loss.exposure_target);
    get_to(j, "exposure_patch", z.loss.exposure_patch);
    get_to(j, "w_exposure", z.loss.w_exposure);
    get_to(j, "w_color", z.loss.w_color);
    get_to(j, "w_spatial", z.loss.w_spatial);
    get_to(j, "w_smooth", z.loss.w_smooth);
    get_to(j, "steps", z.steps);
    get_to(j, "step_size", z.step_size);
    get_to(j, "working_width", z.working_width);
    get_to(j, "save_curves", z.save_curves);
}

void parse_fuse(const json& j, FusionParams& p, std::map<std::string, double>& weights) {
    reject_unknown(j, "fuse.",
                   {"iou_thr_nms", "soft_nms_method", "soft_nms_sigma", "soft_nms_iou",
                    "soft_nms_score_floor", "wbf_iou", "wbf_skip_score", "model_weights"});
    get_to(j, "iou_thr_nms", p.iou_thr_nms);
    if (j.contains("soft_nms_method")) {
        const std::string m = j.at("soft_nms_method").get<std::string>();
        if (m == "linear") {
            p.soft_nms_method = FusionParams::SoftNmsMethod::Linear;
        } else if (m == "gaussian") {
            p.soft_nms_method = FusionParams::SoftNmsMethod::Gaussian;
        } else {
            throw ConfigError("config: soft_nms_method must be 'linear' or 'gaussian'");
        }
    }
    get_to(j, "soft_nms_sigma", p.soft_nms_sigma);
    get_to(j, "soft_nms_iou", p.soft_nms_iou);
    get_to(j, "soft_nms_score_floor", p.soft_nms_score_floor);
    get_to(j, "wbf_iou", p.wbf_iou);
    get_to(j, "wbf_skip_score", p.wbf_skip_score);
    get_to(j, "model_weights", weights);
}

}  // namespace

void PipelineConfig::validate() const {
    if (version != 1) {
        throw ConfigError("config: unsupported schema version " + std::to_string(version));
    }
    if (workers < 0) throw ConfigError("config: workers must be >= 0");
    if (enhance.method != "msrcr" && enhance.method != "msrcr+saliency" &&
        enhance.method != "zerodce") {
        throw ConfigError("config: enhance.method must be msrcr, msrcr+saliency or zerodce");
    }
    if (!(enhance.saliency_sigma > 0.0)) {
        throw ConfigError("config: enhance.saliency_sigma must be > 0");
    }
    if (zerodce.grid_w < 1 || zerodce.grid_h < 1 || zerodce.iterations < 1 ||
        zerodce.steps < 1 || zerodce.working_width < 8) {
        throw ConfigError("config: zerodce geometry/steps out of range");
    }
    if (!(zerodce.step_size > 0.0)) throw ConfigError("config: zerodce.step_size must be > 0");
    if (!(split_val_fraction > 0.0 && split_val_fraction < 1.0)) {
        throw ConfigError("config: split.val_fraction must be in (0,1)");
    }
    if (anchors_k < 1) throw ConfigError("config: anchors.k must be >= 1");
    if (!(eval_iou_thr > 0.0 && eval_iou_thr < 1.0)) {
        throw ConfigError("config: eval.iou_thr must be in (0,1)");
    }
    try {
        msrcr.validate();
        fusion.validate();
        zerodce.loss.validate();
        darken.validate();
        fuse.validate();
    } catch (const ParamError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& [name, w] : fuse_model_weights) {
        if (!(w > 0.0)) throw ConfigError("config: model weight for '" + name + "' must be > 0");
    }
}

PipelineConfig default_config() { return PipelineConfig{}; }

PipelineConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top-level document must be an object");

    reject_unknown(j, "",
                   {"version", "seed", "workers", "strict", "input_root", "output_root",
                    "enhance", "msrcr", "fusion", "zerodce", "darken", "fuse", "split",
                    "anchors", "eval"});

    PipelineConfig cfg;
    get_to(j, "version", cfg.version);
    get_to(j, "seed", cfg.seed);
    get_to(j, "workers", cfg.workers);
    get_to(j, "strict", cfg.strict);
    get_to(j, "input_root", cfg.input_root);
    get_to(j, "output_root", cfg.output_root);

    if (j.contains("enhance")) {
        const json& e = j.at("enhance");
        reject_unknown(e, "enhance.", {"method", "saliency_sigma"});
        get_to(e, "method", cfg.enhance.method);
        get_to(e, "saliency_sigma", cfg.enhance.saliency_sigma);
    }
    if (j.contains("msrcr")) parse_msrcr(j.at("msrcr"), cfg.msrcr);
    if (j.contains("fusion")) {
        const json& f = j.at("fusion");
        reject_unknown(f, "fusion.", {"alpha"});
        get_to(f, "alpha", cfg.fusion.alpha);
    }
    if (j.contains("zerodce")) parse_zerodce(j.at("zerodce"), cfg.zerodce);
    if (j.contains("darken")) {
        const json& d = j.at("darken");
        reject_unknown(d, "darken.",
                       {"gamma_range", "scale_range", "sigma_read", "sigma_shot"});
        get_range(d, "gamma_range", cfg.darken.gamma_lo, cfg.darken.gamma_hi);
        get_range(d, "scale_range", cfg.darken.scale_lo, cfg.darken.scale_hi);
        get_to(d, "sigma_read", cfg.darken.sigma_read);
        get_to(d, "sigma_shot", cfg.darken.sigma_shot);
    }
    if (j.contains("fuse")) parse_fuse(j.at("fuse"), cfg.fuse, cfg.fuse_model_weights);
    if (j.contains("split")) {
        const json& s = j.at("split");
        reject_unknown(s, "split.", {"val_fraction"});
        get_to(s, "val_fraction", cfg.split_val_fraction);
    }
    if (j.contains("anchors")) {
        const json& a = j.at("anchors");
        reject_unknown(a, "anchors.", {"k"});
        get_to(a, "k", cfg.anchors_k);
    }
    if (j.contains("eval")) {
        const json& e = j.at("eval");
        reject_unknown(e, "eval.", {"iou_thr"});
        get_to(e, "iou_thr", cfg.eval_iou_thr);
    }

    cfg.darken.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

PipelineConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string config_to_json(const PipelineConfig& cfg) {
    json j;
    j["version"] = cfg.version;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["strict"] = cfg.strict;
    j["input_root"] = cfg.input_root;
    j["output_root"] = cfg.output_root;
    j["enhance"] = {{"method", cfg.enhance.method},
                    {"saliency_sigma", cfg.enhance.saliency_sigma}};
    j["msrcr"] = {{"scales", cfg.msrcr.scales},
                  {"weights", cfg.msrcr.weights},
                  {"alpha_c", cfg.msrcr.alpha_c},
                  {"beta", cfg.msrcr.beta},
                  {"epsilon", cfg.msrcr.epsilon},
                  {"clip_fraction", cfg.msrcr.clip_fraction}};
    j["fusion"] = {{"alpha", cfg.fusion.alpha}};
    j["zerodce"] = {{"grid_w", cfg.zerodce.grid_w},
                    {"grid_h", cfg.zerodce.grid_h},
                    {"iterations", cfg.zerodce.iterations},
                    {"exposure_target", cfg.zerodce.loss.exposure_target},
                    {"exposure_patch", cfg.zerodce.loss.exposure_patch},
                    {"w_exposure", cfg.zerodce.loss.w_exposure},
                    {"w_color", cfg.zerodce.loss.w_color},
                    {"w_spatial", cfg.zerodce.loss.w_spatial},
                    {"w_smooth", cfg.zerodce.loss.w_smooth},
                    {"steps", cfg.zerodce.steps},
                    {"step_size", cfg.zerodce.step_size},
                    {"working_width", cfg.zerodce.working_width},
                    {"save_curves", cfg.zerodce.save_curves}};
    j["darken"] = {{"gamma_range", {cfg.darken.gamma_lo, cfg.darken.gamma_hi}},
                   {"scale_range", {cfg.darken.scale_lo, cfg.darken.scale_hi}},
                   {"sigma_read", cfg.darken.sigma_read},
                   {"sigma_shot", cfg.darken.sigma_shot}};
    j["fuse"] = {{"iou_thr_nms", cfg.fuse.iou_thr_nms},
                 {"soft_nms_method",
                  cfg.fuse.soft_nms_method == FusionParams::SoftNmsMethod::Linear ? "linear"
                                                                                  : "gaussian"},
                 {"soft_nms_sigma", cfg.fuse.soft_nms_sigma},
                 {"soft_nms_iou", cfg.fuse.soft_nms_iou},
                 {"soft_nms_score_floor", cfg.fuse.soft_nms_score_floor},
                 {"wbf_iou", cfg.fuse.wbf_iou},
                 {"wbf_skip_score", cfg.fuse.wbf_skip_score},
                 {"model_weights", cfg.fuse_model_weights}};
    j["split"] = {{"val_fraction", cfg.split_val_fraction}};
    j["anchors"] = {{"k", cfg.anchors_k}};
    j["eval"] = {{"iou_thr", cfg.eval_iou_thr}};
    return j.dump(2) + "\n";
}

void save_config_file(const std::string& path, const PipelineConfig& cfg) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IngestError("cannot open output file: " + path);
    f << config_to_json(cfg);
}

}  // namespace nightforge
