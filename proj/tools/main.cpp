// nightforge: low-light face-detection pipeline tools.
//
// Subcommands: enhance, transfer, fuse, eval, split, anchors.
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nightforge/errors.hpp"
#include "nightforge/runner.hpp"

namespace fs = std::filesystem;
using namespace nightforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    bool strict = false;
};

PipelineConfig resolve_config(const GlobalOptions& opts) {
    std::string path = opts.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("NIGHTFORGE_CONFIG")) path = env;
    }
    PipelineConfig cfg = path.empty() ? default_config() : load_config_file(path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.workers) cfg.workers = *opts.workers;
    if (opts.strict) cfg.strict = true;
    cfg.darken.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

void print_report_summary(const RunReport& report) {
    std::printf("%s: %zu image(s), %zu ok, %zu failed, %zu skipped\n", report.command.c_str(),
                report.entries.size(), report.n_ok, report.n_failed, report.n_skipped);
    for (const RunEntry& e : report.entries) {
        if (e.status != "ok") {
            std::printf("  [%s] %s%s%s\n", e.status.c_str(), e.path.c_str(),
                        e.note.empty() ? "" : ": ", e.note.c_str());
        }
    }
}

int report_exit(const PipelineConfig& cfg, const RunReport& report) {
    print_report_summary(report);
    if (cfg.strict && report.n_failed > 0) return kExitRuntime;
    return kExitOk;
}

std::string pick_dir(const std::string& arg, const std::string& cfg_value, const char* what) {
    if (!arg.empty()) return arg;
    if (!cfg_value.empty()) return cfg_value;
    throw ConfigError(std::string("no ") + what + " given (argument or config root)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nightforge: low-light detection pipeline toolkit"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--config", opts.config_path,
                   "Config JSON path (fallback: NIGHTFORGE_CONFIG env var)");
    std::uint64_t seed_arg = 0;
    auto* seed_opt = app.add_option("--seed", seed_arg, "Global seed override");
    int workers_arg = 0;
    auto* workers_opt = app.add_option("--workers", workers_arg, "Worker thread count override");
    app.add_flag("--strict", opts.strict, "Fail fast on the first per-image error");

    // enhance
    auto* cmd_enhance = app.add_subcommand("enhance", "Low-light enhancement over a PNG tree");
    std::string enh_in, enh_out, enh_method;
    cmd_enhance->add_option("input", enh_in, "Input directory");
    cmd_enhance->add_option("output", enh_out, "Output directory");
    cmd_enhance->add_option("--method", enh_method, "msrcr | msrcr+saliency | zerodce");

    // transfer
    auto* cmd_transfer = app.add_subcommand("transfer", "Normal-to-dark domain transfer");
    std::string tr_in, tr_out;
    cmd_transfer->add_option("input", tr_in, "Input directory");
    cmd_transfer->add_option("output", tr_out, "Output directory");

    // fuse
    auto* cmd_fuse = app.add_subcommand("fuse", "Soft-NMS + TTA backmap + WBF ensembling");
    std::string fuse_root, fuse_out, fuse_widths;
    cmd_fuse->add_option("preds", fuse_root, "preds/<model>/<transform>/<image>.txt root")
        ->required();
    cmd_fuse->add_option("output", fuse_out, "Output directory")->required();
    cmd_fuse->add_option("--image-width", fuse_widths,
                         "Per-image width table (image<TAB>width), needed for hflip");

    // eval
    auto* cmd_eval = app.add_subcommand("eval", "mAP of predictions against ground truth");
    std::string eval_manifest, eval_preds, eval_root, eval_out;
    cmd_eval->add_option("manifest", eval_manifest, "Ground-truth manifest")->required();
    cmd_eval->add_option("preds", eval_preds, "Directory of <image-stem>.txt predictions")
        ->required();
    cmd_eval->add_option("--root", eval_root, "Root for manifest paths (default: manifest dir)");
    cmd_eval->add_option("--out", eval_out, "Write the AP report JSON here");

    // split
    auto* cmd_split = app.add_subcommand("split", "Face-count-stratified train/val split");
    std::string split_manifest, split_prefix, split_root;
    cmd_split->add_option("manifest", split_manifest, "Ground-truth manifest")->required();
    cmd_split->add_option("prefix", split_prefix, "Output prefix")->required();
    cmd_split->add_option("--root", split_root, "Root for manifest paths (default: manifest dir)");

    // anchors
    auto* cmd_anchors = app.add_subcommand("anchors", "Face-width histogram and k-means centers");
    std::string anch_manifest, anch_root, anch_out;
    int anch_k = 0;
    cmd_anchors->add_option("manifest", anch_manifest, "Ground-truth manifest")->required();
    cmd_anchors->add_option("--k", anch_k, "Cluster count (default from config)");
    cmd_anchors->add_option("--root", anch_root, "Root for manifest paths (default: manifest dir)");
    cmd_anchors->add_option("--out", anch_out, "Write the anchor report JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (seed_opt->count() > 0) opts.seed = seed_arg;
    if (workers_opt->count() > 0) opts.workers = workers_arg;

    try {
        PipelineConfig cfg = resolve_config(opts);

        if (cmd_enhance->parsed()) {
            if (!enh_method.empty()) cfg.enhance.method = enh_method;
            cfg.validate();
            const std::string in = pick_dir(enh_in, cfg.input_root, "input directory");
            const std::string out = pick_dir(enh_out, cfg.output_root, "output directory");
            return report_exit(cfg, run_enhance(cfg, in, out));
        }
        if (cmd_transfer->parsed()) {
            const std::string in = pick_dir(tr_in, cfg.input_root, "input directory");
            const std::string out = pick_dir(tr_out, cfg.output_root, "output directory");
            return report_exit(cfg, run_transfer(cfg, in, out));
        }
        if (cmd_fuse->parsed()) {
            return report_exit(cfg, run_fuse(cfg, fuse_root, fuse_out, fuse_widths));
        }
        if (cmd_eval->parsed()) {
            const std::string root =
                eval_root.empty() ? fs::path(eval_manifest).parent_path().string() : eval_root;
            const ApReport report = run_eval(cfg, root, eval_manifest, eval_preds);
            if (!eval_out.empty()) {
                std::ofstream f(eval_out, std::ios::trunc);
                f << ap_report_to_json(report) << "\n";
            }
            std::printf("mAP %.4f\n", report.ap);
            return kExitOk;
        }
        if (cmd_split->parsed()) {
            const std::string root =
                split_root.empty() ? fs::path(split_manifest).parent_path().string() : split_root;
            const SplitResult split = run_split(cfg, root, split_manifest, split_prefix);
            std::printf("split: %zu train, %zu val -> %s.{train,val}.txt\n", split.train.size(),
                        split.val.size(), split_prefix.c_str());
            return kExitOk;
        }
        if (cmd_anchors->parsed()) {
            const std::string root =
                anch_root.empty() ? fs::path(anch_manifest).parent_path().string() : anch_root;
            const AnchorReport report = run_anchors(cfg, root, anch_manifest, anch_k);
            const std::string text = anchor_report_to_json(report);
            if (!anch_out.empty()) {
                std::ofstream f(anch_out, std::ios::trunc);
                f << text;
            }
            std::fputs(text.c_str(), stdout);
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
