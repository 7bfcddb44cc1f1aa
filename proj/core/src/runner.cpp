#include "nightforge/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "nightforge/box_fusion.hpp"
#include "nightforge/errors.hpp"
#include "nightforge/fusion.hpp"
#include "nightforge/png_io.hpp"
#include "nightforge/resize.hpp"
#include "nightforge/saliency.hpp"
#include "nightforge/thread_pool.hpp"
#include "nightforge/transfer.hpp"
#include "nightforge/zerodce.hpp"

namespace nightforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void finalize_counts(RunReport& report) {
    report.n_ok = report.n_failed = report.n_skipped = 0;
    for (const RunEntry& e : report.entries) {
        if (e.status == "ok") ++report.n_ok;
        else if (e.status == "failed") ++report.n_failed;
        else ++report.n_skipped;
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IngestError("cannot open output file: " + path);
    f << text;
}

// Shared skeleton for the per-image batch commands: scan, run tasks on the
// pool, capture failures per entry, write config echo and report.
template <typename Task>
RunReport run_batch(const char* command, const PipelineConfig& cfg,
                    const std::vector<std::string>& items, const std::string& output_dir,
                    Task&& task) {
    fs::create_directories(output_dir);
    save_config_file((fs::path(output_dir) / "config.json").string(), cfg);

    RunReport report;
    report.command = command;
    report.entries.resize(items.size());

    std::atomic<bool> abort{false};
    parallel_for_indexed(items.size(), cfg.workers, [&](std::size_t i) {
        RunEntry& entry = report.entries[i];
        entry.path = items[i];
        if (abort.load()) {
            entry.status = "skipped";
            entry.note = "aborted by --strict after earlier failure";
            return;
        }
        const double t0 = now_ms();
        try {
            task(i, entry);
            entry.status = "ok";
        } catch (const std::exception& e) {
            entry.status = "failed";
            entry.note = e.what();
            if (cfg.strict) abort.store(true);
        }
        entry.ms = now_ms() - t0;
    });

    finalize_counts(report);
    write_text((fs::path(output_dir) / "report.json").string(), report.to_json());
    return report;
}

}  // namespace

std::string RunReport::to_json() const {
    json j;
    j["command"] = command;
    j["n_images"] = entries.size();
    j["n_ok"] = n_ok;
    j["n_failed"] = n_failed;
    j["n_skipped"] = n_skipped;
    json per = json::array();
    for (const RunEntry& e : entries) {
        json je = {{"path", e.path}, {"status", e.status}, {"ms", e.ms}};
        if (!e.note.empty()) je["note"] = e.note;
        per.push_back(je);
    }
    j["per_image"] = per;
    return j.dump(2) + "\n";
}

std::vector<std::string> list_pngs(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IngestError("not a directory: " + dir);
    std::vector<std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            out.push_back(fs::relative(entry.path(), dir).string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

RunReport run_enhance(const PipelineConfig& cfg, const std::string& input_dir,
                      const std::string& output_dir) {
    cfg.validate();
    const std::vector<std::string> images = list_pngs(input_dir);

    return run_batch("enhance", cfg, images, output_dir, [&](std::size_t i, RunEntry&) {
        const fs::path in_path = fs::path(input_dir) / images[i];
        const fs::path out_path = fs::path(output_dir) / images[i];
        fs::create_directories(out_path.parent_path());

        const Image img = load_png(in_path.string());
        Image out;
        if (cfg.enhance.method == "msrcr") {
            out = msrcr(img, cfg.msrcr);
        } else if (cfg.enhance.method == "msrcr+saliency") {
            const Image enhanced = msrcr(img, cfg.msrcr);
            const Image sal = spectral_saliency(enhanced, cfg.enhance.saliency_sigma);
            out = fuse_saliency(enhanced, sal, cfg.fusion);
        } else {  // zerodce
            Image working = img;
            if (img.width > cfg.zerodce.working_width) {
                const int ww = cfg.zerodce.working_width;
                const int wh = std::max(
                    8, static_cast<int>(std::lround(static_cast<double>(img.height) * ww /
                                                    img.width)));
                working = resize_bilinear(img, ww, wh);
            }
            const CurveFitResult fit = optimize_curve(
                working, cfg.zerodce.loss, cfg.zerodce.steps, cfg.zerodce.step_size,
                derive_stream_seed(cfg.seed, i), cfg.zerodce.grid_w, cfg.zerodce.grid_h,
                cfg.zerodce.iterations);
            out = apply_curve(img, fit.curve);
            if (cfg.zerodce.save_curves) {
                fs::path curve_path = out_path;
                curve_path.replace_extension(".dce");
                save_curve_map(curve_path.string(), fit.curve);
            }
        }
        save_png(out_path.string(), out);
    });
}

RunReport run_transfer(const PipelineConfig& cfg, const std::string& input_dir,
                       const std::string& output_dir) {
    cfg.validate();
    const std::vector<std::string> images = list_pngs(input_dir);

    std::vector<TransferResult> results(images.size());
    RunReport report =
        run_batch("transfer", cfg, images, output_dir, [&](std::size_t i, RunEntry&) {
            const fs::path in_path = fs::path(input_dir) / images[i];
            const fs::path out_path = fs::path(output_dir) / images[i];
            fs::create_directories(out_path.parent_path());

            const Image img = load_png(in_path.string());
            DarkenConfig darken_cfg = cfg.darken;
            darken_cfg.seed = cfg.seed;
            results[i] = transfer_pipeline(img, darken_cfg, cfg.msrcr, i);
            save_png(out_path.string(), results[i].image);
            results[i].image = Image();  // keep the manifest row, drop pixels
        });

    std::string manifest;
    char buf[256];
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (report.entries[i].status != "ok") continue;
        std::snprintf(buf, sizeof(buf), "%s\t%.9g\t%.9g\t%llu\n", images[i].c_str(),
                      results[i].gamma, results[i].scale,
                      static_cast<unsigned long long>(results[i].stream_seed));
        manifest += buf;
    }
    write_text((fs::path(output_dir) / "manifest.tsv").string(), manifest);
    return report;
}

RunReport run_fuse(const PipelineConfig& cfg, const std::string& preds_root,
                   const std::string& output_dir, const std::string& width_table) {
    cfg.validate();
    if (!fs::is_directory(preds_root)) throw IngestError("not a directory: " + preds_root);

    struct LeafDir {
        std::string model;
        TtaTransform transform;
        fs::path dir;
    };
    std::vector<LeafDir> leaves;
    std::vector<std::string> models;
    for (const auto& m : fs::directory_iterator(preds_root)) {
        if (m.is_directory()) models.push_back(m.path().filename().string());
    }
    std::sort(models.begin(), models.end());
    if (models.empty()) throw IngestError("no model directories under " + preds_root);

    bool any_hflip = false;
    for (const std::string& model : models) {
        std::vector<std::string> transforms;
        for (const auto& t : fs::directory_iterator(fs::path(preds_root) / model)) {
            if (t.is_directory()) transforms.push_back(t.path().filename().string());
        }
        std::sort(transforms.begin(), transforms.end());
        if (transforms.empty()) {
            throw IngestError("model '" + model + "' has no transform directories");
        }
        for (const std::string& t : transforms) {
            LeafDir leaf;
            leaf.model = model;
            leaf.transform = TtaTransform::parse(t);  // ConfigError on unknown names
            leaf.dir = fs::path(preds_root) / model / t;
            if (leaf.transform.kind == TtaTransform::Kind::HFlip) any_hflip = true;
            leaves.push_back(std::move(leaf));
        }
    }

    std::map<std::string, double> widths;
    if (any_hflip) {
        if (width_table.empty()) {
            throw ConfigError("fuse: hflip branches present but no --image-width table given");
        }
        std::ifstream f(width_table);
        if (!f) throw IngestError("cannot open width table: " + width_table);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(f, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos) {
                throw IngestError("width table line " + std::to_string(lineno) +
                                  ": expected 'image<TAB>width'");
            }
            widths[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
        }
    }

    // Every leaf must predict the same image set.
    std::set<std::string> stems;
    for (const auto& e : fs::directory_iterator(leaves.front().dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") {
            stems.insert(e.path().stem().string());
        }
    }
    for (const LeafDir& leaf : leaves) {
        std::set<std::string> here;
        for (const auto& e : fs::directory_iterator(leaf.dir)) {
            if (e.is_regular_file() && e.path().extension() == ".txt") {
                here.insert(e.path().stem().string());
            }
        }
        if (here != stems) {
            std::string diff;
            for (const std::string& s : stems) {
                if (!here.count(s)) diff += " missing:" + s;
            }
            for (const std::string& s : here) {
                if (!stems.count(s)) diff += " extra:" + s;
            }
            throw IngestError("leaf " + leaf.dir.string() + " image set mismatch:" + diff);
        }
    }
    const std::vector<std::string> images(stems.begin(), stems.end());

    return run_batch("fuse", cfg, images, output_dir, [&](std::size_t i, RunEntry&) {
        const std::string& stem = images[i];
        std::vector<EnsembleLeaf> ens;
        ens.reserve(leaves.size());
        for (const LeafDir& leaf : leaves) {
            EnsembleLeaf el;
            el.dets = read_detections((leaf.dir / (stem + ".txt")).string());
            el.transform = leaf.transform;
            if (el.transform.kind == TtaTransform::Kind::HFlip) {
                const auto it = widths.find(stem);
                if (it == widths.end()) {
                    throw IngestError("width table has no entry for image '" + stem + "'");
                }
                el.transform = TtaTransform::hflip(it->second);
            }
            const auto wit = cfg.fuse_model_weights.find(leaf.model);
            el.weight = wit == cfg.fuse_model_weights.end() ? 1.0 : wit->second;
            ens.push_back(std::move(el));
        }
        const std::vector<Detection> fused = ensemble(ens, cfg.fuse);
        write_detections((fs::path(output_dir) / (stem + ".txt")).string(), fused);
    });
}

ApReport run_eval(const PipelineConfig& cfg, const std::string& root,
                  const std::string& gt_manifest, const std::string& preds_dir) {
    cfg.validate();
    const ParseReport parsed = parse_annotations(root, gt_manifest);

    std::set<std::string> expected;
    for (const ImageAnnotations& a : parsed.annotations) expected.insert(stem_of(a.image_path));
    std::set<std::string> present;
    if (!fs::is_directory(preds_dir)) throw IngestError("not a directory: " + preds_dir);
    for (const auto& e : fs::directory_iterator(preds_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") {
            present.insert(e.path().stem().string());
        }
    }
    if (expected != present) {
        std::string diff;
        for (const std::string& s : expected) {
            if (!present.count(s)) diff += " missing:" + s;
        }
        for (const std::string& s : present) {
            if (!expected.count(s)) diff += " extra:" + s;
        }
        throw IngestError("prediction/ground-truth image sets differ:" + diff);
    }

    std::vector<std::vector<Detection>> dets;
    dets.reserve(parsed.annotations.size());
    for (const ImageAnnotations& a : parsed.annotations) {
        dets.push_back(
            read_detections((fs::path(preds_dir) / (stem_of(a.image_path) + ".txt")).string()));
    }
    return evaluate_map(parsed.annotations, dets, cfg.eval_iou_thr);
}

SplitResult run_split(const PipelineConfig& cfg, const std::string& root,
                      const std::string& gt_manifest, const std::string& out_prefix) {
    cfg.validate();
    const ParseReport parsed = parse_annotations(root, gt_manifest);
    SplitResult split = stratified_split(parsed.annotations, cfg.split_val_fraction, cfg.seed);

    std::string train, val;
    for (const std::string& s : split.train) train += s + "\n";
    for (const std::string& s : split.val) val += s + "\n";
    write_text(out_prefix + ".train.txt", train);
    write_text(out_prefix + ".val.txt", val);
    write_text(out_prefix + ".split.json", split_result_to_json(split));
    return split;
}

AnchorReport run_anchors(const PipelineConfig& cfg, const std::string& root,
                         const std::string& gt_manifest, int k) {
    cfg.validate();
    const ParseReport parsed = parse_annotations(root, gt_manifest);
    return anchor_stats(parsed.annotations, k > 0 ? k : cfg.anchors_k, cfg.seed);
}

std::string anchor_report_to_json(const AnchorReport& report) {
    json j;
    j["n_faces"] = report.n_faces;
    j["bin_width"] = AnchorReport::kBinWidth;
    j["histogram"] = report.histogram;
    j["centers"] = report.centers;
    j["populations"] = report.populations;
    return j.dump(2) + "\n";
}

std::string split_result_to_json(const SplitResult& split) {
    json j;
    j["n_train"] = split.train.size();
    j["n_val"] = split.val.size();
    json groups = json::array();
    for (const SplitGroup& g : split.group_report) {
        groups.push_back({{"group", g.label},
                          {"size", g.size},
                          {"val_count", g.val_count},
                          {"val_members", g.val_members}});
    }
    j["groups"] = groups;
    return j.dump(2) + "\n";
}

}  // namespace nightforge
