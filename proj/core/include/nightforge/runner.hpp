#pragma once

#include <string>
#include <vector>

#include "nightforge/anchors.hpp"
#include "nightforge/config.hpp"
#include "nightforge/eval.hpp"
#include "nightforge/split.hpp"

namespace nightforge {

struct RunEntry {
    std::string path;
    std::string status;  // ok | failed | skipped
    double ms = 0.0;
    std::string note;
};

/// Batch outcome. Failures never abort the batch unless the config is
/// strict, in which case remaining images are marked skipped.
struct RunReport {
    std::string command;
    std::vector<RunEntry> entries;
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
    std::size_t n_skipped = 0;

    bool all_ok() const { return n_failed == 0; }
    std::string to_json() const;
};

/// Enhance every PNG under input_dir (method from cfg.enhance.method) into
/// a mirrored tree under output_dir. Writes config.json (resolved echo)
/// and report.json; the report carries wall-clock timings and is the one
/// output file that is not byte-reproducible across runs.
RunReport run_enhance(const PipelineConfig& cfg, const std::string& input_dir,
                      const std::string& output_dir);

/// Normal-to-dark transfer over every PNG under input_dir, mirrored into
/// output_dir. Emits manifest.tsv rows "image<TAB>gamma<TAB>scale<TAB>seed"
/// in manifest (sorted path) order.
RunReport run_transfer(const PipelineConfig& cfg, const std::string& input_dir,
                       const std::string& output_dir);

/// Ensemble detections laid out as preds_root/<model>/<transform>/<image>.txt.
/// width_table (image<TAB>width lines) is required when any hflip branch
/// exists. Fused files land in output_dir/<image>.txt.
RunReport run_fuse(const PipelineConfig& cfg, const std::string& preds_root,
                   const std::string& output_dir, const std::string& width_table);

/// Evaluate preds_dir/<image-stem>.txt against the ground-truth manifest
/// (paths resolved against root). Missing or extra prediction files raise
/// IngestError listing the ids.
ApReport run_eval(const PipelineConfig& cfg, const std::string& root,
                  const std::string& gt_manifest, const std::string& preds_dir);

/// Stratified split; writes <prefix>.train.txt, <prefix>.val.txt and
/// <prefix>.split.json.
SplitResult run_split(const PipelineConfig& cfg, const std::string& root,
                      const std::string& gt_manifest, const std::string& out_prefix);

AnchorReport run_anchors(const PipelineConfig& cfg, const std::string& root,
                         const std::string& gt_manifest, int k);

std::string anchor_report_to_json(const AnchorReport& report);
std::string split_result_to_json(const SplitResult& split);

/// Sorted PNG paths below a directory, relative to it. The order defines
/// per-image indices for seeded streams.
std::vector<std::string> list_pngs(const std::string& dir);

}  // namespace nightforge
