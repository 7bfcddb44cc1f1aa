#include "nightforge/split.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "nightforge/errors.hpp"
#include "nightforge/rng.hpp"

namespace nightforge {

namespace {

struct Bucket {
    const char* label;
    std::size_t lo, hi;  // inclusive face-count range
};

// Bucket 0 holds images without any face; the paper's grouping starts at 1.
constexpr Bucket kBuckets[] = {
    {"0", 0, 0},         {"1-2", 1, 2},   {"3-5", 3, 5},
    {"6-10", 6, 10},     {"11-20", 11, 20}, {"21+", 21, static_cast<std::size_t>(-1)},
};

std::size_t bucket_of(std::size_t faces) {
    for (std::size_t i = 0; i < std::size(kBuckets); ++i) {
        if (faces >= kBuckets[i].lo && faces <= kBuckets[i].hi) return i;
    }
    return std::size(kBuckets) - 1;
}

}  // namespace

SplitResult stratified_split(const std::vector<ImageAnnotations>& anns, double val_fraction,
                             std::uint64_t seed) {
    if (anns.empty()) throw ParamError("stratified_split: empty annotation list");
    if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
        throw ParamError("stratified_split: val_fraction must be in (0,1)");
    }

    std::vector<std::vector<std::size_t>> members(std::size(kBuckets));
    for (std::size_t i = 0; i < anns.size(); ++i) {
        members[bucket_of(anns[i].boxes.size())].push_back(i);
    }

    std::unordered_set<std::size_t> val_set;
    SplitResult res;
    for (std::size_t b = 0; b < std::size(kBuckets); ++b) {
        std::vector<std::size_t>& idx = members[b];
        if (idx.empty()) continue;

        std::size_t k = static_cast<std::size_t>(std::lround(val_fraction * idx.size()));
        if (k == 0 && idx.size() >= 2) k = 1;
        k = std::min(k, idx.size());

        Rng rng(derive_stream_seed(seed, b));
        rng.shuffle(idx);

        SplitGroup group;
        group.label = kBuckets[b].label;
        group.size = idx.size();
        group.val_count = k;
        for (std::size_t j = 0; j < k; ++j) {
            val_set.insert(idx[j]);
            group.val_members.push_back(anns[idx[j]].image_path);
        }
        std::sort(group.val_members.begin(), group.val_members.end());
        res.group_report.push_back(std::move(group));
    }

    for (std::size_t i = 0; i < anns.size(); ++i) {
        if (val_set.count(i)) {
            res.val.push_back(anns[i].image_path);
        } else {
            res.train.push_back(anns[i].image_path);
        }
    }
    return res;
}

}  // namespace nightforge
