#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nightforge/annotations.hpp"

namespace nightforge {

struct SplitGroup {
    std::string label;       // face-count bucket, e.g. "3-5"
    std::size_t size = 0;
    std::size_t val_count = 0;
    std::vector<std::string> val_members;
};

struct SplitResult {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<SplitGroup> group_report;
};

/// Face-count-stratified split. Images are bucketed by ground-truth box
/// count (1-2, 3-5, 6-10, 11-20, 21+, with a separate bucket for empty
/// images); each bucket is shuffled with a seed derived from (seed, bucket
/// ordinal) and contributes round(val_fraction*size) validation members,
/// at least 1 for non-singleton buckets. Train/val preserve manifest order.
SplitResult stratified_split(const std::vector<ImageAnnotations>& anns, double val_fraction,
                             std::uint64_t seed);

}  // namespace nightforge
