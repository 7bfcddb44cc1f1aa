#pragma once

#include <cstdint>
#include <vector>

#include "nightforge/annotations.hpp"

namespace nightforge {

/// Face-width statistics: fixed 4-px histogram bins plus 1-D k-means
/// centers over the widths.
struct AnchorReport {
    static constexpr int kBinWidth = 4;
    std::vector<std::size_t> histogram;  // bin i counts widths in [4i, 4(i+1))
    std::vector<double> centers;         // ascending
    std::vector<std::size_t> populations;
    std::size_t n_faces = 0;
};

/// Histogram + seeded k-means++ / Lloyd clustering of ground-truth box
/// widths. Requires at least k distinct widths.
AnchorReport anchor_stats(const std::vector<ImageAnnotations>& anns, int k, std::uint64_t seed);

}  // namespace nightforge
