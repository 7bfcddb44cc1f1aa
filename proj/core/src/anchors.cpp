#include "nightforge/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "nightforge/errors.hpp"
#include "nightforge/rng.hpp"

namespace nightforge {

namespace {

constexpr int kMaxLloydIterations = 300;

std::vector<double> kmeans_pp_init(const std::vector<double>& xs, int k, Rng& rng) {
    std::vector<double> centers;
    centers.reserve(k);
    centers.push_back(xs[rng.uniform_index(xs.size())]);

    std::vector<double> d2(xs.size());
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            for (double c : centers) {
                const double d = xs[i] - c;
                best = std::min(best, d * d);
            }
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            // All remaining mass sits on existing centers; pick any point.
            centers.push_back(xs[rng.uniform_index(xs.size())]);
            continue;
        }
        double target = rng.uniform() * total;
        std::size_t pick = xs.size() - 1;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            target -= d2[i];
            if (target <= 0.0) {
                pick = i;
                break;
            }
        }
        centers.push_back(xs[pick]);
    }
    return centers;
}

}  // namespace

AnchorReport anchor_stats(const std::vector<ImageAnnotations>& anns, int k, std::uint64_t seed) {
    if (k < 1) throw ParamError("anchor_stats: k must be >= 1");

    std::vector<double> widths;
    for (const ImageAnnotations& a : anns) {
        for (const BBox& b : a.boxes) widths.push_back(b.width());
    }
    if (widths.empty()) throw ParamError("anchor_stats: no ground-truth boxes");

    const std::set<double> distinct(widths.begin(), widths.end());
    if (distinct.size() < static_cast<std::size_t>(k)) {
        throw ParamError("anchor_stats: need at least " + std::to_string(k) +
                         " distinct widths, have " + std::to_string(distinct.size()));
    }

    AnchorReport report;
    report.n_faces = widths.size();
    for (double w : widths) {
        const auto bin = static_cast<std::size_t>(std::max(0.0, w) / AnchorReport::kBinWidth);
        if (bin >= report.histogram.size()) report.histogram.resize(bin + 1, 0);
        ++report.histogram[bin];
    }

    Rng rng(mix64(seed));
    std::vector<double> centers = kmeans_pp_init(widths, k, rng);
    std::vector<int> assign(widths.size(), -1);

    for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < widths.size(); ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::max();
            for (int c = 0; c < k; ++c) {
                const double d = std::fabs(widths[i] - centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed) break;

        std::vector<double> sum(k, 0.0);
        std::vector<std::size_t> cnt(k, 0);
        for (std::size_t i = 0; i < widths.size(); ++i) {
            sum[assign[i]] += widths[i];
            ++cnt[assign[i]];
        }
        for (int c = 0; c < k; ++c) {
            // Empty clusters keep their previous center.
            if (cnt[c] > 0) centers[c] = sum[c] / static_cast<double>(cnt[c]);
        }
    }

    std::vector<std::size_t> pop(k, 0);
    for (int a : assign) ++pop[a];

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&centers](std::size_t a, std::size_t b) { return centers[a] < centers[b]; });
    for (std::size_t i : order) {
        report.centers.push_back(centers[i]);
        report.populations.push_back(pop[i]);
    }
    return report;
}

}  // namespace nightforge
