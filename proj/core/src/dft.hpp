#pragma once

// Internal 2-D DFT for the spectral-residual saliency path. Transforms are
// tiny (the saliency working copy is 64 pixels wide) so a direct O(n^2)
// per-axis evaluation with precomputed twiddles is plenty and keeps the
// operation reentrant with no planner state.

#include <complex>
#include <vector>

namespace nightforge::detail {

using cplx = std::complex<double>;

inline std::vector<cplx> dft_twiddles(int n, bool inverse) {
    std::vector<cplx> tw(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (int k = 0; k < n; ++k) {
        const double ang = sign * 2.0 * M_PI * k / n;
        tw[k] = cplx(std::cos(ang), std::sin(ang));
    }
    return tw;
}

// In-place 2-D DFT over row-major data (w x h). The inverse includes the
// 1/(w*h) normalization.
inline void dft_2d(std::vector<cplx>& data, int w, int h, bool inverse) {
    std::vector<cplx> line(std::max(w, h));

    const std::vector<cplx> twr = dft_twiddles(w, inverse);
    for (int y = 0; y < h; ++y) {
        cplx* row = data.data() + static_cast<std::size_t>(y) * w;
        for (int k = 0; k < w; ++k) {
            cplx acc(0.0, 0.0);
            std::size_t idx = 0;
            for (int n = 0; n < w; ++n) {
                acc += row[n] * twr[idx];
                idx += k;
                if (idx >= static_cast<std::size_t>(w)) idx -= w;
            }
            line[k] = acc;
        }
        std::copy(line.begin(), line.begin() + w, row);
    }

    const std::vector<cplx> twc = dft_twiddles(h, inverse);
    std::vector<cplx> col(h);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) col[y] = data[static_cast<std::size_t>(y) * w + x];
        for (int k = 0; k < h; ++k) {
            cplx acc(0.0, 0.0);
            std::size_t idx = 0;
            for (int n = 0; n < h; ++n) {
                acc += col[n] * twc[idx];
                idx += k;
                if (idx >= static_cast<std::size_t>(h)) idx -= h;
            }
            line[k] = acc;
        }
        for (int y = 0; y < h; ++y) data[static_cast<std::size_t>(y) * w + x] = line[y];
    }

    if (inverse) {
        const double norm = 1.0 / (static_cast<double>(w) * h);
        for (cplx& v : data) v *= norm;
    }
}

}  // namespace nightforge::detail
