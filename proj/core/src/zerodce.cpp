#include "nightforge/zerodce.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "nightforge/errors.hpp"
#include "nightforge/resize.hpp"

namespace nightforge {

CurveMap CurveMap::zeros(int grid_w, int grid_h, int iterations) {
    if (grid_w < 1 || grid_h < 1 || iterations < 1) {
        throw ParamError("CurveMap: grid dimensions and iterations must be >= 1");
    }
    CurveMap cm;
    cm.grid_w = grid_w;
    cm.grid_h = grid_h;
    cm.iterations = iterations;
    cm.params.assign(cm.expected_size(), 0.0);
    return cm;
}

void CurveMap::validate() const {
    if (grid_w < 1 || grid_h < 1 || iterations < 1) {
        throw ParamError("CurveMap: grid dimensions and iterations must be >= 1");
    }
    if (params.size() != expected_size()) {
        throw ParamError("CurveMap: params size " + std::to_string(params.size()) +
                         " != expected " + std::to_string(expected_size()));
    }
    for (double v : params) {
        if (!(v >= -1.0 && v <= 1.0)) {
            throw ParamError("CurveMap: curve parameter " + std::to_string(v) +
                             " outside [-1,1]");
        }
    }
}

void DceLossConfig::validate() const {
    if (!(exposure_target > 0.0 && exposure_target < 1.0)) {
        throw ParamError("DceLossConfig: exposure_target must be in (0,1)");
    }
    if (exposure_patch < 1) throw ParamError("DceLossConfig: exposure_patch must be >= 1");
    if (w_exposure < 0.0 || w_color < 0.0 || w_spatial < 0.0 || w_smooth < 0.0) {
        throw ParamError("DceLossConfig: loss weights must be >= 0");
    }
}

namespace {

constexpr int kSpatialRegion = 4;

// Tiling used by the exposure and spatial terms: full tiles only; if the
// image is narrower/shorter than one tile, the whole extent is one tile.
struct Tiling {
    int nx, ny, tw, th;
};

Tiling make_tiling(int w, int h, int tile) {
    Tiling t{};
    t.tw = std::min(tile, w);
    t.th = std::min(tile, h);
    t.nx = w >= tile ? w / tile : 1;
    t.ny = h >= tile ? h / tile : 1;
    return t;
}

// Mean over channels of the mean over a tile's pixels.
std::vector<double> tile_gray_means(const Image& img, const Tiling& t) {
    std::vector<double> means(static_cast<std::size_t>(t.nx) * t.ny, 0.0);
    const double norm = 1.0 / (static_cast<double>(t.tw) * t.th * img.channels);
    for (int ty = 0; ty < t.ny; ++ty) {
        for (int tx = 0; tx < t.nx; ++tx) {
            double acc = 0.0;
            for (int c = 0; c < img.channels; ++c) {
                for (int y = ty * t.th; y < ty * t.th + t.th; ++y) {
                    for (int x = tx * t.tw; x < tx * t.tw + t.tw; ++x) {
                        acc += img.at(x, y, c);
                    }
                }
            }
            means[static_cast<std::size_t>(ty) * t.nx + tx] = acc * norm;
        }
    }
    return means;
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

std::size_t tv_pair_count(const CurveMap& cm) {
    const std::size_t per_plane =
        static_cast<std::size_t>(cm.grid_h) * (cm.grid_w - 1) +
        static_cast<std::size_t>(cm.grid_w) * (cm.grid_h - 1);
    return static_cast<std::size_t>(cm.iterations) * 3 * per_plane;
}

// Upsampled per-pixel curve parameters for one iteration (3 planes).
std::vector<double> upsample_iteration(const CurveMap& cm, int it, int w, int h,
                                       const LinearTaps& tx, const LinearTaps& ty) {
    std::vector<double> full(static_cast<std::size_t>(w) * h * 3);
    const std::size_t np = static_cast<std::size_t>(w) * h;
    for (int c = 0; c < 3; ++c) {
        const double* gp = cm.params.data() + (static_cast<std::size_t>(it) * 3 + c) * cm.plane_size();
        double* fp = full.data() + c * np;
        for (int y = 0; y < h; ++y) {
            const double* r0 = gp + static_cast<std::size_t>(ty.i0[y]) * cm.grid_w;
            const double* r1 = gp + static_cast<std::size_t>(ty.i1[y]) * cm.grid_w;
            const double fy = ty.f[y];
            for (int x = 0; x < w; ++x) {
                const double top = r0[tx.i0[x]] + tx.f[x] * (r0[tx.i1[x]] - r0[tx.i0[x]]);
                const double bot = r1[tx.i0[x]] + tx.f[x] * (r1[tx.i1[x]] - r1[tx.i0[x]]);
                fp[static_cast<std::size_t>(y) * w + x] = top + fy * (bot - top);
            }
        }
    }
    return full;
}

struct ForwardPass {
    // states[k] is x_k as 3 planes of w*h; states.size() == iterations + 1.
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> a_full;  // per-iteration upsampled parameters
};

ForwardPass run_forward(const Image& img, const CurveMap& cm) {
    const int w = img.width, h = img.height;
    const LinearTaps tx = make_linear_taps(cm.grid_w, w);
    const LinearTaps ty = make_linear_taps(cm.grid_h, h);

    ForwardPass fw;
    fw.states.reserve(cm.iterations + 1);
    fw.a_full.reserve(cm.iterations);

    std::vector<double> x(img.plane_size() * 3);
    if (img.channels == 3) {
        std::copy(img.data.begin(), img.data.end(), x.begin());
    } else {
        // Grayscale inputs are broadcast over the three curve channels.
        const std::size_t np = img.plane_size();
        for (int c = 0; c < 3; ++c) std::copy(img.data.begin(), img.data.end(), x.begin() + c * np);
    }
    fw.states.push_back(x);

    for (int it = 0; it < cm.iterations; ++it) {
        fw.a_full.push_back(upsample_iteration(cm, it, w, h, tx, ty));
        const std::vector<double>& a = fw.a_full.back();
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += a[i] * x[i] * (1.0 - x[i]);
        }
        fw.states.push_back(x);
    }
    return fw;
}

Image state_to_image(const std::vector<double>& state, int w, int h) {
    Image out(w, h, 3);
    out.data = state;
    return out;
}

struct LossTerms {
    DceLossBreakdown weighted;  // each term already multiplied by its weight
    DceLossBreakdown raw;
};

// Gradient of the pixel terms (exposure, color, spatial) with respect to
// the output pixels, weights applied. The smooth term acts on the grids
// directly and is handled separately.
std::vector<double> loss_and_pixel_gradient(const Image& img_in, const Image& img_out,
                                            const DceLossConfig& cfg, DceLossBreakdown* out_terms,
                                            bool want_gradient) {
    const int w = img_out.width, h = img_out.height;
    const std::size_t np = img_out.plane_size();
    std::vector<double> grad;
    if (want_gradient) grad.assign(img_out.size(), 0.0);

    // Exposure control.
    const Tiling te = make_tiling(w, h, cfg.exposure_patch);
    const std::vector<double> exp_means = tile_gray_means(img_out, te);
    double l_exp = 0.0;
    for (double m : exp_means) {
        const double d = m - cfg.exposure_target;
        l_exp += d * d;
    }
    l_exp /= static_cast<double>(exp_means.size());
    if (want_gradient && cfg.w_exposure > 0.0) {
        const double scale = cfg.w_exposure * 2.0 /
                             (static_cast<double>(exp_means.size()) * te.tw * te.th * img_out.channels);
        for (int ty = 0; ty < te.ny; ++ty) {
            for (int tx = 0; tx < te.nx; ++tx) {
                const double coeff =
                    scale * (exp_means[static_cast<std::size_t>(ty) * te.nx + tx] - cfg.exposure_target);
                for (int c = 0; c < img_out.channels; ++c) {
                    double* gp = grad.data() + c * np;
                    for (int y = ty * te.th; y < ty * te.th + te.th; ++y) {
                        for (int x = tx * te.tw; x < tx * te.tw + te.tw; ++x) {
                            gp[static_cast<std::size_t>(y) * w + x] += coeff;
                        }
                    }
                }
            }
        }
    }

    // Color constancy over channel means.
    double l_col = 0.0;
    if (img_out.channels == 3) {
        double mu[3] = {0.0, 0.0, 0.0};
        for (int c = 0; c < 3; ++c) {
            const double* p = img_out.plane(c);
            for (std::size_t i = 0; i < np; ++i) mu[c] += p[i];
            mu[c] /= static_cast<double>(np);
        }
        for (int c = 0; c < 3; ++c) {
            for (int d = c + 1; d < 3; ++d) {
                const double diff = mu[c] - mu[d];
                l_col += diff * diff;
            }
        }
        if (want_gradient && cfg.w_color > 0.0) {
            for (int c = 0; c < 3; ++c) {
                double dmu = 0.0;
                for (int d = 0; d < 3; ++d) {
                    if (d != c) dmu += 2.0 * (mu[c] - mu[d]);
                }
                const double coeff = cfg.w_color * dmu / static_cast<double>(np);
                double* gp = grad.data() + c * np;
                for (std::size_t i = 0; i < np; ++i) gp[i] += coeff;
            }
        }
    }

    // Spatial consistency over 4x4 region means of input vs output gray.
    const Tiling ts = make_tiling(w, h, kSpatialRegion);
    const std::vector<double> yr = tile_gray_means(img_out, ts);
    const std::vector<double> xr = tile_gray_means(img_in, ts);
    double l_spa = 0.0;
    std::vector<double> d_yr;
    if (want_gradient) d_yr.assign(yr.size(), 0.0);
    const double region_norm = 1.0 / static_cast<double>(ts.nx * ts.ny);
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int ry = 0; ry < ts.ny; ++ry) {
        for (int rx = 0; rx < ts.nx; ++rx) {
            const std::size_t r = static_cast<std::size_t>(ry) * ts.nx + rx;
            for (int k = 0; k < 4; ++k) {
                const int nxi = rx + dx[k], nyi = ry + dy[k];
                if (nxi < 0 || nxi >= ts.nx || nyi < 0 || nyi >= ts.ny) continue;
                const std::size_t j = static_cast<std::size_t>(nyi) * ts.nx + nxi;
                const double t = std::fabs(yr[r] - yr[j]) - std::fabs(xr[r] - xr[j]);
                l_spa += region_norm * t * t;
                if (want_gradient) {
                    const double s = sgn(yr[r] - yr[j]);
                    d_yr[r] += region_norm * 2.0 * t * s;
                    d_yr[j] -= region_norm * 2.0 * t * s;
                }
            }
        }
    }
    if (want_gradient && cfg.w_spatial > 0.0) {
        const double pix_norm = 1.0 / (static_cast<double>(ts.tw) * ts.th * img_out.channels);
        for (int ry = 0; ry < ts.ny; ++ry) {
            for (int rx = 0; rx < ts.nx; ++rx) {
                const double coeff =
                    cfg.w_spatial * d_yr[static_cast<std::size_t>(ry) * ts.nx + rx] * pix_norm;
                if (coeff == 0.0) continue;
                for (int c = 0; c < img_out.channels; ++c) {
                    double* gp = grad.data() + c * np;
                    for (int y = ry * ts.th; y < ry * ts.th + ts.th; ++y) {
                        for (int x = rx * ts.tw; x < rx * ts.tw + ts.tw; ++x) {
                            gp[static_cast<std::size_t>(y) * w + x] += coeff;
                        }
                    }
                }
            }
        }
    }

    if (out_terms) {
        out_terms->exposure = l_exp;
        out_terms->color = l_col;
        out_terms->spatial = l_spa;
    }
    return grad;
}

double smooth_loss(const CurveMap& cm) {
    const std::size_t count = tv_pair_count(cm);
    if (count == 0) return 0.0;
    double acc = 0.0;
    for (int it = 0; it < cm.iterations; ++it) {
        for (int c = 0; c < 3; ++c) {
            for (int gy = 0; gy < cm.grid_h; ++gy) {
                for (int gx = 0; gx < cm.grid_w; ++gx) {
                    const double v = cm.a(it, c, gy, gx);
                    if (gx + 1 < cm.grid_w) {
                        const double d = cm.a(it, c, gy, gx + 1) - v;
                        acc += d * d;
                    }
                    if (gy + 1 < cm.grid_h) {
                        const double d = cm.a(it, c, gy + 1, gx) - v;
                        acc += d * d;
                    }
                }
            }
        }
    }
    return acc / static_cast<double>(count);
}

void add_smooth_gradient(const CurveMap& cm, double weight, std::vector<double>& grad) {
    const std::size_t count = tv_pair_count(cm);
    if (count == 0 || weight == 0.0) return;
    const double scale = weight * 2.0 / static_cast<double>(count);
    const std::size_t gp = cm.plane_size();
    for (int it = 0; it < cm.iterations; ++it) {
        for (int c = 0; c < 3; ++c) {
            const std::size_t base = (static_cast<std::size_t>(it) * 3 + c) * gp;
            for (int gy = 0; gy < cm.grid_h; ++gy) {
                for (int gx = 0; gx < cm.grid_w; ++gx) {
                    const std::size_t i = base + static_cast<std::size_t>(gy) * cm.grid_w + gx;
                    if (gx + 1 < cm.grid_w) {
                        const double d = cm.params[i + 1] - cm.params[i];
                        grad[i + 1] += scale * d;
                        grad[i] -= scale * d;
                    }
                    if (gy + 1 < cm.grid_h) {
                        const double d = cm.params[i + cm.grid_w] - cm.params[i];
                        grad[i + cm.grid_w] += scale * d;
                        grad[i] -= scale * d;
                    }
                }
            }
        }
    }
}

void check_finite(double v, const char* term) {
    if (!std::isfinite(v)) {
        throw NumericError(std::string("zerodce: non-finite value in ") + term);
    }
}

}  // namespace

Image apply_curve(const Image& img, const CurveMap& cm) {
    cm.validate();
    if (!img.linear_range) {
        throw RangeError("apply_curve: input must be in linear [0,1] range");
    }
    ForwardPass fw = run_forward(img, cm);
    Image out = state_to_image(fw.states.back(), img.width, img.height);
    out.linear_range = true;
    return out;
}

DceLossBreakdown dce_loss(const Image& img_in, const Image& img_out, const CurveMap& cm,
                          const DceLossConfig& cfg) {
    cfg.validate();
    if (img_in.width != img_out.width || img_in.height != img_out.height) {
        throw ShapeError("dce_loss: input/output dimension mismatch");
    }
    DceLossBreakdown terms;
    loss_and_pixel_gradient(img_in, img_out, cfg, &terms, false);
    terms.smooth = smooth_loss(cm);
    terms.total = cfg.w_exposure * terms.exposure + cfg.w_color * terms.color +
                  cfg.w_spatial * terms.spatial + cfg.w_smooth * terms.smooth;
    check_finite(terms.total, "loss total");
    return terms;
}

double curve_objective(const Image& img, const CurveMap& cm, const DceLossConfig& cfg) {
    const Image out = apply_curve(img, cm);
    return dce_loss(img, out, cm, cfg).total;
}

std::vector<double> curve_objective_gradient(const Image& img, const CurveMap& cm,
                                             const DceLossConfig& cfg) {
    cfg.validate();
    cm.validate();
    const int w = img.width, h = img.height;
    ForwardPass fw = run_forward(img, cm);

    const Image in3 = state_to_image(fw.states.front(), w, h);
    const Image out = state_to_image(fw.states.back(), w, h);
    DceLossBreakdown terms;
    std::vector<double> g = loss_and_pixel_gradient(in3, out, cfg, &terms, true);

    std::vector<double> grid_grad(cm.expected_size(), 0.0);
    const LinearTaps tx = make_linear_taps(cm.grid_w, w);
    const LinearTaps ty = make_linear_taps(cm.grid_h, h);
    const std::size_t np = static_cast<std::size_t>(w) * h;
    const std::size_t gp = cm.plane_size();

    for (int it = cm.iterations - 1; it >= 0; --it) {
        const std::vector<double>& x = fw.states[it];
        const std::vector<double>& a = fw.a_full[it];
        for (int c = 0; c < 3; ++c) {
            double* gg = grid_grad.data() + (static_cast<std::size_t>(it) * 3 + c) * gp;
            const double* xs = x.data() + c * np;
            const double* as = a.data() + c * np;
            double* gs = g.data() + c * np;
            for (int y = 0; y < h; ++y) {
                const double fy = ty.f[y];
                const std::size_t row0 = static_cast<std::size_t>(ty.i0[y]) * cm.grid_w;
                const std::size_t row1 = static_cast<std::size_t>(ty.i1[y]) * cm.grid_w;
                for (int x2 = 0; x2 < w; ++x2) {
                    const std::size_t i = static_cast<std::size_t>(y) * w + x2;
                    const double xv = xs[i];
                    const double da = gs[i] * xv * (1.0 - xv);  // dL/dA at this pixel
                    if (da != 0.0) {
                        const double fx = tx.f[x2];
                        gg[row0 + tx.i0[x2]] += da * (1.0 - fx) * (1.0 - fy);
                        gg[row0 + tx.i1[x2]] += da * fx * (1.0 - fy);
                        gg[row1 + tx.i0[x2]] += da * (1.0 - fx) * fy;
                        gg[row1 + tx.i1[x2]] += da * fx * fy;
                    }
                    gs[i] *= 1.0 + as[i] * (1.0 - 2.0 * xv);  // dx_{k+1}/dx_k
                }
            }
        }
    }

    add_smooth_gradient(cm, cfg.w_smooth, grid_grad);
    for (double v : grid_grad) check_finite(v, "gradient");
    return grid_grad;
}

CurveFitResult optimize_curve(const Image& img, const DceLossConfig& cfg, int steps,
                              double step_size, std::uint64_t seed, int grid_w, int grid_h,
                              int iterations) {
    (void)seed;  // reserved for stochastic patch sampling; default path is deterministic
    if (steps < 1) throw ParamError("optimize_curve: steps must be >= 1");
    if (!(step_size > 0.0)) throw ParamError("optimize_curve: step_size must be > 0");
    cfg.validate();

    CurveFitResult res;
    res.curve = CurveMap::zeros(grid_w, grid_h, iterations);
    double current = curve_objective(img, res.curve, cfg);
    check_finite(current, "initial loss");
    res.loss_trace.reserve(static_cast<std::size_t>(steps) + 1);
    res.loss_trace.push_back(current);

    CurveMap trial = res.curve;
    for (int step = 0; step < steps; ++step) {
        const std::vector<double> grad = curve_objective_gradient(img, res.curve, cfg);
        double gmax = 0.0;
        for (double v : grad) gmax = std::max(gmax, std::fabs(v));
        if (gmax == 0.0) {
            res.loss_trace.push_back(current);
            continue;
        }
        const double inv = 1.0 / gmax;
        double lr = step_size;
        bool accepted = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
            for (std::size_t i = 0; i < trial.params.size(); ++i) {
                trial.params[i] =
                    std::clamp(res.curve.params[i] - lr * grad[i] * inv, -1.0, 1.0);
            }
            const double cand = curve_objective(img, trial, cfg);
            check_finite(cand, "line-search loss");
            if (cand <= current) {
                res.curve.params = trial.params;
                current = cand;
                accepted = true;
            } else {
                lr *= 0.5;
            }
        }
        res.loss_trace.push_back(current);
    }
    return res;
}

std::vector<std::uint8_t> serialize_curve_map(const CurveMap& cm) {
    cm.validate();
    std::vector<std::uint8_t> out;
    out.reserve(16 + cm.params.size() * 4);
    const char magic[4] = {'D', 'C', 'E', '1'};
    out.insert(out.end(), magic, magic + 4);
    auto put_u32 = [&out](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    put_u32(static_cast<std::uint32_t>(cm.grid_w));
    put_u32(static_cast<std::uint32_t>(cm.grid_h));
    put_u32(static_cast<std::uint32_t>(cm.iterations));
    for (double v : cm.params) {
        const float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32(bits);
    }
    return out;
}

CurveMap deserialize_curve_map(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), "DCE1", 4) != 0) {
        throw DecodeError("curve map: bad magic or truncated header");
    }
    auto get_u32 = [&bytes](std::size_t at) {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
        return v;
    };
    CurveMap cm;
    cm.grid_w = static_cast<int>(get_u32(4));
    cm.grid_h = static_cast<int>(get_u32(8));
    cm.iterations = static_cast<int>(get_u32(12));
    if (cm.grid_w < 1 || cm.grid_h < 1 || cm.iterations < 1) {
        throw DecodeError("curve map: invalid geometry");
    }
    const std::size_t n = cm.expected_size();
    if (bytes.size() != 16 + n * 4) {
        throw DecodeError("curve map: payload size mismatch, expected " +
                          std::to_string(16 + n * 4) + " bytes, got " +
                          std::to_string(bytes.size()));
    }
    cm.params.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t bits = get_u32(16 + i * 4);
        float f;
        std::memcpy(&f, &bits, 4);
        cm.params[i] = static_cast<double>(f);
    }
    cm.validate();
    return cm;
}

void save_curve_map(const std::string& path, const CurveMap& cm) {
    const std::vector<std::uint8_t> bytes = serialize_curve_map(cm);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IngestError("cannot open output file: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

CurveMap load_curve_map(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IngestError("cannot open curve map file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return deserialize_curve_map(bytes);
}

}  // namespace nightforge
