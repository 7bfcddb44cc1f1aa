#include "nightforge/annotations.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nightforge/errors.hpp"
#include "nightforge/png_io.hpp"

namespace nightforge {

namespace fs = std::filesystem;

std::vector<ManifestEntry> read_manifest(const std::string& manifest) {
    std::ifstream f(manifest);
    if (!f) throw IngestError("cannot open manifest: " + manifest);
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw IngestError("manifest " + manifest + " line " + std::to_string(lineno) +
                              ": expected 'image<TAB>annotation'");
        }
        entries.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
    return entries;
}

ParseReport parse_annotations(const std::string& root, const std::string& manifest) {
    ParseReport report;
    const std::vector<ManifestEntry> entries = read_manifest(manifest);

    for (const ManifestEntry& e : entries) {
        const std::string img_path = (fs::path(root) / e.image_path).string();
        const std::string ann_path = (fs::path(root) / e.annotation_path).string();

        if (!fs::exists(img_path)) throw IngestError("missing image file: " + img_path);
        if (!fs::exists(ann_path)) throw IngestError("missing annotation file: " + ann_path);

        const PngHeader hdr = read_png_header_file(img_path);

        ImageAnnotations ann;
        ann.image_path = e.image_path;
        ann.width = hdr.width;
        ann.height = hdr.height;

        std::ifstream f(ann_path);
        std::string line;
        if (!std::getline(f, line)) {
            throw IngestError("annotation file " + ann_path + ": missing count line");
        }
        long n = 0;
        try {
            n = std::stol(line);
        } catch (const std::exception&) {
            throw IngestError("annotation file " + ann_path + " line 1: bad count '" + line + "'");
        }
        if (n < 0) throw IngestError("annotation file " + ann_path + " line 1: negative count");

        for (long i = 0; i < n; ++i) {
            if (!std::getline(f, line)) {
                throw IngestError("annotation file " + ann_path + ": expected " +
                                  std::to_string(n) + " boxes, got " + std::to_string(i));
            }
            std::istringstream ss(line);
            BBox b;
            if (!(ss >> b.x1 >> b.y1 >> b.x2 >> b.y2)) {
                throw IngestError("annotation file " + ann_path + " line " +
                                  std::to_string(i + 2) + ": malformed box '" + line + "'");
            }
            BBox clamped;
            clamped.x1 = std::clamp(b.x1, 0.0, static_cast<double>(ann.width));
            clamped.y1 = std::clamp(b.y1, 0.0, static_cast<double>(ann.height));
            clamped.x2 = std::clamp(b.x2, 0.0, static_cast<double>(ann.width));
            clamped.y2 = std::clamp(b.y2, 0.0, static_cast<double>(ann.height));
            if (clamped.x1 != b.x1 || clamped.y1 != b.y1 || clamped.x2 != b.x2 ||
                clamped.y2 != b.y2) {
                ++report.n_clamped;
            }
            if (clamped.valid()) {
                ann.boxes.push_back(clamped);
            } else {
                ++report.n_dropped;
            }
        }
        report.annotations.push_back(std::move(ann));
    }
    return report;
}

void write_annotation_file(const std::string& path, const std::vector<BBox>& boxes) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IngestError("cannot open output file: " + path);
    f << boxes.size() << "\n";
    char buf[128];
    for (const BBox& b : boxes) {
        std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f %.6f\n", b.x1, b.y1, b.x2, b.y2);
        f << buf;
    }
}

}  // namespace nightforge
