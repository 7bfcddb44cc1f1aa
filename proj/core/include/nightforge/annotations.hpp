#pragma once

#include <string>
#include <vector>

#include "nightforge/boxes.hpp"

namespace nightforge {

/// Ground truth for one image. Boxes are clamped to the image extent at
/// ingestion; zero-area boxes are dropped (counted in the parse report).
struct ImageAnnotations {
    std::string image_path;
    int width = 0;
    int height = 0;
    std::vector<BBox> boxes;
};

struct ParseReport {
    std::vector<ImageAnnotations> annotations;
    std::size_t n_clamped = 0;
    std::size_t n_dropped = 0;
};

/// Read a manifest of "image_path<TAB>annotation_path" lines (paths
/// resolved against root) and the referenced annotation files: first line
/// integer N, then N lines "x1 y1 x2 y2". Image dimensions come from the
/// PNG headers. Missing files and malformed lines raise IngestError naming
/// the path/line.
ParseReport parse_annotations(const std::string& root, const std::string& manifest);

/// Manifest row as written/read by parse_annotations.
struct ManifestEntry {
    std::string image_path;
    std::string annotation_path;
};

std::vector<ManifestEntry> read_manifest(const std::string& manifest);

/// Annotation file writer (canonical format used above).
void write_annotation_file(const std::string& path, const std::vector<BBox>& boxes);

}  // namespace nightforge
