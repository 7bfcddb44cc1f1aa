#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nightforge/image.hpp"

namespace nightforge {

struct PngHeader {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 = grayscale, 3 = RGB
};

/// Decode an 8-bit grayscale or RGB PNG. Samples are mapped to code/255.
/// Malformed streams raise DecodeError naming the byte offset; palette,
/// 16-bit, alpha and interlaced variants raise DecodeError as unsupported.
Image decode_png(const std::vector<std::uint8_t>& bytes);

/// Encode to 8-bit PNG with code = round(clamp(v,0,1)*255). Requires
/// linear_range; RangeError otherwise.
std::vector<std::uint8_t> encode_png(const Image& img);

/// Parse only the signature and IHDR; cheap way to get dimensions.
PngHeader read_png_header(const std::vector<std::uint8_t>& bytes);

PngHeader read_png_header_file(const std::string& path);
Image load_png(const std::string& path);
void save_png(const std::string& path, const Image& img);

}  // namespace nightforge
