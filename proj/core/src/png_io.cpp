#include "nightforge/png_io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>

#include "nightforge/errors.hpp"

namespace nightforge {

namespace {

const std::uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

[[noreturn]] void fail(std::size_t offset, const std::string& what) {
    throw DecodeError("PNG decode error at byte offset " + std::to_string(offset) +
                      ": " + what);
}

struct Reader {
    const std::vector<std::uint8_t>& buf;
    std::size_t pos = 0;

    std::uint8_t u8() {
        if (pos >= buf.size()) fail(pos, "unexpected end of stream");
        return buf[pos++];
    }
    std::uint32_t u32be() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
        return v;
    }
    void bytes(std::uint8_t* dst, std::size_t n) {
        if (pos + n > buf.size()) fail(pos, "unexpected end of stream");
        std::memcpy(dst, buf.data() + pos, n);
        pos += n;
    }
};

void append_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& data) {
    append_u32be(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    uLong crc = crc32(0L, out.data() + type_at, static_cast<uInt>(4 + data.size()));
    append_u32be(out, static_cast<std::uint32_t>(crc));
}

std::uint8_t paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a);
    const int pb = std::abs(p - b);
    const int pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
    if (pb <= pc) return static_cast<std::uint8_t>(b);
    return static_cast<std::uint8_t>(c);
}

std::vector<std::uint8_t> inflate_all(const std::vector<std::uint8_t>& in,
                                      std::size_t expected, std::size_t idat_offset) {
    std::vector<std::uint8_t> out(expected);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) fail(idat_offset, "zlib init failed");
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    const std::size_t produced = out.size() - zs.avail_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected) {
        fail(idat_offset, "corrupt or truncated IDAT data (" +
                              std::string(rc == Z_STREAM_END ? "short output" : zError(rc)) + ")");
    }
    return out;
}

PngHeader parse_header(Reader& r) {
    for (std::size_t i = 0; i < 8; ++i) {
        const std::size_t at = r.pos;
        if (r.u8() != kSignature[i]) fail(at, "bad PNG signature");
    }
    const std::size_t len_at = r.pos;
    const std::uint32_t len = r.u32be();
    char type[5] = {0};
    r.bytes(reinterpret_cast<std::uint8_t*>(type), 4);
    if (std::strcmp(type, "IHDR") != 0 || len != 13) fail(len_at, "missing IHDR");
    const std::size_t ihdr_at = r.pos;
    const std::uint32_t w = r.u32be();
    const std::uint32_t h = r.u32be();
    const int bit_depth = r.u8();
    const int color_type = r.u8();
    const int compression = r.u8();
    const int filter = r.u8();
    const int interlace = r.u8();
    r.u32be();  // IHDR crc checked by the chunk loop in decode_png

    if (w == 0 || h == 0 || w > 1u << 24 || h > 1u << 24) fail(ihdr_at, "bad dimensions");
    if (bit_depth == 16) fail(ihdr_at, "unsupported format: 16-bit depth");
    if (bit_depth != 8) fail(ihdr_at, "unsupported format: bit depth " + std::to_string(bit_depth));
    if (color_type == 3) fail(ihdr_at, "unsupported format: palette image");
    if (color_type != 0 && color_type != 2) {
        fail(ihdr_at, "unsupported format: color type " + std::to_string(color_type));
    }
    if (compression != 0 || filter != 0) fail(ihdr_at, "bad compression/filter method");
    if (interlace != 0) fail(ihdr_at, "unsupported format: interlaced image");

    PngHeader hdr;
    hdr.width = static_cast<int>(w);
    hdr.height = static_cast<int>(h);
    hdr.channels = (color_type == 2) ? 3 : 1;
    return hdr;
}

}  // namespace

PngHeader read_png_header(const std::vector<std::uint8_t>& bytes) {
    Reader r{bytes};
    return parse_header(r);
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
    Reader r{bytes};
    // Re-verify the IHDR chunk CRC that parse_header skips over.
    const PngHeader hdr = parse_header(r);
    {
        uLong crc = crc32(0L, bytes.data() + 12, 4 + 13);
        std::uint32_t stored = 0;
        for (int i = 0; i < 4; ++i) stored = (stored << 8) | bytes[12 + 17 + i];
        if (crc != stored) fail(12 + 17, "IHDR CRC mismatch");
    }

    std::vector<std::uint8_t> idat;
    std::size_t idat_offset = 0;
    bool seen_iend = false;
    while (!seen_iend) {
        const std::size_t len_at = r.pos;
        const std::uint32_t len = r.u32be();
        if (len > 1u << 30) fail(len_at, "chunk length too large");
        const std::size_t type_at = r.pos;
        char type[5] = {0};
        r.bytes(reinterpret_cast<std::uint8_t*>(type), 4);
        if (r.pos + len + 4 > bytes.size()) fail(type_at, "truncated chunk");
        const std::uint8_t* data = bytes.data() + r.pos;
        r.pos += len;
        const std::size_t crc_at = r.pos;
        const std::uint32_t stored_crc = r.u32be();
        uLong crc = crc32(0L, bytes.data() + type_at, static_cast<uInt>(4 + len));
        if (crc != stored_crc) fail(crc_at, std::string("CRC mismatch in ") + type + " chunk");

        if (std::strcmp(type, "IDAT") == 0) {
            if (idat.empty()) idat_offset = type_at;
            idat.insert(idat.end(), data, data + len);
        } else if (std::strcmp(type, "IEND") == 0) {
            seen_iend = true;
        } else if (std::strcmp(type, "PLTE") == 0) {
            fail(type_at, "unsupported format: palette chunk");
        }
        // Ancillary chunks are skipped.
    }
    if (idat.empty()) fail(r.pos, "no IDAT chunk");

    const int ch = hdr.channels;
    const std::size_t stride = static_cast<std::size_t>(hdr.width) * ch;
    const std::size_t raw_size = (stride + 1) * hdr.height;
    std::vector<std::uint8_t> raw = inflate_all(idat, raw_size, idat_offset);

    // Undo per-row filtering in place; prev points at the fully decoded row above.
    std::vector<std::uint8_t> pixels(stride * hdr.height);
    for (int y = 0; y < hdr.height; ++y) {
        const std::uint8_t* src = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        const std::uint8_t filter = src[0];
        std::uint8_t* row = pixels.data() + static_cast<std::size_t>(y) * stride;
        const std::uint8_t* prev = y > 0 ? row - stride : nullptr;
        if (filter > 4) fail(idat_offset, "bad filter type " + std::to_string(filter));
        for (std::size_t i = 0; i < stride; ++i) {
            const int a = i >= static_cast<std::size_t>(ch) ? row[i - ch] : 0;
            const int b = prev ? prev[i] : 0;
            const int c = (prev && i >= static_cast<std::size_t>(ch)) ? prev[i - ch] : 0;
            int v = src[1 + i];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, c); break;
            }
            row[i] = static_cast<std::uint8_t>(v & 0xFF);
        }
    }

    Image img(hdr.width, hdr.height, ch);
    for (int y = 0; y < hdr.height; ++y) {
        for (int x = 0; x < hdr.width; ++x) {
            for (int c = 0; c < ch; ++c) {
                const std::uint8_t code =
                    pixels[static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x) * ch + c];
                img.at(x, y, c) = code / 255.0;
            }
        }
    }
    img.linear_range = true;
    return img;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
    if (!img.linear_range) {
        throw RangeError("encode_png: image is not in linear [0,1] range");
    }
    if (img.channels != 1 && img.channels != 3) {
        throw ShapeError("encode_png: channels must be 1 or 3");
    }

    const int ch = img.channels;
    const std::size_t stride = static_cast<std::size_t>(img.width) * ch;
    std::vector<std::uint8_t> raw((stride + 1) * img.height);
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        row[0] = 0;  // filter: none
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < ch; ++c) {
                double v = img.at(x, y, c);
                v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
                row[1 + static_cast<std::size_t>(x) * ch + c] =
                    static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
            }
        }
    }

    uLongf comp_bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> comp(comp_bound);
    if (compress2(comp.data(), &comp_bound, raw.data(), static_cast<uLong>(raw.size()),
                  Z_BEST_SPEED) != Z_OK) {
        throw Error("encode_png: zlib compression failed");
    }
    comp.resize(comp_bound);

    std::vector<std::uint8_t> out(kSignature, kSignature + 8);
    std::vector<std::uint8_t> ihdr;
    append_u32be(ihdr, static_cast<std::uint32_t>(img.width));
    append_u32be(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);                         // bit depth
    ihdr.push_back(ch == 3 ? 2 : 0);           // color type
    ihdr.push_back(0);                         // compression
    ihdr.push_back(0);                         // filter
    ihdr.push_back(0);                         // interlace
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", comp);
    append_chunk(out, "IEND", {});
    return out;
}

PngHeader read_png_header_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IngestError("cannot open image file: " + path);
    std::vector<std::uint8_t> head(33);
    f.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
    head.resize(static_cast<std::size_t>(f.gcount()));
    return read_png_header(head);
}

Image load_png(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IngestError("cannot open image file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return decode_png(bytes);
}

void save_png(const std::string& path, const Image& img) {
    const std::vector<std::uint8_t> bytes = encode_png(img);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IngestError("cannot open output file: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IngestError("failed writing output file: " + path);
}

}  // namespace nightforge
