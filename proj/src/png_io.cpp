#include "maskpipe/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace maskpipe {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& what, const std::string& path) {
    throw std::runtime_error(what + ": " + path);
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

void open_reader(PngReader& r, std::FILE* f, const std::string& path) {
    png_byte header[8];
    if (std::fread(header, 1, 8, f) != 8 || png_sig_cmp(header, 0, 8))
        fail("not a PNG file", path);
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) fail("png_create_read_struct failed", path);
    r.info = png_create_info_struct(r.png);
    if (!r.info) fail("png_create_info_struct failed", path);
    if (setjmp(png_jmpbuf(r.png))) fail("libpng error while reading", path);
    png_init_io(r.png, f);
    png_set_sig_bytes(r.png, 8);
    png_read_info(r.png, r.info);
}

}  // namespace

std::pair<int, int> png_dimensions(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) fail("cannot open", path);
    PngReader r;
    open_reader(r, f.get(), path);
    return {static_cast<int>(png_get_image_width(r.png, r.info)),
            static_cast<int>(png_get_image_height(r.png, r.info))};
}

GrayImage read_gray_png(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) fail("cannot open", path);
    PngReader r;
    open_reader(r, f.get(), path);
    if (setjmp(png_jmpbuf(r.png))) fail("libpng error while reading", path);

    const int w = static_cast<int>(png_get_image_width(r.png, r.info));
    const int h = static_cast<int>(png_get_image_height(r.png, r.info));
    const int color = png_get_color_type(r.png, r.info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
        color == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray_fixed(r.png, 1, -1, -1);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(r.png);
    if (png_get_bit_depth(r.png, r.info) < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    png_read_update_info(r.png, r.info);

    const int depth = png_get_bit_depth(r.png, r.info);
    const double scale = depth == 16 ? 65535.0 : 255.0;
    const size_t row_bytes = png_get_rowbytes(r.png, r.info);

    std::vector<png_byte> raw(static_cast<size_t>(h) * row_bytes);
    std::vector<png_bytep> rows(static_cast<size_t>(h));
    for (int y = 0; y < h; ++y) rows[static_cast<size_t>(y)] = raw.data() + y * row_bytes;
    png_read_image(r.png, rows.data());

    GrayImage img(w, h);
    for (int y = 0; y < h; ++y) {
        const png_byte* row = rows[static_cast<size_t>(y)];
        for (int x = 0; x < w; ++x) {
            double v;
            if (depth == 16) {
                // PNG stores 16-bit samples big-endian.
                v = static_cast<double>((row[2 * x] << 8) | row[2 * x + 1]);
            } else {
                v = static_cast<double>(row[x]);
            }
            img.at(x, y) = v / scale;
        }
    }
    return img;
}

namespace {

void write_png(const std::string& path, int w, int h, int depth, int color_type,
               const std::vector<png_byte>& raw, size_t row_bytes) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) fail("cannot open for writing", path);
    PngWriter wr;
    wr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!wr.png) fail("png_create_write_struct failed", path);
    wr.info = png_create_info_struct(wr.png);
    if (!wr.info) fail("png_create_info_struct failed", path);
    if (setjmp(png_jmpbuf(wr.png))) fail("libpng error while writing", path);
    png_init_io(wr.png, f.get());
    png_set_IHDR(wr.png, wr.info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), depth,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(wr.png, wr.info);
    std::vector<png_bytep> rows(static_cast<size_t>(h));
    for (int y = 0; y < h; ++y)
        rows[static_cast<size_t>(y)] = const_cast<png_bytep>(raw.data() + y * row_bytes);
    png_write_image(wr.png, rows.data());
    png_write_end(wr.png, nullptr);
}

png_byte quant8(double v) {
    const long q = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
    return static_cast<png_byte>(q);
}

}  // namespace

void write_gray8_png(const GrayImage& img, const std::string& path) {
    const size_t row_bytes = static_cast<size_t>(img.width);
    std::vector<png_byte> raw(row_bytes * img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            raw[static_cast<size_t>(y) * row_bytes + x] = quant8(img.at(x, y));
    write_png(path, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY, raw, row_bytes);
}

void write_gray16_png(const GrayImage& img, const std::string& path) {
    const size_t row_bytes = static_cast<size_t>(img.width) * 2;
    std::vector<png_byte> raw(row_bytes * img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const long q = std::lround(std::clamp(img.at(x, y), 0.0, 1.0) * 65535.0);
            raw[static_cast<size_t>(y) * row_bytes + 2 * x] = static_cast<png_byte>(q >> 8);
            raw[static_cast<size_t>(y) * row_bytes + 2 * x + 1] = static_cast<png_byte>(q & 0xFF);
        }
    }
    write_png(path, img.width, img.height, 16, PNG_COLOR_TYPE_GRAY, raw, row_bytes);
}

void write_rgb8_png(const RgbImage& img, const std::string& path) {
    const size_t row_bytes = static_cast<size_t>(img.width) * 3;
    std::vector<png_byte> raw(row_bytes * img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const Rgb& p = img.at(x, y);
            png_byte* out = &raw[static_cast<size_t>(y) * row_bytes + 3 * x];
            out[0] = quant8(p.r);
            out[1] = quant8(p.g);
            out[2] = quant8(p.b);
        }
    }
    write_png(path, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, raw, row_bytes);
}

void write_mask_png(const BinaryMask& mask, const std::string& path) {
    const size_t row_bytes = static_cast<size_t>(mask.width);
    std::vector<png_byte> raw(row_bytes * mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            raw[static_cast<size_t>(y) * row_bytes + x] = mask.at(x, y) ? 255 : 0;
    write_png(path, mask.width, mask.height, 8, PNG_COLOR_TYPE_GRAY, raw, row_bytes);
}

}  // namespace maskpipe
