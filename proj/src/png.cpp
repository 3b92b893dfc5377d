#include "prt/error.hpp"
#include "prt/io.hpp"

#include <png.h>

#include <cstring>

namespace prt {

namespace {

void on_png_error(png_structp png, png_const_charp msg) {
    auto *text = static_cast<std::string *>(png_get_error_ptr(png));
    if (text)
        *text = msg;
    png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

void append_bytes(png_structp png, png_bytep data, png_size_t len) {
    auto *out = static_cast<std::vector<std::uint8_t> *>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

void flush_noop(png_structp) {}

struct ReadSource {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

void read_bytes(png_structp png, png_bytep data, png_size_t len) {
    auto *src = static_cast<ReadSource *>(png_get_io_ptr(png));
    if (src->bytes.size() - src->pos < len)
        png_error(png, "truncated PNG stream");
    std::memcpy(data, src->bytes.data() + src->pos, len);
    src->pos += len;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Rgba8Image &img, int compression_level) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * 4)
        throw ArgumentError("RGBA image has inconsistent dimensions");
    std::string err;
    std::vector<std::uint8_t> out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, on_png_error, on_png_warning);
    if (!png)
        throw NumericError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw NumericError("PNG encode failed: " + err);
    }
    png_set_write_fn(png, &out, append_bytes, flush_noop);
    png_set_compression_level(png, compression_level);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(img.pixels.data() + static_cast<std::size_t>(y) * img.width * 4));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

void write_png_file(const std::filesystem::path &path, const Rgba8Image &img) {
    write_file_bytes(path, encode_png(img));
}

Rgba8Image decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw ParseError("not a PNG stream", 0);
    std::string err;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, on_png_error, on_png_warning);
    if (!png)
        throw NumericError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    ReadSource src{bytes, 0};
    Rgba8Image img;
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError("PNG decode failed: " + err, src.pos);
    }
    png_set_read_fn(png, &src, read_bytes);
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_gray_to_rgb(png);
    png_set_add_alpha(png, 0xff, PNG_FILLER_AFTER);
    png_read_update_info(png, info);
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 4);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * img.width * 4;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

}  // namespace prt
