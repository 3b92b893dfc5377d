#include "prt/envlight.hpp"
#include "prt/error.hpp"
#include "prt/io.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace prt {

namespace {

class Reader {
  public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }
    bool done() const { return pos_ >= bytes_.size(); }

    /// Reads up to (excluding) '\n'; throws when the stream ends first.
    std::string line() {
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
            ++pos_;
        if (pos_ >= bytes_.size())
            throw ParseError("unterminated header line", start);
        std::string s(reinterpret_cast<const char *>(bytes_.data() + start), pos_ - start);
        ++pos_;
        if (!s.empty() && s.back() == '\r')
            s.pop_back();
        return s;
    }

    std::uint8_t byte(const char *what) {
        if (pos_ >= bytes_.size())
            throw ParseError(std::string("truncated scanline data (") + what + ")", pos_);
        return bytes_[pos_++];
    }

  private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

Vec3 decode_rgbe(const std::uint8_t *p) {
    if (p[3] == 0)
        return Vec3::Zero();
    // (mantissa / 256) * 2^(exponent - 128)
    const double f = std::ldexp(1.0, static_cast<int>(p[3]) - 136);
    return {p[0] * f, p[1] * f, p[2] * f};
}

void read_flat(Reader &r, std::vector<std::uint8_t> &scan, int width, const std::uint8_t *first4) {
    int start = 0;
    if (first4) {
        std::copy(first4, first4 + 4, scan.begin());
        start = 1;
    }
    for (int x = start; x < width; ++x)
        for (int k = 0; k < 4; ++k)
            scan[x * 4 + k] = r.byte("flat pixel");
}

void read_scanline(Reader &r, std::vector<std::uint8_t> &scan, int width) {
    std::uint8_t head[4];
    const std::size_t line_start = r.offset();
    for (auto &b : head)
        b = r.byte("scanline header");
    const bool marker = width < 32768 && head[0] == 2 && head[1] == 2 && (head[2] & 0x80) == 0;
    // Narrow images only take the RLE path on an exact width match.
    const bool rle = marker && (width >= 8 || ((head[2] << 8) | head[3]) == width);
    if (!rle) {
        read_flat(r, scan, width, head);
        return;
    }
    const int encoded_width = (head[2] << 8) | head[3];
    if (encoded_width != width)
        throw ParseError("RLE scanline width " + std::to_string(encoded_width) + " does not match image width " +
                             std::to_string(width),
                         line_start);
    // Four component planes, each run-length encoded separately.
    for (int comp = 0; comp < 4; ++comp) {
        int x = 0;
        while (x < width) {
            const std::size_t at = r.offset();
            std::uint8_t count = r.byte("RLE count");
            if (count > 128) {
                count -= 128;
                if (x + count > width)
                    throw ParseError("RLE run overflows scanline", at);
                const std::uint8_t value = r.byte("RLE run value");
                for (int k = 0; k < count; ++k)
                    scan[(x++) * 4 + comp] = value;
            } else {
                if (count == 0 || x + count > width)
                    throw ParseError("bad RLE literal count", at);
                for (int k = 0; k < count; ++k)
                    scan[(x++) * 4 + comp] = r.byte("RLE literal");
            }
        }
    }
}

}  // namespace

EnvironmentMap load_hdr(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    const std::string magic = r.line();
    if (magic != "#?RADIANCE" && magic != "#?RGBE")
        throw ParseError("missing #?RADIANCE / #?RGBE signature", 0);

    bool format_seen = false;
    while (true) {
        const std::size_t at = r.offset();
        const std::string l = r.line();
        if (l.empty())
            break;
        if (l.rfind("FORMAT=", 0) == 0) {
            if (l != "FORMAT=32-bit_rle_rgbe")
                throw ParseError("unsupported pixel format '" + l.substr(7) + "'", at);
            format_seen = true;
        }
        // other header variables (EXPOSURE, GAMMA, comments) are ignored
    }
    (void)format_seen;

    const std::size_t res_at = r.offset();
    const std::string res = r.line();
    char ya[3] = {0}, xa[3] = {0};
    int h = 0, w = 0;
    char trailing = 0;
    if (std::sscanf(res.c_str(), "%2s %d %2s %d %c", ya, &h, xa, &w, &trailing) != 4)
        throw ParseError("malformed resolution line '" + res + "'", res_at);
    if (std::string(ya) != "-Y" || std::string(xa) != "+X")
        throw ParseError("unsupported orientation '" + res + "' (only -Y H +X W)", res_at);
    if (w < 1 || h < 1 || w > 65536 || h > 65536)
        throw ParseError("invalid image size in '" + res + "'", res_at);

    Image img(w, h, 3);
    std::vector<std::uint8_t> scan(static_cast<std::size_t>(w) * 4);
    for (int y = 0; y < h; ++y) {
        read_scanline(r, scan, w);
        for (int x = 0; x < w; ++x)
            img.set_rgb(static_cast<std::size_t>(y) * w + x, decode_rgbe(&scan[x * 4]));
    }
    return EnvironmentMap(std::move(img));
}

EnvironmentMap load_hdr_file(const std::filesystem::path &path) {
    const auto bytes = read_file_bytes(path);
    try {
        return load_hdr(bytes);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.detail(), e.offset());
    }
}

}  // namespace prt
