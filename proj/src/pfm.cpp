#include "prt/error.hpp"
#include "prt/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

namespace prt {

namespace {

std::uint32_t byteswap32(std::uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0xff00u) | ((v << 8) & 0xff0000u) | (v << 24);
}

class HeaderReader {
  public:
    explicit HeaderReader(std::span<const std::uint8_t> b) : bytes_(b) {}
    std::size_t offset() const { return pos_; }

    std::string token() {
        while (pos_ < bytes_.size() && std::isspace(bytes_[pos_]))
            ++pos_;
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]))
            ++pos_;
        if (start == pos_)
            throw ParseError("truncated PFM header", start);
        return {reinterpret_cast<const char *>(bytes_.data() + start), pos_ - start};
    }
    void single_whitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
            throw ParseError("PFM header must end with a single whitespace byte", pos_);
        ++pos_;
    }

  private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

int parse_dim(const std::string &t, std::size_t at) {
    try {
        std::size_t used = 0;
        const long v = std::stol(t, &used);
        if (used != t.size() || v <= 0 || v > (1 << 20))
            throw ParseError("invalid PFM dimension '" + t + "'", at);
        return static_cast<int>(v);
    } catch (const std::logic_error &) {
        throw ParseError("invalid PFM dimension '" + t + "'", at);
    }
}

}  // namespace

std::vector<std::uint8_t> encode_pfm(const Image &img) {
    if (img.channels() != 1 && img.channels() != 3)
        throw ArgumentError("PFM supports 1 or 3 channels");
    if (img.empty())
        throw ArgumentError("cannot encode an empty image as PFM");
    const std::string header = std::string(img.channels() == 3 ? "PF" : "Pf") + "\n" + std::to_string(img.width()) +
                               " " + std::to_string(img.height()) + "\n-1.0\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const std::size_t row_values = static_cast<std::size_t>(img.width()) * img.channels();
    out.reserve(out.size() + row_values * img.height() * 4);
    for (int y = img.height() - 1; y >= 0; --y) {
        for (int x = 0; x < img.width(); ++x) {
            for (int c = 0; c < img.channels(); ++c) {
                auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(img.at(x, y, c)));
                if constexpr (std::endian::native == std::endian::big)
                    bits = byteswap32(bits);
                for (int k = 0; k < 4; ++k)
                    out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
            }
        }
    }
    return out;
}

Image decode_pfm(std::span<const std::uint8_t> bytes) {
    HeaderReader rd(bytes);
    const std::string magic = rd.token();
    int channels = 0;
    if (magic == "PF")
        channels = 3;
    else if (magic == "Pf")
        channels = 1;
    else
        throw ParseError("bad PFM magic '" + magic + "'", 0);
    std::size_t at = rd.offset();
    const int w = parse_dim(rd.token(), at);
    at = rd.offset();
    const int h = parse_dim(rd.token(), at);
    at = rd.offset();
    const std::string scale_tok = rd.token();
    double scale = 0;
    try {
        scale = std::stod(scale_tok);
    } catch (const std::logic_error &) {
        throw ParseError("invalid PFM scale '" + scale_tok + "'", at);
    }
    if (scale == 0 || !std::isfinite(scale))
        throw ParseError("invalid PFM scale '" + scale_tok + "'", at);
    rd.single_whitespace();
    const bool little = scale < 0;
    const std::size_t start = rd.offset();
    const std::size_t need = static_cast<std::size_t>(w) * h * channels * 4;
    if (bytes.size() - start < need)
        throw ParseError("truncated PFM payload", bytes.size());

    Image img(w, h, channels);
    const std::uint8_t *p = bytes.data() + start;
    for (int y = h - 1; y >= 0; --y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < channels; ++c, p += 4) {
                std::uint32_t bits = 0;
                if (little)
                    bits = p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
                else
                    bits = p[3] | (p[2] << 8) | (p[1] << 16) | (static_cast<std::uint32_t>(p[0]) << 24);
                img.at(x, y, c) = std::bit_cast<float>(bits);
            }
        }
    }
    return img;
}

void write_pfm_file(const std::filesystem::path &path, const Image &img) { write_file_bytes(path, encode_pfm(img)); }

Image read_pfm_file(const std::filesystem::path &path) {
    const auto bytes = read_file_bytes(path);
    try {
        return decode_pfm(bytes);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.detail(), e.offset());
    }
}

}  // namespace prt
