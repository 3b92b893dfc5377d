#include "prt/error.hpp"
#include "prt/io.hpp"

#include <bit>
#include <cstring>
#include <set>

namespace prt {

namespace {

static_assert(std::endian::native == std::endian::little, "SHC I/O assumes a little-endian host");

constexpr char kMagic[4] = {'S', 'H', 'C', '1'};

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

class Cursor {
  public:
    explicit Cursor(std::span<const std::uint8_t> b) : bytes_(b) {}
    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

    std::uint32_t u32(const char *what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k)
            v |= static_cast<std::uint32_t>(bytes_[pos_ + k]) << (8 * k);
        pos_ += 4;
        return v;
    }
    std::span<const std::uint8_t> take(std::size_t n, const char *what) {
        need(n, what);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

  private:
    void need(std::size_t n, const char *what) const {
        if (remaining() < n)
            throw ParseError(std::string("truncated SHC container: ") + what, pos_);
    }
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

int ShcContainer::find(const std::string &name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name)
            return static_cast<int>(i);
    return -1;
}

void ShcContainer::add_plane(const std::string &name, std::span<const float> values) {
    if (find(name) >= 0)
        throw ArgumentError("duplicate SHC plane '" + name + "'");
    if (values.size() != plane_size())
        throw ArgumentError("SHC plane '" + name + "' has the wrong size");
    names.push_back(name);
    payload.insert(payload.end(), values.begin(), values.end());
}

std::vector<std::uint8_t> write_shc(const ShcContainer &c) {
    if (c.names.empty())
        throw ArgumentError("SHC container needs at least one channel");
    if (std::set<std::string>(c.names.begin(), c.names.end()).size() != c.names.size())
        throw ArgumentError("SHC channel names must be unique");
    if (c.payload.size() != c.plane_size() * c.names.size())
        throw ArgumentError("SHC payload length does not match width x height x channels");

    std::vector<std::uint8_t> out(kMagic, kMagic + 4);
    put_u32(out, c.width);
    put_u32(out, c.height);
    put_u32(out, static_cast<std::uint32_t>(c.names.size()));
    for (const auto &n : c.names) {
        put_u32(out, static_cast<std::uint32_t>(n.size()));
        out.insert(out.end(), n.begin(), n.end());
    }
    const std::size_t at = out.size();
    out.resize(at + c.payload.size() * 4);
    std::memcpy(out.data() + at, c.payload.data(), c.payload.size() * 4);
    return out;
}

ShcContainer read_shc(std::span<const std::uint8_t> bytes) {
    Cursor cur(bytes);
    const auto magic = cur.take(4, "magic");
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        throw ParseError("bad SHC magic (expected SHC1)", 0);
    ShcContainer c;
    c.width = cur.u32("width");
    c.height = cur.u32("height");
    const std::size_t count_at = cur.offset();
    const std::uint32_t count = cur.u32("channel count");
    if (count == 0)
        throw ParseError("SHC container has no channels", count_at);
    std::set<std::string> seen;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::size_t name_at = cur.offset();
        const std::uint32_t len = cur.u32("name length");
        const auto raw = cur.take(len, "channel name");
        std::string name(raw.begin(), raw.end());
        if (!seen.insert(name).second)
            throw ParseError("duplicate SHC channel name '" + name + "'", name_at);
        c.names.push_back(std::move(name));
    }
    const std::size_t values = c.plane_size() * count;
    if (values > cur.remaining() / 4)
        throw ParseError("truncated SHC payload: expected " + std::to_string(values * 4) + " bytes, found " +
                             std::to_string(cur.remaining()),
                         cur.offset());
    const std::size_t payload_at = cur.offset();
    const auto raw = cur.take(values * 4, "payload");
    if (cur.remaining() != 0)
        throw ParseError("trailing bytes after SHC payload", payload_at + values * 4);
    c.payload.resize(values);
    std::memcpy(c.payload.data(), raw.data(), values * 4);
    return c;
}

void write_shc_file(const std::filesystem::path &path, const ShcContainer &c) { write_file_bytes(path, write_shc(c)); }

ShcContainer read_shc_file(const std::filesystem::path &path) {
    const auto bytes = read_file_bytes(path);
    try {
        return read_shc(bytes);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.detail(), e.offset());
    }
}

}  // namespace prt
