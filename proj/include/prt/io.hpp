#pragma once

#include "prt/envlight.hpp"
#include "prt/image.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace prt {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path);
/// Writes atomically (temp file + rename) so readers never see partial data.
void write_file_bytes(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);

/// Plane-sequential multi-channel float container.
///
///   "SHC1" | width u32 | height u32 | channel_count u32
///   channel_count x (name_length u32 | UTF-8 bytes)
///   payload: f32, plane 0 (row-major) then plane 1, ...
///
/// All integers and floats little-endian.
struct ShcContainer {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::string> names;
    std::vector<float> payload;

    std::size_t plane_size() const { return static_cast<std::size_t>(width) * height; }
    /// Index of the named plane, or -1.
    int find(const std::string &name) const;
    std::span<const float> plane(std::size_t i) const { return {payload.data() + i * plane_size(), plane_size()}; }
    std::span<float> plane(std::size_t i) { return {payload.data() + i * plane_size(), plane_size()}; }
    /// Appends a plane; throws ArgumentError on duplicate name or size mismatch.
    void add_plane(const std::string &name, std::span<const float> values);
    friend bool operator==(const ShcContainer &, const ShcContainer &) = default;
};

/// Throws ArgumentError for an empty channel list, duplicate names or a
/// payload of the wrong length.
std::vector<std::uint8_t> write_shc(const ShcContainer &c);
/// Throws ParseError (bad magic, truncation, duplicate names) with the offset.
ShcContainer read_shc(std::span<const std::uint8_t> bytes);
void write_shc_file(const std::filesystem::path &path, const ShcContainer &c);
ShcContainer read_shc_file(const std::filesystem::path &path);

/// Portable float map. 1-channel images are written as `Pf`, 3-channel as
/// `PF`, little-endian (negative scale), rows bottom-to-top.
std::vector<std::uint8_t> encode_pfm(const Image &img);
/// Accepts either endianness per the sign of the scale.
Image decode_pfm(std::span<const std::uint8_t> bytes);
void write_pfm_file(const std::filesystem::path &path, const Image &img);
Image read_pfm_file(const std::filesystem::path &path);

std::vector<std::uint8_t> encode_png(const Rgba8Image &img, int compression_level = 1);
void write_png_file(const std::filesystem::path &path, const Rgba8Image &img);
/// Decodes an 8-bit RGBA/RGB PNG (used by tests and the eval command).
Rgba8Image decode_png(std::span<const std::uint8_t> bytes);

/// LightCoeffs as three `SH <N>` text blocks (R, G, B).
void write_light_file(const std::filesystem::path &path, const LightCoeffs &l);
LightCoeffs read_light_file(const std::filesystem::path &path);

}  // namespace prt
