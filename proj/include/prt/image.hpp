#pragma once

#include "prt/math.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace prt {

/// Pixel-interleaved linear float image, row 0 at the top.
class Image {
  public:
    Image() = default;
    Image(int width, int height, int channels, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
    bool empty() const { return data_.empty(); }

    double &at(int x, int y, int c) { return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c]; }
    double at(int x, int y, int c) const { return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c]; }
    double &at(std::size_t pixel, int c) { return data_[pixel * channels_ + c]; }
    double at(std::size_t pixel, int c) const { return data_[pixel * channels_ + c]; }
    Vec3 rgb(std::size_t pixel) const;
    void set_rgb(std::size_t pixel, const Vec3 &v);

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    bool same_shape(const Image &o) const {
        return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
    }
    /// Rounds every value through IEEE single precision (storage precision of
    /// the on-disk formats).
    void quantize_to_float();
    friend bool operator==(const Image &, const Image &) = default;

  private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

/// 8-bit RGBA raster used for display output.
struct Rgba8Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major RGBA
};

}  // namespace prt
