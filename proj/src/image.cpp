#include "prt/image.hpp"

#include "prt/error.hpp"

namespace prt {

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
    if (width < 0 || height < 0 || channels < 1)
        throw ArgumentError("invalid image dimensions");
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Vec3 Image::rgb(std::size_t pixel) const {
    const double *p = &data_[pixel * channels_];
    return channels_ >= 3 ? Vec3(p[0], p[1], p[2]) : Vec3(p[0], p[0], p[0]);
}

void Image::set_rgb(std::size_t pixel, const Vec3 &v) {
    double *p = &data_[pixel * channels_];
    for (int c = 0; c < channels_ && c < 3; ++c)
        p[c] = v[c];
}

void Image::quantize_to_float() {
    for (double &v : data_)
        v = static_cast<float>(v);
}

}  // namespace prt
