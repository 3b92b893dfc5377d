#include "prt/relight.hpp"

#include "prt/error.hpp"

#include <algorithm>
#include <cmath>

namespace prt {

ResidualMap::ResidualMap(int width, int height, ShDegree degree) : width_(width), height_(height), degree_(degree) {
    if (width <= 0 || height <= 0)
        throw ArgumentError("residual map needs positive dimensions");
    data_.assign(3 * pixel_count() * degree.coeff_count(), 0.0);
}

ShVectorRgb ResidualMap::at(std::size_t pixel) const {
    ShVectorRgb v(degree_);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < degree_.coeff_count(); ++i)
            v[c][i] = coeff(pixel, c, i);
    return v;
}

void ResidualMap::set(std::size_t pixel, const ShVectorRgb &v) {
    if (v.degree() != degree_)
        throw ArgumentError("residual vector degree does not match the map");
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < degree_.coeff_count(); ++i)
            coeff(pixel, c, i) = v[c][i];
}

bool ResidualMap::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

DecomposedScene::DecomposedScene(int width, int height, ShDegree degree)
    : albedo(width, height, 3), mask(width, height, 1), normals(width, height, 3), material(width, height, 3),
      transport(width, height, degree), residual(width, height, degree) {}

void DecomposedScene::validate() const {
    const int w = width();
    const int h = height();
    auto check = [&](const Image &img, int channels, const char *name) {
        if (img.width() != w || img.height() != h || img.channels() != channels)
            throw ArgumentError(std::string("buffer '") + name + "' has inconsistent dimensions");
    };
    check(albedo, 3, "albedo");
    check(mask, 1, "mask");
    check(normals, 3, "normals");
    check(material, 3, "material");
    if (transport.width() != w || transport.height() != h)
        throw ArgumentError("transport map has inconsistent dimensions");
    if (residual.width() != w || residual.height() != h)
        throw ArgumentError("residual map has inconsistent dimensions");
    if (residual.degree() != transport.degree())
        throw ArgumentError("residual and transport degrees differ");
    for (double v : albedo.data())
        if (!(v >= 0.0 && v <= 1.0))
            throw ArgumentError("albedo outside [0, 1]");
    for (double v : mask.data())
        if (!(v >= 0.0 && v <= 1.0))
            throw ArgumentError("mask outside [0, 1]");
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < residual.degree().coeff_count(); ++i)
            for (double v : residual.plane(c, i))
                if (!std::isfinite(v))
                    throw ArgumentError("residual holds non-finite values");
}

namespace {

void require_degree(ShDegree expected, const LightCoeffs &l) {
    if (l.degree() != expected)
        throw ArgumentError("light degree " + std::to_string(l.degree().n()) + " does not match buffer degree " +
                            std::to_string(expected.n()));
}

}  // namespace

Image shade(const TransportMap &t, const LightCoeffs &l) {
    require_degree(t.degree(), l);
    Image out(t.width(), t.height(), 3);
    auto data = out.data();
    const std::size_t n = t.pixel_count();
    for (int i = 0; i < t.degree().coeff_count(); ++i) {
        const auto plane = t.plane(i);
        const double l0 = l[0][i], l1 = l[1][i], l2 = l[2][i];
        for (std::size_t p = 0; p < n; ++p) {
            const double v = plane[p];
            data[3 * p] += v * l0;
            data[3 * p + 1] += v * l1;
            data[3 * p + 2] += v * l2;
        }
    }
    for (std::size_t p = 0; p < n; ++p)
        if (!t.valid(p))
            out.set_rgb(p, Vec3::Zero());
    return out;
}

Image residual_image(const ResidualMap &e, const LightCoeffs &l) {
    require_degree(e.degree(), l);
    Image out(e.width(), e.height(), 3);
    auto data = out.data();
    const std::size_t n = e.pixel_count();
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < e.degree().coeff_count(); ++i) {
            const auto plane = e.plane(c, i);
            const double li = l[c][i];
            if (li == 0.0)
                continue;
            for (std::size_t p = 0; p < n; ++p)
                data[3 * p + c] += plane[p] * li;
        }
    }
    return out;
}

Image reconstruct(const DecomposedScene &scene, const LightCoeffs &l) {
    return term_image(scene, l, TermSelection{}, 1.0);
}

Image term_image(const DecomposedScene &scene, const LightCoeffs &l, const TermSelection &terms,
                 double residual_scale) {
    if (scene.transport.width() != scene.width() || scene.transport.height() != scene.height() ||
        scene.residual.degree() != scene.transport.degree())
        throw ArgumentError("decomposed buffers are inconsistent");
    Image out(scene.width(), scene.height(), 3);
    const std::size_t n = out.pixel_count();
    const bool residual_only = terms.residual && !terms.shading && !terms.albedo;
    if (residual_only) {
        Image e = residual_image(scene.residual, l);
        for (std::size_t p = 0; p < n; ++p)
            for (int c = 0; c < 3; ++c)
                out.at(p, c) = std::abs(e.at(p, c)) * residual_scale * scene.mask.at(p, 0);
        return out;
    }
    Image s;
    if (terms.shading)
        s = shade(scene.transport, l);
    Image e;
    if (terms.residual)
        e = residual_image(scene.residual, l);
    else
        require_degree(scene.degree(), l);
    for (std::size_t p = 0; p < n; ++p) {
        const double m = scene.mask.at(p, 0);
        for (int c = 0; c < 3; ++c) {
            double v = 0.0;
            if (terms.shading)
                v = terms.albedo ? scene.albedo.at(p, c) * s.at(p, c) : s.at(p, c);
            else if (terms.albedo)
                v = scene.albedo.at(p, c);
            if (terms.residual)
                v += e.at(p, c);
            out.at(p, c) = v * m;
        }
    }
    return out;
}

Rgba8Image to_display(const Image &linear, const Image &mask, const DisplayOptions &opts) {
    if (linear.channels() != 3)
        throw ArgumentError("display conversion needs an RGB image");
    if (!mask.empty() && (mask.width() != linear.width() || mask.height() != linear.height()))
        throw ArgumentError("mask does not match the image");
    if (!(opts.gamma > 0.0) || !std::isfinite(opts.gamma))
        throw ArgumentError("gamma must be positive");
    if (!std::isfinite(opts.exposure))
        throw ArgumentError("exposure must be finite");
    const double scale = std::exp2(opts.exposure);
    const double inv_gamma = 1.0 / opts.gamma;
    auto encode = [&](double v) {
        v = std::clamp(v * scale, 0.0, 1.0);
        if (inv_gamma != 1.0)
            v = std::pow(v, inv_gamma);
        return static_cast<std::uint8_t>(std::lround(v * 255.0));
    };
    Rgba8Image out{linear.width(), linear.height(), {}};
    out.pixels.resize(linear.pixel_count() * 4);
    for (std::size_t p = 0; p < linear.pixel_count(); ++p) {
        for (int c = 0; c < 3; ++c) {
            const double v = linear.at(p, c);
            out.pixels[4 * p + c] = std::isfinite(v) ? encode(v) : 0;
        }
        const double a = mask.empty() ? 1.0 : std::clamp(mask.at(p, 0), 0.0, 1.0);
        out.pixels[4 * p + 3] = static_cast<std::uint8_t>(std::lround(a * 255.0));
    }
    return out;
}

Rgba8Image relight(const DecomposedScene &scene, const LightCoeffs &light, const Rotation3 &rotation,
                   const DisplayOptions &opts) {
    return to_display(reconstruct(scene, rotate_env(light, rotation)), scene.mask, opts);
}

}  // namespace prt
