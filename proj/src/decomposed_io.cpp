#include "prt/error.hpp"
#include "prt/relight.hpp"

#include <cstdio>

namespace prt {

namespace {

std::string two_digits(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d", i);
    return buf;
}

const char *const kRgb[3] = {"r", "g", "b"};
const char *const kXyz[3] = {"x", "y", "z"};
const char *const kMaterial[3] = {"rough", "transp", "metal"};

void add_image_planes(ShcContainer &c, const Image &img, const std::string &prefix, const char *const *suffix) {
    std::vector<float> plane(c.plane_size());
    for (int ch = 0; ch < img.channels(); ++ch) {
        for (std::size_t p = 0; p < plane.size(); ++p)
            plane[p] = static_cast<float>(img.at(p, ch));
        c.add_plane(suffix ? prefix + "." + suffix[ch] : prefix, plane);
    }
}

void add_span_plane(ShcContainer &c, std::span<const double> values, const std::string &name) {
    std::vector<float> plane(values.begin(), values.end());
    c.add_plane(name, plane);
}

std::span<const float> require_plane(const ShcContainer &c, const std::string &name) {
    const int idx = c.find(name);
    if (idx < 0)
        throw LoadError("decomposed scene is missing plane '" + name + "'");
    return c.plane(idx);
}

void read_image_planes(const ShcContainer &c, Image &img, const std::string &prefix, const char *const *suffix) {
    for (int ch = 0; ch < img.channels(); ++ch) {
        const auto plane = require_plane(c, suffix ? prefix + "." + suffix[ch] : prefix);
        for (std::size_t p = 0; p < plane.size(); ++p)
            img.at(p, ch) = plane[p];
    }
}

}  // namespace

ShcContainer to_container(const DecomposedScene &scene) {
    scene.validate();
    ShcContainer c;
    c.width = static_cast<std::uint32_t>(scene.width());
    c.height = static_cast<std::uint32_t>(scene.height());
    add_image_planes(c, scene.albedo, "albedo", kRgb);
    add_image_planes(c, scene.mask, "mask", nullptr);
    add_image_planes(c, scene.normals, "normal", kXyz);
    add_image_planes(c, scene.material, "material", kMaterial);
    const int n = scene.degree().coeff_count();
    for (int i = 0; i < n; ++i)
        add_span_plane(c, scene.transport.plane(i), "transport." + two_digits(i));
    for (int ch = 0; ch < 3; ++ch)
        for (int i = 0; i < n; ++i)
            add_span_plane(c, scene.residual.plane(ch, i), std::string("residual.") + kRgb[ch] + "." + two_digits(i));
    return c;
}

DecomposedScene from_container(const ShcContainer &c) {
    if (c.width == 0 || c.height == 0)
        throw LoadError("decomposed scene has zero size");
    int transport_planes = 0;
    while (c.find("transport." + two_digits(transport_planes)) >= 0)
        ++transport_planes;
    if (transport_planes == 0)
        throw LoadError("decomposed scene is missing plane 'transport.00'");
    if (transport_planes != 9 && transport_planes != 25)
        throw LoadError("decomposed scene has " + std::to_string(transport_planes) +
                        " transport planes; expected 9 or 25");
    const ShDegree degree = ShDegree::from_coeff_count(transport_planes);
    DecomposedScene s(static_cast<int>(c.width), static_cast<int>(c.height), degree);
    read_image_planes(c, s.albedo, "albedo", kRgb);
    read_image_planes(c, s.mask, "mask", nullptr);
    read_image_planes(c, s.normals, "normal", kXyz);
    read_image_planes(c, s.material, "material", kMaterial);
    for (int i = 0; i < transport_planes; ++i) {
        const auto plane = c.plane(c.find("transport." + two_digits(i)));
        auto dst = s.transport.plane(i);
        std::copy(plane.begin(), plane.end(), dst.begin());
    }
    for (std::size_t p = 0; p < s.transport.pixel_count(); ++p)
        s.transport.set_valid(p, s.mask.at(p, 0) > 0.0);

    bool any_residual = false;
    for (int ch = 0; ch < 3 && !any_residual; ++ch)
        for (int i = 0; i < transport_planes && !any_residual; ++i)
            any_residual = c.find(std::string("residual.") + kRgb[ch] + "." + two_digits(i)) >= 0;
    if (!any_residual) {
        s.residual_missing = true;
    } else {
        for (int ch = 0; ch < 3; ++ch) {
            for (int i = 0; i < transport_planes; ++i) {
                const auto plane = require_plane(c, std::string("residual.") + kRgb[ch] + "." + two_digits(i));
                auto dst = s.residual.plane(ch, i);
                std::copy(plane.begin(), plane.end(), dst.begin());
            }
        }
    }
    try {
        s.validate();
    } catch (const ArgumentError &e) {
        throw LoadError(std::string("invalid decomposed scene: ") + e.what());
    }
    return s;
}

void save_decomposed(const DecomposedScene &scene, const std::filesystem::path &path) {
    write_shc_file(path, to_container(scene));
}

DecomposedScene load_decomposed(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path))
        throw LoadError("decomposed scene not found: " + path.string());
    try {
        return from_container(read_shc_file(path));
    } catch (const LoadError &e) {
        throw LoadError(path.string() + ": " + e.what());
    }
}

}  // namespace prt
