#pragma once

#include "prt/image.hpp"
#include "prt/sh.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace prt {

/// Lat-long HDR radiance map: u = phi / 2pi across columns, v = theta / pi
/// down rows (row 0 looks at +z).
class EnvironmentMap {
  public:
    EnvironmentMap() = default;
    /// Throws ArgumentError for a non-RGB, empty, negative or non-finite image.
    explicit EnvironmentMap(Image rgb);

    int width() const { return image_.width(); }
    int height() const { return image_.height(); }
    const Image &image() const { return image_; }
    /// True when width != 2 * height (allowed, but unusual for lat-long).
    bool unusual_aspect() const { return width() != 2 * height(); }

    Vec3 texel(int x, int y) const { return image_.rgb(static_cast<std::size_t>(y) * width() + x); }
    /// Nearest-texel radiance toward d (piecewise-constant map).
    Vec3 lookup(const Vec3 &d) const;
    std::size_t texel_index(const Vec3 &d) const;
    Vec3 texel_center_direction(int x, int y) const;
    /// Exact solid angle of a texel in row y.
    double texel_solid_angle(int y) const;

    EnvironmentMap scaled(double s) const;

  private:
    Image image_;
};

using LightCoeffs = ShVectorRgb;

/// Radiance RGBE decoder (`#?RADIANCE` / `#?RGBE`, `-Y H +X W`, flat and
/// new-style RLE scanlines). Throws ParseError naming the byte offset.
EnvironmentMap load_hdr(std::span<const std::uint8_t> bytes);
EnvironmentMap load_hdr_file(const std::filesystem::path &path);
/// Dispatches on extension: .hdr (Radiance) or .pfm.
EnvironmentMap load_environment(const std::filesystem::path &path);

/// Per-channel texel-quadrature projection with exact texel solid angles.
LightCoeffs project_env(const EnvironmentMap &env, ShDegree degree);

/// Coefficients (up to `degree`) of max(w . n, 0) / pi about n.
ShVector clamped_cosine_transport(const Vec3 &n, ShDegree degree);

/// Mean Lambertian shading of a white sphere: the average over 512
/// spherical-Fibonacci normals of mean_RGB(T_cos(n) . L).
double reference_radiance(const LightCoeffs &l);
inline constexpr int kReferenceRadianceSamples = 512;
inline constexpr double kDefaultNormalizationTarget = 0.8;

/// Scales l so that reference_radiance equals target. Throws
/// NormalizationError for black (or negative-mean) lights.
LightCoeffs normalize_env(const LightCoeffs &l, double target);
/// Scale factor normalize_env applies.
double normalization_scale(const LightCoeffs &l, double target);

LightCoeffs rotate_env(const LightCoeffs &l, const Rotation3 &r);

/// Rotates the map itself (pixel space): out(d) = env(r^-1 d), with
/// nearest-texel lookup at texel centers.
EnvironmentMap rotate_env_map(const EnvironmentMap &env, const Rotation3 &r);

/// Built-in test illuminations.
///   constant       value everywhere
///   clamped-cos    max(cos theta, 0)
///   sun-sky        sky gradient + small bright sun disc
///   two-lights     warm key light at -x, cool fill at +x (left/right asymmetric)
///   studio         soft overhead box light plus dim floor bounce
///   sunset         low orange sun, dim blue sky
EnvironmentMap make_procedural_env(const std::string &name, int width = 128, int height = 64, double value = 1.0);
bool is_procedural_env(const std::string &name);

}  // namespace prt
