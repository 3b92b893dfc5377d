#pragma once

#include "prt/math.hpp"

namespace prt {

/// Surface reflectance parameters. All fields are clamped to [0, 1] on
/// construction through make().
struct Material {
    Vec3 albedo{1.0, 1.0, 1.0};
    double roughness = 0.5;
    double metallic = 0.0;
    double transparency = 0.0;

    static Material make(const Vec3 &albedo, double roughness, double metallic, double transparency = 0.0);
};

/// GGX alpha below which the specular lobe is a delta and evaluates to 0.
inline constexpr double kMinGgxAlpha = 1e-4;

/// White-albedo Oren-Nayar (A/B approximation), sigma = roughness * pi/2.
/// Returns 0 when either direction is below the horizon of n.
double oren_nayar_eval(double roughness, const Vec3 &wi, const Vec3 &wo, const Vec3 &n);

/// GGX microfacet lobe: alpha = roughness^2, height-correlated Smith
/// masking-shadowing, Schlick Fresnel with F0 = 0.04 + 0.96 * metallic.
double ggx_eval(double roughness, double metallic, const Vec3 &wi, const Vec3 &wo, const Vec3 &n);

/// White reflectance used for transport: (1 - metallic) * ON + GGX.
/// Transparency is coverage and does not enter here.
double material_eval(const Material &m, const Vec3 &wi, const Vec3 &wo, const Vec3 &n);

}  // namespace prt
