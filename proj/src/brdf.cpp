#include "prt/brdf.hpp"

#include <algorithm>
#include <cmath>

namespace prt {

Material Material::make(const Vec3 &albedo, double roughness, double metallic, double transparency) {
    Material m;
    m.albedo = Vec3(clamp01(albedo.x()), clamp01(albedo.y()), clamp01(albedo.z()));
    m.roughness = clamp01(roughness);
    m.metallic = clamp01(metallic);
    m.transparency = clamp01(transparency);
    return m;
}

double oren_nayar_eval(double roughness, const Vec3 &wi, const Vec3 &wo, const Vec3 &n) {
    const double cos_i = wi.dot(n);
    const double cos_o = wo.dot(n);
    if (cos_i <= 0.0 || cos_o <= 0.0)
        return 0.0;
    const double sigma = clamp01(roughness) * (kPi / 2.0);
    const double s2 = sigma * sigma;
    const double a = 1.0 - 0.5 * s2 / (s2 + 0.33);
    const double b = 0.45 * s2 / (s2 + 0.09);
    if (b == 0.0)
        return a * kInvPi;

    const double sin_i = std::sqrt(std::max(0.0, 1.0 - cos_i * cos_i));
    const double sin_o = std::sqrt(std::max(0.0, 1.0 - cos_o * cos_o));
    double cos_dphi = 0.0;
    if (sin_i > 1e-12 && sin_o > 1e-12) {
        const Vec3 ti = (wi - cos_i * n) / sin_i;
        const Vec3 to = (wo - cos_o * n) / sin_o;
        cos_dphi = std::max(0.0, ti.dot(to));
    }
    // alpha = max(theta_i, theta_o), beta = min(...): sin(alpha) tan(beta).
    double sin_alpha, tan_beta;
    if (cos_i < cos_o) {
        sin_alpha = sin_i;
        tan_beta = sin_o / cos_o;
    } else {
        sin_alpha = sin_o;
        tan_beta = sin_i / cos_i;
    }
    return kInvPi * (a + b * cos_dphi * sin_alpha * tan_beta);
}

namespace {

double smith_lambda(double cos_theta, double alpha2) {
    const double c2 = cos_theta * cos_theta;
    const double tan2 = std::max(0.0, 1.0 - c2) / c2;
    return 0.5 * (-1.0 + std::sqrt(1.0 + alpha2 * tan2));
}

}  // namespace

double ggx_eval(double roughness, double metallic, const Vec3 &wi, const Vec3 &wo, const Vec3 &n) {
    const double cos_i = wi.dot(n);
    const double cos_o = wo.dot(n);
    if (cos_i <= 0.0 || cos_o <= 0.0)
        return 0.0;
    const double r = clamp01(roughness);
    const double alpha = r * r;
    if (alpha < kMinGgxAlpha)
        return 0.0;
    const Vec3 hsum = wi + wo;
    const double hlen = hsum.norm();
    if (hlen <= 0.0)
        return 0.0;
    const Vec3 h = hsum / hlen;
    const double alpha2 = alpha * alpha;
    const double cos_h = h.dot(n);
    const double denom = cos_h * cos_h * (alpha2 - 1.0) + 1.0;
    const double d = alpha2 / (kPi * denom * denom);
    const double g = 1.0 / (1.0 + smith_lambda(cos_i, alpha2) + smith_lambda(cos_o, alpha2));
    const double f0 = 0.04 + 0.96 * clamp01(metallic);
    const double f = f0 + (1.0 - f0) * std::pow(1.0 - std::clamp(wi.dot(h), 0.0, 1.0), 5.0);
    return d * g * f / (4.0 * cos_i * cos_o);
}

double material_eval(const Material &m, const Vec3 &wi, const Vec3 &wo, const Vec3 &n) {
    return (1.0 - m.metallic) * oren_nayar_eval(m.roughness, wi, wo, n) +
           ggx_eval(m.roughness, m.metallic, wi, wo, n);
}

}  // namespace prt
