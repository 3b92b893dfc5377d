#include "prt/brdf.hpp"
#include "prt/sampling.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace prt;

namespace {

const Vec3 kN = Vec3::UnitZ();

Vec3 upper(double theta, double phi) { return spherical_direction(theta, phi); }

double on_oracle_normal_incidence(double roughness) {
    const double sigma = roughness * kPi / 2.0;
    const double s2 = sigma * sigma;
    return (1.0 - 0.5 * s2 / (s2 + 0.33)) / kPi;
}

double ggx_normal_incidence_oracle(double roughness, double metallic) {
    const double a = roughness * roughness;
    const double d = 1.0 / (kPi * a * a);  // D(h = n) = 1 / (pi alpha^2)
    const double g = 1.0;                  // Lambda(0) = 0
    const double f = 0.04 + 0.96 * metallic;
    return d * g * f / 4.0;
}

double albedo_integral(const Material &m, const Vec3 &wo, int n, std::uint64_t seed) {
    Rng r(seed);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const Vec3 wi = uniform_sphere(r.uniform(), r.uniform());
        const double c = wi.dot(kN);
        if (c > 0.0)
            sum += material_eval(m, wi, wo, kN) * c;
    }
    return sum * kFourPi / n;
}

double oren_nayar_albedo(double roughness, const Vec3 &wo, int n, std::uint64_t seed) {
    Rng r(seed);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const Vec3 wi = uniform_sphere(r.uniform(), r.uniform());
        const double c = wi.dot(kN);
        if (c > 0.0)
            sum += oren_nayar_eval(roughness, wi, wo, kN) * c;
    }
    return sum * kFourPi / n;
}

/// GGX lobe albedo by sampling half vectors from D(h) cos(theta_h).
double ggx_albedo(double roughness, double metallic, const Vec3 &wo, int n, std::uint64_t seed) {
    const double a2 = std::pow(roughness, 4);
    Rng r(seed);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = r.uniform(), phi = 2.0 * kPi * r.uniform();
        const double cos_h = std::sqrt((1.0 - u) / (1.0 + (a2 - 1.0) * u));
        const double sin_h = std::sqrt(std::max(0.0, 1.0 - cos_h * cos_h));
        const Vec3 h(sin_h * std::cos(phi), sin_h * std::sin(phi), cos_h);
        const double oh = wo.dot(h);
        if (oh <= 0.0)
            continue;
        const Vec3 wi = 2.0 * oh * h - wo;
        if (wi.z() <= 0.0)
            continue;
        const double denom = cos_h * cos_h * (a2 - 1.0) + 1.0;
        const double pdf = a2 / (kPi * denom * denom) * cos_h / (4.0 * oh);
        sum += ggx_eval(roughness, metallic, wi, wo, kN) * wi.z() / pdf;
    }
    return sum / n;
}

}  // namespace

TEST(OrenNayar, LambertianLimit) {
    EXPECT_NEAR(oren_nayar_eval(0.0, upper(0.3, 1.0), upper(1.1, 2.0), kN), 0.3183099, 1e-7);
    EXPECT_DOUBLE_EQ(oren_nayar_eval(0.5, upper(2.0, 0.0), upper(0.3, 0.0), kN), 0.0);
    EXPECT_DOUBLE_EQ(oren_nayar_eval(0.5, upper(0.3, 0.0), upper(2.0, 0.0), kN), 0.0);
    EXPECT_NEAR(oren_nayar_eval(0.5, kN, kN, kN), on_oracle_normal_incidence(0.5), 1e-12);
}

TEST(Ggx, BelowHorizonAndNormalIncidence) {
    EXPECT_DOUBLE_EQ(ggx_eval(0.4, 0.0, upper(1.8, 0.0), kN, kN), 0.0);
    EXPECT_NEAR(ggx_eval(0.4, 0.0, kN, kN, kN), ggx_normal_incidence_oracle(0.4, 0.0), 1e-12);
    EXPECT_NEAR(ggx_eval(0.6, 1.0, kN, kN, kN), ggx_normal_incidence_oracle(0.6, 1.0), 1e-12);
}

TEST(Ggx, SharpensAsRoughnessDrops) {
    const Vec3 wo = upper(0.6, 0.4);
    const Vec3 wi = upper(0.6, 0.4 + kPi);  // mirror of wo about n
    const double a = ggx_eval(0.5, 0.0, wi, wo, kN);
    const double b = ggx_eval(0.3, 0.0, wi, wo, kN);
    const double c = ggx_eval(0.1, 0.0, wi, wo, kN);
    EXPECT_LT(a, b);
    EXPECT_LT(b, c);
}

TEST(Ggx, DeltaCutoff) {
    EXPECT_DOUBLE_EQ(ggx_eval(0.0, 0.0, kN, kN, kN), 0.0);
    EXPECT_DOUBLE_EQ(ggx_eval(0.009, 0.0, kN, kN, kN), 0.0);  // alpha = 8.1e-5 < 1e-4
    EXPECT_GT(ggx_eval(0.011, 0.0, kN, kN, kN), 0.0);
}

TEST(Ggx, Reciprocity) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> th(0.0, kPi / 2 - 0.01), ph(0.0, 2 * kPi), r(0.05, 1.0);
    for (int k = 0; k < 500; ++k) {
        const Vec3 wi = upper(th(rng), ph(rng)), wo = upper(th(rng), ph(rng));
        const double rough = r(rng), metal = r(rng);
        const double a = ggx_eval(rough, metal, wi, wo, kN), b = ggx_eval(rough, metal, wo, wi, kN);
        EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(a)));
    }
}

TEST(MaterialEval, Blend) {
    const Vec3 wi = upper(0.5, 0.2), wo = upper(0.9, 2.5);
    const Material lam = Material::make(Vec3::Ones(), 0.0, 0.0);
    EXPECT_GE(material_eval(lam, wi, wo, kN), kInvPi);
    const Material metal = Material::make(Vec3::Ones(), 0.3, 1.0);
    EXPECT_DOUBLE_EQ(material_eval(metal, wi, wo, kN), ggx_eval(0.3, 1.0, wi, wo, kN));
    const Material mix = Material::make(Vec3(0.2, 0.4, 0.6), 0.3, 0.5, 0.7);
    EXPECT_DOUBLE_EQ(material_eval(mix, wi, wo, kN),
                     0.5 * oren_nayar_eval(0.3, wi, wo, kN) + ggx_eval(0.3, 0.5, wi, wo, kN));
    const Material clamped = Material::make(Vec3(2.0, -1.0, 0.5), 1.5, -0.2, 3.0);
    EXPECT_EQ(clamped.albedo, Vec3(1.0, 0.0, 0.5));
    EXPECT_EQ(clamped.roughness, 1.0);
    EXPECT_EQ(clamped.metallic, 0.0);
    EXPECT_EQ(clamped.transparency, 1.0);
}

TEST(MaterialEval, WeakWhiteFurnacePerLobe) {
    for (int ri = 1; ri <= 10; ++ri)
        for (int ci = 1; ci <= 10; ++ci) {
            const double rough = ri / 10.0, cos_o = ci / 10.0;
            const Vec3 wo(std::sqrt(1.0 - cos_o * cos_o), 0.0, cos_o);
            EXPECT_LE(oren_nayar_albedo(rough, wo, 100000, 7), 1.05) << rough << " " << cos_o;
            for (double metal : {0.0, 1.0})
                EXPECT_LE(ggx_albedo(rough, metal, wo, 100000, 8), 1.05) << rough << " " << cos_o << " " << metal;
        }
}

TEST(MaterialEval, GgxImportanceEstimateMatchesUniform) {
    const Vec3 wo = upper(1.0, 0.0);
    const Material metal = Material::make(Vec3::Ones(), 0.7, 1.0);
    EXPECT_NEAR(ggx_albedo(0.7, 1.0, wo, 200000, 9), albedo_integral(metal, wo, 400000, 10), 0.01);
}

TEST(MaterialEval, LambertianAlbedoNearOne) {
    const double e = albedo_integral(Material::make(Vec3::Ones(), 0.0, 0.0), upper(0.4, 0.0), 100000, 8);
    EXPECT_NEAR(e, 1.0, 0.02);
}
