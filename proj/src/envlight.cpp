#include "prt/envlight.hpp"

#include "prt/error.hpp"
#include "prt/io.hpp"

#include <algorithm>
#include <cmath>

namespace prt {

EnvironmentMap::EnvironmentMap(Image rgb) : image_(std::move(rgb)) {
    if (image_.channels() != 3 || image_.width() < 1 || image_.height() < 1)
        throw ArgumentError("environment map must be a non-empty RGB image");
    for (double v : image_.data())
        if (!std::isfinite(v) || v < 0.0)
            throw ArgumentError("environment radiance must be finite and non-negative");
}

std::size_t EnvironmentMap::texel_index(const Vec3 &d) const {
    const double theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
    double phi = std::atan2(d.y(), d.x());
    if (phi < 0.0)
        phi += 2.0 * kPi;
    const int x = std::clamp(static_cast<int>(phi / (2.0 * kPi) * width()), 0, width() - 1);
    const int y = std::clamp(static_cast<int>(theta / kPi * height()), 0, height() - 1);
    return static_cast<std::size_t>(y) * width() + x;
}

Vec3 EnvironmentMap::lookup(const Vec3 &d) const { return image_.rgb(texel_index(d)); }

Vec3 EnvironmentMap::texel_center_direction(int x, int y) const {
    return spherical_direction(kPi * (y + 0.5) / height(), 2.0 * kPi * (x + 0.5) / width());
}

double EnvironmentMap::texel_solid_angle(int y) const {
    const double t0 = kPi * y / height();
    const double t1 = kPi * (y + 1) / height();
    return (std::cos(t0) - std::cos(t1)) * 2.0 * kPi / width();
}

EnvironmentMap EnvironmentMap::scaled(double s) const {
    Image img = image_;
    for (double &v : img.data())
        v *= s;
    return EnvironmentMap(std::move(img));
}

EnvironmentMap load_environment(const std::filesystem::path &path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".hdr")
        return load_hdr_file(path);
    if (ext == ".pfm") {
        Image img = read_pfm_file(path);
        if (img.channels() != 3)
            throw LoadError("environment PFM must be RGB: " + path.string());
        return EnvironmentMap(std::move(img));
    }
    throw LoadError("unsupported environment format: " + path.string());
}

LightCoeffs project_env(const EnvironmentMap &env, ShDegree degree) {
    // Four Gauss-Legendre nodes in cos(theta) per texel row.
    static constexpr double kNodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                         0.8611363115940526};
    static constexpr double kWeights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                           0.3478548451374538};
    const int count = degree.coeff_count();
    std::vector<double> acc(3 * count, 0.0);
    std::vector<double> y(count);
    const double dphi = 2.0 * kPi / env.width();
    for (int row = 0; row < env.height(); ++row) {
        const double z0 = std::cos(kPi * row / env.height());
        const double z1 = std::cos(kPi * (row + 1) / env.height());
        for (int col = 0; col < env.width(); ++col) {
            const Vec3 rad = env.texel(col, row);
            if (rad.isZero())
                continue;
            const double phi = dphi * (col + 0.5);
            for (int k = 0; k < 4; ++k) {
                const double z = 0.5 * (z0 + z1) + 0.5 * (z1 - z0) * kNodes[k];
                const double omega = 0.5 * (z0 - z1) * kWeights[k] * dphi;
                sh_eval_basis(degree, spherical_direction(std::acos(std::clamp(z, -1.0, 1.0)), phi), y);
                for (int c = 0; c < 3; ++c) {
                    const double w = omega * rad[c];
                    double *dst = &acc[c * count];
                    for (int i = 0; i < count; ++i)
                        dst[i] += w * y[i];
                }
            }
        }
    }
    auto channel = [&](int c) {
        return ShVector(std::vector<double>(acc.begin() + c * count, acc.begin() + (c + 1) * count));
    };
    return {channel(0), channel(1), channel(2)};
}

namespace {

/// Funk-Hecke coefficient of max(cos, 0) for band l, divided by pi.
double clamped_cosine_band(int l) {
    if (l == 0)
        return 1.0;
    if (l == 1)
        return 2.0 / 3.0;
    if (l % 2 == 1)
        return 0.0;
    // 2 (-1)^(l/2-1) / ((l+2)(l-1)) * l! / (2^l ((l/2)!)^2)
    double ratio = 1.0;  // l! / (2^l ((l/2)!)^2) = C(l, l/2) / 2^l
    for (int k = 1; k <= l / 2; ++k)
        ratio *= static_cast<double>(l / 2 + k) / k;
    ratio /= std::ldexp(1.0, l);
    const double sign = ((l / 2 - 1) % 2 == 0) ? 1.0 : -1.0;
    return 2.0 * sign / ((l + 2.0) * (l - 1.0)) * ratio;
}

}  // namespace

ShVector clamped_cosine_transport(const Vec3 &n, ShDegree degree) {
    ShVector out(degree);
    sh_eval_basis(degree, n, out.coeffs());
    for (int l = 0; l <= degree.n(); ++l) {
        const double a = clamped_cosine_band(l);
        for (int m = -l; m <= l; ++m)
            out.at(l, m) *= a;
    }
    return out;
}

double reference_radiance(const LightCoeffs &l) {
    static const std::vector<Vec3> normals = spherical_fibonacci(kReferenceRadianceSamples);
    double total = 0.0;
    for (const Vec3 &n : normals) {
        const ShVector t = clamped_cosine_transport(n, l.degree());
        total += (sh_dot(t, l[0]) + sh_dot(t, l[1]) + sh_dot(t, l[2])) / 3.0;
    }
    return total / static_cast<double>(normals.size());
}

double normalization_scale(const LightCoeffs &l, double target) {
    if (!std::isfinite(target) || target < 0.0)
        throw ArgumentError("normalization target must be finite and non-negative");
    const double ref = reference_radiance(l);
    if (!(ref > 0.0) || !std::isfinite(ref))
        throw NormalizationError("cannot normalize illumination with reference radiance " + std::to_string(ref));
    return target / ref;
}

LightCoeffs normalize_env(const LightCoeffs &l, double target) { return l * normalization_scale(l, target); }

LightCoeffs rotate_env(const LightCoeffs &l, const Rotation3 &r) { return sh_rotate(l, r); }

EnvironmentMap rotate_env_map(const EnvironmentMap &env, const Rotation3 &r) {
    const Rotation3 inv = r.inverse();
    Image out(env.width(), env.height(), 3);
    for (int y = 0; y < env.height(); ++y)
        for (int x = 0; x < env.width(); ++x)
            out.set_rgb(static_cast<std::size_t>(y) * env.width() + x,
                        env.lookup(inv * env.texel_center_direction(x, y)));
    return EnvironmentMap(std::move(out));
}

namespace {

double lobe(const Vec3 &d, const Vec3 &axis, double exponent) {
    const double c = d.dot(axis);
    return c > 0.0 ? std::pow(c, exponent) : 0.0;
}

Vec3 procedural_radiance(const std::string &name, const Vec3 &d, double value) {
    if (name == "constant")
        return Vec3::Constant(value);
    if (name == "clamped-cos")
        return Vec3::Constant(value * std::max(0.0, d.z()));
    if (name == "sun-sky") {
        const Vec3 sun = spherical_direction(deg_to_rad(35.0), deg_to_rad(60.0));
        const double up = std::max(0.0, d.z());
        Vec3 sky = d.z() >= 0.0 ? Vec3(0.35, 0.5, 0.9) * (0.4 + 0.6 * up) : Vec3(0.25, 0.22, 0.18) * 0.5;
        if (d.dot(sun) > std::cos(deg_to_rad(4.0)))
            sky += Vec3(60.0, 55.0, 45.0);
        return value * sky;
    }
    if (name == "two-lights") {
        const Vec3 key = Vec3(-1.0, 0.2, 0.5).normalized();
        const Vec3 fill = Vec3(1.0, -0.3, 0.2).normalized();
        return value * (Vec3(4.0, 2.6, 1.4) * lobe(d, key, 12.0) + Vec3(0.3, 0.45, 0.9) * lobe(d, fill, 4.0) +
                        Vec3::Constant(0.03));
    }
    if (name == "studio") {
        const Vec3 top = Vec3(0.1, -0.4, 1.0).normalized();
        Vec3 r = Vec3::Constant(0.05) + Vec3(2.5, 2.5, 2.4) * lobe(d, top, 20.0);
        if (d.z() < 0.0)
            r += Vec3(0.12, 0.1, 0.08);
        return value * r;
    }
    if (name == "sunset") {
        const Vec3 sun = spherical_direction(deg_to_rad(82.0), deg_to_rad(-30.0));
        Vec3 r = d.z() >= 0.0 ? Vec3(0.15, 0.2, 0.45) : Vec3(0.05, 0.04, 0.03);
        r += Vec3(1.2, 0.5, 0.15) * lobe(d, sun, 8.0);
        if (d.dot(sun) > std::cos(deg_to_rad(5.0)))
            r += Vec3(30.0, 14.0, 4.0);
        return value * r;
    }
    throw ArgumentError("unknown procedural environment '" + name + "'");
}

}  // namespace

bool is_procedural_env(const std::string &name) {
    for (const char *n : {"constant", "clamped-cos", "sun-sky", "two-lights", "studio", "sunset"})
        if (name == n)
            return true;
    return false;
}

EnvironmentMap make_procedural_env(const std::string &name, int width, int height, double value) {
    if (!is_procedural_env(name))
        throw ArgumentError("unknown procedural environment '" + name + "'");
    if (width < 1 || height < 1)
        throw ArgumentError("environment size must be positive");
    Image img(width, height, 3);
    // 2x2 supersampling so small features (sun discs) keep their energy.
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            Vec3 acc = Vec3::Zero();
            for (int sy = 0; sy < 2; ++sy)
                for (int sx = 0; sx < 2; ++sx) {
                    const double theta = kPi * (y + (sy + 0.5) / 2.0) / height;
                    const double phi = 2.0 * kPi * (x + (sx + 0.5) / 2.0) / width;
                    acc += procedural_radiance(name, spherical_direction(theta, phi), value);
                }
            img.set_rgb(static_cast<std::size_t>(y) * width + x, acc / 4.0);
        }
    return EnvironmentMap(std::move(img));
}

}  // namespace prt
