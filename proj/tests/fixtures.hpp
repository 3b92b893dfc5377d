#pragma once

#include "prt/envlight.hpp"
#include "prt/geometry.hpp"
#include "prt/oracle_pt.hpp"
#include "prt/relight.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fixtures {

using prt::Camera;
using prt::Material;
using prt::TriScene;
using prt::Vec3;

inline Material lambert(double albedo = 0.8) { return Material::make(Vec3::Constant(albedo), 0.0, 0.0); }

inline std::uint32_t add_mat(TriScene &s, const Material &m, const std::string &name = "m") {
    return s.add_material(prt::MaterialSlot{name, m, std::nullopt});
}

/// Unit sphere at the origin resting on the plane z = -1.
inline TriScene sphere_on_plane(const Material &sphere, const Material &plane, int segments = 48) {
    TriScene s;
    const auto a = add_mat(s, sphere, "sphere");
    const auto b = add_mat(s, plane, "plane");
    prt::add_uv_sphere(s, Vec3::Zero(), 1.0, segments, 2 * segments, a);
    prt::add_ground_plane(s, -1.0, 20.0, b);
    s.build();
    return s;
}

inline TriScene lone_sphere(const Material &m, int segments = 48) {
    TriScene s;
    prt::add_uv_sphere(s, Vec3::Zero(), 1.0, segments, 2 * segments, add_mat(s, m));
    s.build();
    return s;
}

/// Plane z = 0 facing +z; nothing else in the scene.
inline TriScene open_plane(const Material &m) {
    TriScene s;
    prt::add_ground_plane(s, 0.0, 1.0, add_mat(s, m));
    s.build();
    return s;
}

inline Camera sphere_on_plane_camera(int size) {
    return Camera::look_at({0.0, -4.5, 1.2}, {0.0, 0.0, -0.4}, Vec3::UnitZ(), 40.0, size, size);
}

inline Camera sphere_camera(int size) { return Camera::look_at({0.0, -3.2, 0.0}, Vec3::Zero(), Vec3::UnitZ(), 40.0, size, size); }

/// Looks straight down on open_plane(), all pixels on the plane.
inline Camera plane_camera(int size) {
    return Camera::look_at({0.0, 0.0, 2.0}, Vec3::Zero(), Vec3::UnitY(), 20.0, size, size);
}

/// Mean |a - b| over pixels with mask > 0.5 and all channels.
inline double masked_mean_abs(const prt::Image &a, const prt::Image &b, const prt::Image &mask) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t p = 0; p < a.pixel_count(); ++p) {
        if (!(mask.at(p, 0) > 0.5))
            continue;
        for (int c = 0; c < a.channels(); ++c)
            s += std::abs(a.at(p, c) - b.at(p, c));
        n += a.channels();
    }
    return n ? s / n : 0.0;
}

inline double masked_mean_sq(const prt::Image &a, const prt::Image &b, const prt::Image &mask) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t p = 0; p < a.pixel_count(); ++p) {
        if (!(mask.at(p, 0) > 0.5))
            continue;
        for (int c = 0; c < a.channels(); ++c)
            s += (a.at(p, c) - b.at(p, c)) * (a.at(p, c) - b.at(p, c));
        n += a.channels();
    }
    return n ? s / n : 0.0;
}

/// Real SH from std::sph_legendre (which includes the Condon-Shortley phase,
/// removed here): Y_lm = sqrt2 * K * P_l^|m| * {cos m phi, sin |m| phi}.
inline double sh_oracle(int l, int m, const Vec3 &d) {
    const double theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
    const double phi = std::atan2(d.y(), d.x());
    const int am = std::abs(m);
    const double sign = (am % 2) ? -1.0 : 1.0;
    const double p = sign * std::sph_legendre(l, am, theta);  // includes sqrt((2l+1)/4pi (l-m)!/(l+m)!)
    if (m == 0)
        return p;
    return std::sqrt(2.0) * p * (m > 0 ? std::cos(am * phi) : std::sin(am * phi));
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(prt::kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            const double dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        const double dp = n * (z * p0 - p1) / (z * z - 1.0);
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

/// Product quadrature over the upper hemisphere (z in [0, 1]) or the full
/// sphere: Gauss-Legendre in z, uniform in phi. Exact for polynomials of
/// moderate degree, so it resolves the clamped-cosine kink at the equator.
struct Quadrature {
    std::vector<Vec3> dirs;
    std::vector<double> weights;
};

inline Quadrature sphere_quadrature(int n_z, int n_phi, bool upper_only) {
    std::vector<double> x, w;
    gauss_legendre(n_z, x, w);
    Quadrature q;
    const double z0 = upper_only ? 0.0 : -1.0;
    const double half = upper_only ? 0.5 : 1.0;
    for (int i = 0; i < n_z; ++i) {
        const double z = upper_only ? 0.5 * (x[i] + 1.0) : x[i];
        (void)z0;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * prt::kPi * (j + 0.5) / n_phi;
            q.dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
            q.weights.push_back(w[i] * half * 2.0 * prt::kPi / n_phi);
        }
    }
    return q;
}

/// Minimal Radiance writer for tests: flat or new-style RLE scanlines.
inline std::vector<std::uint8_t> encode_hdr(const prt::Image &img, bool rle) {
    std::string header = "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y " + std::to_string(img.height()) + " +X " +
                         std::to_string(img.width()) + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    auto rgbe = [](const Vec3 &c, std::uint8_t *e) {
        const double v = c.maxCoeff();
        if (v < 1e-32) {
            e[0] = e[1] = e[2] = e[3] = 0;
            return;
        }
        int ex = 0;
        const double f = std::frexp(v, &ex) * 256.0 / v;
        for (int k = 0; k < 3; ++k)
            e[k] = static_cast<std::uint8_t>(c[k] * f);
        e[3] = static_cast<std::uint8_t>(ex + 128);
    };
    const int w = img.width();
    for (int y = 0; y < img.height(); ++y) {
        std::vector<std::uint8_t> row(4 * w);
        for (int x = 0; x < w; ++x)
            rgbe(img.rgb(static_cast<std::size_t>(y) * w + x), &row[4 * x]);
        if (!rle) {
            out.insert(out.end(), row.begin(), row.end());
            continue;
        }
        out.push_back(2);
        out.push_back(2);
        out.push_back(static_cast<std::uint8_t>(w >> 8));
        out.push_back(static_cast<std::uint8_t>(w & 0xff));
        for (int c = 0; c < 4; ++c) {
            int x = 0;
            while (x < w) {
                int run = 1;
                while (x + run < w && run < 127 && row[4 * (x + run) + c] == row[4 * x + c])
                    ++run;
                if (run >= 3) {
                    out.push_back(static_cast<std::uint8_t>(128 + run));
                    out.push_back(row[4 * x + c]);
                    x += run;
                    continue;
                }
                int lit = 0;
                while (x + lit < w && lit < 128) {
                    int r = 1;
                    while (x + lit + r < w && r < 3 && row[4 * (x + lit + r) + c] == row[4 * (x + lit) + c])
                        ++r;
                    if (r >= 3)
                        break;
                    ++lit;
                }
                out.push_back(static_cast<std::uint8_t>(lit));
                for (int k = 0; k < lit; ++k)
                    out.push_back(row[4 * (x + k) + c]);
                x += lit;
            }
        }
    }
    return out;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string &name) {
    const auto p = std::filesystem::temp_directory_path() / ("prt_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace fixtures
