#include "prt/error.hpp"
#include "prt/geometry.hpp"

#include <cmath>

namespace prt {

void add_uv_sphere(TriScene &scene, const Vec3 &center, double radius, int n_lat, int n_lon,
                   std::uint32_t material) {
    if (n_lat < 2 || n_lon < 3 || !(radius > 0.0))
        throw ArgumentError("sphere tessellation too coarse or radius not positive");
    std::vector<std::uint32_t> idx;
    idx.reserve((n_lat + 1) * (n_lon + 1));
    for (int i = 0; i <= n_lat; ++i) {
        const double theta = kPi * i / n_lat;
        for (int j = 0; j <= n_lon; ++j) {
            // Seam column and poles share exact coordinates.
            const double phi = 2.0 * kPi * (j % n_lon) / n_lon;
            const Vec3 n = i == 0 ? Vec3::UnitZ() : i == n_lat ? -Vec3::UnitZ() : spherical_direction(theta, phi);
            idx.push_back(scene.add_vertex(center + radius * n, n,
                                           Vec2(static_cast<double>(j) / n_lon, 1.0 - static_cast<double>(i) / n_lat)));
        }
    }
    auto at = [&](int i, int j) { return idx[i * (n_lon + 1) + j]; };
    for (int i = 0; i < n_lat; ++i)
        for (int j = 0; j < n_lon; ++j) {
            // Counter-clockwise seen from outside.
            if (i > 0)
                scene.add_triangle(at(i, j), at(i + 1, j), at(i, j + 1), material);
            if (i + 1 < n_lat)
                scene.add_triangle(at(i, j + 1), at(i + 1, j), at(i + 1, j + 1), material);
        }
}

void add_ground_plane(TriScene &scene, double height, double half_extent, std::uint32_t material,
                      bool camera_visible) {
    const Vec3 n = Vec3::UnitZ();
    const double h = half_extent;
    const auto a = scene.add_vertex({-h, -h, height}, n, {0, 0});
    const auto b = scene.add_vertex({h, -h, height}, n, {1, 0});
    const auto c = scene.add_vertex({h, h, height}, n, {1, 1});
    const auto d = scene.add_vertex({-h, h, height}, n, {0, 1});
    scene.add_triangle(a, b, c, material, camera_visible);
    scene.add_triangle(a, c, d, material, camera_visible);
}

void add_box(TriScene &scene, const Vec3 &lo, const Vec3 &hi, std::uint32_t material) {
    // Each face: outward normal and four corners in counter-clockwise order.
    const Vec3 c[8] = {{lo.x(), lo.y(), lo.z()}, {hi.x(), lo.y(), lo.z()}, {hi.x(), hi.y(), lo.z()},
                       {lo.x(), hi.y(), lo.z()}, {lo.x(), lo.y(), hi.z()}, {hi.x(), lo.y(), hi.z()},
                       {hi.x(), hi.y(), hi.z()}, {lo.x(), hi.y(), hi.z()}};
    const int faces[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {2, 3, 7, 6}, {1, 2, 6, 5}, {0, 4, 7, 3}};
    for (const auto &f : faces) {
        const Vec3 n = (c[f[1]] - c[f[0]]).cross(c[f[2]] - c[f[0]]).normalized();
        std::uint32_t v[4];
        for (int k = 0; k < 4; ++k)
            v[k] = scene.add_vertex(c[f[k]], n);
        scene.add_triangle(v[0], v[1], v[2], material);
        scene.add_triangle(v[0], v[2], v[3], material);
    }
}

void add_capsule(TriScene &scene, const Vec3 &a, const Vec3 &b, double radius, int segments,
                 std::uint32_t material) {
    const Vec3 axis_full = b - a;
    const double length = axis_full.norm();
    if (!(length > 0.0) || !(radius > 0.0) || segments < 3)
        throw ArgumentError("degenerate capsule");
    const Vec3 axis = axis_full / length;
    Vec3 t, s;
    orthonormal_basis(axis, t, s);

    // Rings: lower hemisphere (around a), then upper hemisphere (around b).
    const int half = std::max(2, segments / 2);
    std::vector<std::uint32_t> idx;
    int rings = 0;
    for (int cap = 0; cap < 2; ++cap) {
        const Vec3 &center = cap == 0 ? a : b;
        for (int i = 0; i <= half; ++i) {
            // Polar angle from -axis (0) to equator (pi/2) for the lower cap,
            // from the equator to +axis for the upper cap.
            const double theta = cap == 0 ? (kPi / 2.0) * i / half : kPi / 2.0 + (kPi / 2.0) * i / half;
            const double along = -std::cos(theta);
            const double radial = std::sin(theta);
            for (int j = 0; j <= segments; ++j) {
                const double phi = 2.0 * kPi * j / segments;
                const Vec3 n = along * axis + radial * (std::cos(phi) * t + std::sin(phi) * s);
                idx.push_back(scene.add_vertex(center + radius * n, n));
            }
            ++rings;
        }
    }
    auto at = [&](int i, int j) { return idx[i * (segments + 1) + j]; };
    for (int i = 0; i + 1 < rings; ++i)
        for (int j = 0; j < segments; ++j) {
            scene.add_triangle(at(i, j), at(i, j + 1), at(i + 1, j + 1), material);
            scene.add_triangle(at(i, j), at(i + 1, j + 1), at(i + 1, j), material);
        }
}

void add_capsule_person(TriScene &scene, std::uint32_t skin, std::uint32_t top, std::uint32_t bottom) {
    const int seg = 16;
    // legs
    add_capsule(scene, {-0.12, 0.0, 0.1}, {-0.1, 0.0, 0.85}, 0.08, seg, bottom);
    add_capsule(scene, {0.12, 0.0, 0.1}, {0.1, 0.0, 0.85}, 0.08, seg, bottom);
    // torso
    add_capsule(scene, {0.0, 0.0, 0.95}, {0.0, 0.0, 1.35}, 0.2, seg, top);
    // arms
    add_capsule(scene, {-0.3, 0.0, 1.4}, {-0.42, 0.05, 0.9}, 0.06, seg, top);
    add_capsule(scene, {0.3, 0.0, 1.4}, {0.42, 0.05, 0.9}, 0.06, seg, top);
    // hands
    add_uv_sphere(scene, {-0.44, 0.05, 0.82}, 0.06, 8, 12, skin);
    add_uv_sphere(scene, {0.44, 0.05, 0.82}, 0.06, 8, 12, skin);
    // head
    add_uv_sphere(scene, {0.0, 0.0, 1.68}, 0.13, 16, 24, skin);
}

}  // namespace prt
