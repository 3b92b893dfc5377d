#include "prt/geometry.hpp"

#include "prt/error.hpp"

#include <cmath>

namespace prt {

double Aabb::surface_area() const {
    if (!valid())
        return 0.0;
    const Vec3 d = hi - lo;
    return 2.0 * (d.x() * d.y() + d.y() * d.z() + d.z() * d.x());
}

Material MaterialSlot::at(const Vec2 &uv) const {
    if (!albedo_texture || albedo_texture->empty())
        return base;
    const Image &tex = *albedo_texture;
    const double u = uv.x() - std::floor(uv.x());
    const double v = uv.y() - std::floor(uv.y());
    const int x = std::min(tex.width() - 1, static_cast<int>(u * tex.width()));
    // v = 0 is the bottom row of the texture.
    const int y = std::min(tex.height() - 1, static_cast<int>((1.0 - v) * tex.height()));
    Material m = base;
    const Vec3 a = tex.rgb(static_cast<std::size_t>(y) * tex.width() + x);
    m.albedo = Vec3(clamp01(a.x()), clamp01(a.y()), clamp01(a.z()));
    return m;
}

std::uint32_t TriScene::add_material(MaterialSlot slot) {
    materials_.push_back(std::move(slot));
    return static_cast<std::uint32_t>(materials_.size() - 1);
}

std::uint32_t TriScene::add_vertex(const Vec3 &position, const Vec3 &normal, const Vec2 &uv) {
    positions_.push_back(position);
    const double n = normal.norm();
    normals_.push_back(n > 0.0 ? Vec3(normal / n) : Vec3::Zero());
    uvs_.push_back(uv);
    nodes_.clear();
    return static_cast<std::uint32_t>(positions_.size() - 1);
}

void TriScene::add_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t material,
                            bool camera_visible) {
    triangles_.push_back({{a, b, c}, material, camera_visible});
    nodes_.clear();
}

TriScene build_bvh(TriScene scene) {
    scene.build();
    return scene;
}

SurfacePoint TriScene::surface_point(const Ray &ray, const Hit &hit) const {
    const Triangle &tri = triangles_[hit.prim];
    const Vec3 &p0 = positions_[tri.v[0]];
    const Vec3 &p1 = positions_[tri.v[1]];
    const Vec3 &p2 = positions_[tri.v[2]];
    const double b0 = 1.0 - hit.b1 - hit.b2;

    SurfacePoint sp;
    sp.prim = hit.prim;
    sp.position = ray.origin + hit.t * ray.dir;
    Vec3 ng = (p1 - p0).cross(p2 - p0).normalized();
    Vec3 ns = b0 * normals_[tri.v[0]] + hit.b1 * normals_[tri.v[1]] + hit.b2 * normals_[tri.v[2]];
    const double ns_len = ns.norm();
    ns = ns_len > 1e-12 ? Vec3(ns / ns_len) : ng;
    if (ng.dot(ray.dir) > 0.0)
        ng = -ng;
    if (ns.dot(ng) < 0.0)
        ns = -ns;
    sp.geometric_normal = ng;
    sp.normal = ns;
    sp.uv = b0 * uvs_[tri.v[0]] + hit.b1 * uvs_[tri.v[1]] + hit.b2 * uvs_[tri.v[2]];
    sp.material = materials_.empty() ? Material{} : materials_[tri.material].at(sp.uv);
    return sp;
}

Camera Camera::look_at(const Vec3 &eye, const Vec3 &target, const Vec3 &up_hint, double vfov_deg, int width,
                       int height) {
    Camera cam;
    cam.origin = eye;
    const Vec3 f = target - eye;
    if (!(f.norm() > 0.0))
        throw ArgumentError("camera target coincides with eye");
    cam.forward = f.normalized();
    const Vec3 r = cam.forward.cross(up_hint);
    if (!(r.norm() > 1e-12))
        throw ArgumentError("camera up vector is parallel to the view direction");
    cam.right = r.normalized();
    cam.up = cam.right.cross(cam.forward);
    cam.vfov_deg = vfov_deg;
    cam.width = width;
    cam.height = height;
    cam.validate();
    return cam;
}

void Camera::validate() const {
    if (!(vfov_deg > 0.0 && vfov_deg < 180.0))
        throw ArgumentError("camera field of view must lie in (0, 180) degrees");
    if (width < 1 || height < 1)
        throw ArgumentError("camera image must be at least 1x1");
    const double ortho = std::abs(forward.dot(right)) + std::abs(forward.dot(up)) + std::abs(right.dot(up));
    if (ortho > 1e-6 || std::abs(forward.norm() - 1.0) > 1e-6 || std::abs(right.norm() - 1.0) > 1e-6 ||
        std::abs(up.norm() - 1.0) > 1e-6)
        throw ArgumentError("camera frame is not orthonormal");
}

Ray Camera::generate_ray(double px, double py) const {
    const double tan_half = std::tan(deg_to_rad(vfov_deg) * 0.5);
    const double aspect = static_cast<double>(width) / height;
    const double sx = (2.0 * px / width - 1.0) * tan_half * aspect;
    const double sy = (1.0 - 2.0 * py / height) * tan_half;
    return {origin, (forward + sx * right + sy * up).normalized()};
}

int visibility(const TriScene &scene, const SurfacePoint &p, const Vec3 &wi) {
    const double side = p.geometric_normal.dot(wi) >= 0.0 ? 1.0 : -1.0;
    const Ray shadow{p.position + side * scene.shadow_epsilon() * p.geometric_normal, wi};
    return scene.occluded(shadow) ? 0 : 1;
}

PrimaryHits primary_hits(const TriScene &scene, const Camera &cam) {
    cam.validate();
    PrimaryHits out;
    out.width = cam.width;
    out.height = cam.height;
    out.points.resize(static_cast<std::size_t>(cam.width) * cam.height);
    for (int y = 0; y < cam.height; ++y)
        for (int x = 0; x < cam.width; ++x) {
            const Ray ray = cam.pixel_ray(x, y);
            if (auto hit = scene.intersect(ray, true))
                out.points[static_cast<std::size_t>(y) * cam.width + x] = scene.surface_point(ray, *hit);
        }
    return out;
}

}  // namespace prt
