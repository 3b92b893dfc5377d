#pragma once

#include "prt/brdf.hpp"
#include "prt/image.hpp"
#include "prt/math.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace prt {

struct Ray {
    Vec3 origin;
    Vec3 dir;
    double tmax = std::numeric_limits<double>::infinity();
};

struct Hit {
    double t = 0.0;
    std::uint32_t prim = 0;
    double b1 = 0.0;  // barycentric weight of vertex 1
    double b2 = 0.0;  // barycentric weight of vertex 2
};

struct Aabb {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

    void extend(const Vec3 &p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    void extend(const Aabb &b) {
        lo = lo.cwiseMin(b.lo);
        hi = hi.cwiseMax(b.hi);
    }
    bool valid() const { return (lo.array() <= hi.array()).all(); }
    bool contains(const Aabb &b) const { return (lo.array() <= b.lo.array()).all() && (b.hi.array() <= hi.array()).all(); }
    double surface_area() const;
    Vec3 diagonal() const { return valid() ? Vec3(hi - lo) : Vec3::Zero(); }
};

/// Material of a mesh part; the albedo may be textured by uv.
struct MaterialSlot {
    std::string name;
    Material base;
    std::optional<Image> albedo_texture;  // RGB, sampled nearest-texel with wrap

    Material at(const Vec2 &uv) const;
};

struct Triangle {
    std::array<std::uint32_t, 3> v{};
    std::uint32_t material = 0;
    bool camera_visible = true;  // false: occluder-only (shadow rays only)
};

/// Shading point on a surface.
struct SurfacePoint {
    Vec3 position;
    Vec3 normal;            // shading normal, unit, facing the viewer side
    Vec3 geometric_normal;  // unit, facing the viewer side
    Vec2 uv = Vec2::Zero();
    Material material;
    std::uint32_t prim = 0;
};

/// Triangle mesh with per-vertex shading normals and uvs, plus a BVH.
class TriScene {
  public:
    std::uint32_t add_material(MaterialSlot slot);
    std::uint32_t add_vertex(const Vec3 &position, const Vec3 &normal, const Vec2 &uv = Vec2::Zero());
    void add_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t material,
                      bool camera_visible = true);

    /// Validates indices and normals and builds the BVH. Throws ArgumentError
    /// for an empty scene or out-of-range indices.
    void build();
    bool built() const { return !nodes_.empty(); }

    std::size_t triangle_count() const { return triangles_.size(); }
    std::size_t vertex_count() const { return positions_.size(); }
    const Triangle &triangle(std::size_t i) const { return triangles_[i]; }
    const std::vector<MaterialSlot> &materials() const { return materials_; }
    const Aabb &bounds() const { return bounds_; }
    /// Self-intersection offset, 1e-4 of the bounding-box diagonal.
    double shadow_epsilon() const { return shadow_epsilon_; }

    /// Nearest hit through the BVH. Camera rays ignore occluder-only triangles.
    std::optional<Hit> intersect(const Ray &ray, bool camera_ray = false) const;
    /// Same contract as intersect(), by looping over all triangles.
    std::optional<Hit> intersect_brute(const Ray &ray, bool camera_ray = false) const;
    bool occluded(const Ray &ray) const;

    /// Interpolated surface data; normals are oriented toward -ray.dir.
    SurfacePoint surface_point(const Ray &ray, const Hit &hit) const;

    /// Checks that every BVH node bounds the triangles below it.
    bool validate_bvh() const;

  private:
    struct Node {
        Aabb bounds;
        std::uint32_t first = 0;  // first prim (leaf) or right child (interior)
        std::uint32_t count = 0;  // 0 for interior nodes
    };

    bool intersect_triangle(std::uint32_t prim, const Ray &ray, double tmax, Hit &hit) const;
    std::uint32_t build_node(std::vector<Aabb> &boxes, std::vector<Vec3> &centroids, std::uint32_t begin,
                             std::uint32_t end);
    bool validate_node(std::uint32_t node, Aabb &out) const;

    std::vector<Vec3> positions_;
    std::vector<Vec3> normals_;
    std::vector<Vec2> uvs_;
    std::vector<Triangle> triangles_;
    std::vector<bool> degenerate_;
    std::vector<MaterialSlot> materials_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> prim_order_;
    Aabb bounds_;
    double shadow_epsilon_ = 0.0;
};

/// Returns the scene with its BVH built.
TriScene build_bvh(TriScene scene);

/// Pinhole camera; pixel (x, y) maps to the ray through its center.
struct Camera {
    Vec3 origin = Vec3::Zero();
    Vec3 forward = Vec3::UnitY();
    Vec3 right = Vec3::UnitX();
    Vec3 up = Vec3::UnitZ();
    double vfov_deg = 40.0;
    int width = 64;
    int height = 64;

    /// Throws ArgumentError for fov outside (0, 180), empty images or a
    /// degenerate frame.
    static Camera look_at(const Vec3 &eye, const Vec3 &target, const Vec3 &up_hint, double vfov_deg, int width,
                          int height);
    void validate() const;
    Ray generate_ray(double px, double py) const;
    Ray pixel_ray(int x, int y) const { return generate_ray(x + 0.5, y + 0.5); }
};

/// 1 when the shadow ray from p (offset along the geometric normal) toward
/// wi escapes the scene, 0 otherwise.
int visibility(const TriScene &scene, const SurfacePoint &p, const Vec3 &wi);

struct PrimaryHits {
    int width = 0;
    int height = 0;
    std::vector<std::optional<SurfacePoint>> points;  // row-major

    const std::optional<SurfacePoint> &at(int x, int y) const { return points[static_cast<std::size_t>(y) * width + x]; }
};

PrimaryHits primary_hits(const TriScene &scene, const Camera &cam);

// Procedural geometry (z is up).
void add_uv_sphere(TriScene &scene, const Vec3 &center, double radius, int n_lat, int n_lon, std::uint32_t material);
/// Square in the plane z = height facing +z.
void add_ground_plane(TriScene &scene, double height, double half_extent, std::uint32_t material,
                      bool camera_visible = true);
/// Axis-aligned box with outward normals.
void add_box(TriScene &scene, const Vec3 &lo, const Vec3 &hi, std::uint32_t material);
void add_capsule(TriScene &scene, const Vec3 &a, const Vec3 &b, double radius, int segments, std::uint32_t material);
/// A stick-figure person of capsules, standing on z = 0, about 1.8 units tall.
/// Materials: skin, top, bottom.
void add_capsule_person(TriScene &scene, std::uint32_t skin, std::uint32_t top, std::uint32_t bottom);

/// Wavefront OBJ subset (v, vn, vt, f with polygon fan triangulation and
/// negative indices). Faces without normals get their geometric normal.
/// Throws LoadError / ParseError.
void load_obj(TriScene &scene, const std::filesystem::path &path, std::uint32_t material);

}  // namespace prt
