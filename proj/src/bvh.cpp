#include "prt/error.hpp"
#include "prt/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace prt {

namespace {

constexpr int kSahBins = 12;
constexpr std::uint32_t kMaxLeafSize = 4;

// Barycentric slack for rays through shared edges.
constexpr double kBaryEps = 1e-12;

bool hit_box(const Aabb &b, const Vec3 &origin, const Vec3 &inv_dir, double tmax, double &tnear) {
    double t0 = 0.0, t1 = tmax;
    for (int a = 0; a < 3; ++a) {
        if (std::isinf(inv_dir[a])) {
            // Ray parallel to this slab.
            if (origin[a] < b.lo[a] || origin[a] > b.hi[a])
                return false;
            continue;
        }
        double tlo = (b.lo[a] - origin[a]) * inv_dir[a];
        double thi = (b.hi[a] - origin[a]) * inv_dir[a];
        if (tlo > thi)
            std::swap(tlo, thi);
        if (tlo > t0)
            t0 = tlo;
        if (thi < t1)
            t1 = thi;
        if (t0 > t1 * (1.0 + 4e-16))
            return false;
    }
    tnear = t0;
    return true;
}

bool closer(double t, std::uint32_t prim, const Hit &best, bool have) {
    return !have || t < best.t || (t == best.t && prim < best.prim);
}

}  // namespace

void TriScene::build() {
    if (triangles_.empty())
        throw ArgumentError("cannot build a BVH for an empty scene");
    for (const Triangle &t : triangles_) {
        for (std::uint32_t v : t.v)
            if (v >= positions_.size())
                throw ArgumentError("triangle vertex index out of range");
        if (!materials_.empty() && t.material >= materials_.size())
            throw ArgumentError("triangle material index out of range");
    }
    if (materials_.empty())
        add_material({"default", Material{}, std::nullopt});

    const std::uint32_t n = static_cast<std::uint32_t>(triangles_.size());
    std::vector<Aabb> boxes(n);
    std::vector<Vec3> centroids(n);
    degenerate_.assign(n, false);
    bounds_ = Aabb{};
    for (std::uint32_t i = 0; i < n; ++i) {
        const Triangle &t = triangles_[i];
        for (std::uint32_t v : t.v)
            boxes[i].extend(positions_[v]);
        centroids[i] = 0.5 * (boxes[i].lo + boxes[i].hi);
        bounds_.extend(boxes[i]);
        const Vec3 e1 = positions_[t.v[1]] - positions_[t.v[0]];
        const Vec3 e2 = positions_[t.v[2]] - positions_[t.v[0]];
        degenerate_[i] = !(e1.cross(e2).squaredNorm() > 0.0);
    }
    shadow_epsilon_ = 1e-4 * bounds_.diagonal().norm();

    prim_order_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
        prim_order_[i] = i;
    nodes_.clear();
    nodes_.reserve(2 * n);
    build_node(boxes, centroids, 0, n);
}

std::uint32_t TriScene::build_node(std::vector<Aabb> &boxes, std::vector<Vec3> &centroids, std::uint32_t begin,
                                   std::uint32_t end) {
    const std::uint32_t index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    Aabb bounds, cbounds;
    for (std::uint32_t i = begin; i < end; ++i) {
        bounds.extend(boxes[prim_order_[i]]);
        cbounds.extend(centroids[prim_order_[i]]);
    }
    nodes_[index].bounds = bounds;
    const std::uint32_t count = end - begin;

    auto make_leaf = [&] {
        nodes_[index].first = begin;
        nodes_[index].count = count;
        return index;
    };
    if (count <= kMaxLeafSize)
        return make_leaf();

    const Vec3 extent = cbounds.hi - cbounds.lo;
    int axis = 0;
    if (extent.y() > extent[axis])
        axis = 1;
    if (extent.z() > extent[axis])
        axis = 2;
    if (!(extent[axis] > 0.0))
        return make_leaf();

    // Binned SAH along the widest centroid axis.
    std::array<Aabb, kSahBins> bin_box;
    std::array<std::uint32_t, kSahBins> bin_count{};
    auto bin_of = [&](std::uint32_t prim) {
        const double rel = (centroids[prim][axis] - cbounds.lo[axis]) / extent[axis];
        return std::min(kSahBins - 1, static_cast<int>(rel * kSahBins));
    };
    for (std::uint32_t i = begin; i < end; ++i) {
        const int b = bin_of(prim_order_[i]);
        bin_box[b].extend(boxes[prim_order_[i]]);
        ++bin_count[b];
    }
    double best_cost = std::numeric_limits<double>::infinity();
    int best_split = -1;
    for (int split = 1; split < kSahBins; ++split) {
        Aabb left, right;
        std::uint32_t nl = 0, nr = 0;
        for (int b = 0; b < split; ++b)
            if (bin_count[b]) {
                left.extend(bin_box[b]);
                nl += bin_count[b];
            }
        for (int b = split; b < kSahBins; ++b)
            if (bin_count[b]) {
                right.extend(bin_box[b]);
                nr += bin_count[b];
            }
        if (nl == 0 || nr == 0)
            continue;
        const double cost = left.surface_area() * nl + right.surface_area() * nr;
        if (cost < best_cost) {
            best_cost = cost;
            best_split = split;
        }
    }

    std::uint32_t mid;
    if (best_split < 0) {
        mid = begin + count / 2;
        std::nth_element(prim_order_.begin() + begin, prim_order_.begin() + mid, prim_order_.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) { return centroids[a][axis] < centroids[b][axis]; });
    } else {
        auto it = std::partition(prim_order_.begin() + begin, prim_order_.begin() + end,
                                 [&](std::uint32_t p) { return bin_of(p) < best_split; });
        mid = static_cast<std::uint32_t>(it - prim_order_.begin());
    }

    build_node(boxes, centroids, begin, mid);
    const std::uint32_t right = build_node(boxes, centroids, mid, end);
    nodes_[index].first = right;
    nodes_[index].count = 0;
    return index;
}

bool TriScene::intersect_triangle(std::uint32_t prim, const Ray &ray, double tmax, Hit &hit) const {
    if (degenerate_[prim])
        return false;
    const Triangle &tri = triangles_[prim];
    const Vec3 &p0 = positions_[tri.v[0]];
    const Vec3 e1 = positions_[tri.v[1]] - p0;
    const Vec3 e2 = positions_[tri.v[2]] - p0;
    const Vec3 pvec = ray.dir.cross(e2);
    const double det = e1.dot(pvec);
    if (det == 0.0 || !std::isfinite(det))
        return false;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = ray.origin - p0;
    const double u = tvec.dot(pvec) * inv_det;
    if (u < -kBaryEps || u > 1.0 + kBaryEps)
        return false;
    const Vec3 qvec = tvec.cross(e1);
    const double v = ray.dir.dot(qvec) * inv_det;
    if (v < -kBaryEps || u + v > 1.0 + kBaryEps)
        return false;
    const double t = e2.dot(qvec) * inv_det;
    if (!(t > 0.0) || t > tmax)
        return false;
    hit = {t, prim, u, v};
    return true;
}

std::optional<Hit> TriScene::intersect(const Ray &ray, bool camera_ray) const {
    if (!built())
        throw ArgumentError("scene BVH has not been built");
    const Vec3 inv_dir = ray.dir.cwiseInverse();
    Hit best;
    bool have = false;
    std::array<std::uint32_t, 128> stack;
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const std::uint32_t ni = stack[--sp];
        const Node &node = nodes_[ni];
        double tnear;
        const double tlimit = have ? best.t : ray.tmax;
        if (!hit_box(node.bounds, ray.origin, inv_dir, tlimit, tnear))
            continue;
        if (node.count > 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const std::uint32_t prim = prim_order_[i];
                if (camera_ray && !triangles_[prim].camera_visible)
                    continue;
                Hit h;
                if (intersect_triangle(prim, ray, have ? best.t : ray.tmax, h) && closer(h.t, prim, best, have)) {
                    best = h;
                    have = true;
                }
            }
        } else {
            const std::uint32_t left = ni + 1, right = node.first;
            double tl = 0.0, tr = 0.0;
            const bool hl = hit_box(nodes_[left].bounds, ray.origin, inv_dir, tlimit, tl);
            const bool hr = hit_box(nodes_[right].bounds, ray.origin, inv_dir, tlimit, tr);
            if (hl && hr) {
                // Push the farther child first so the nearer one is visited next.
                if (tl <= tr) {
                    stack[sp++] = right;
                    stack[sp++] = left;
                } else {
                    stack[sp++] = left;
                    stack[sp++] = right;
                }
            } else if (hl) {
                stack[sp++] = left;
            } else if (hr) {
                stack[sp++] = right;
            }
        }
    }
    if (!have)
        return std::nullopt;
    return best;
}

std::optional<Hit> TriScene::intersect_brute(const Ray &ray, bool camera_ray) const {
    Hit best;
    bool have = false;
    for (std::uint32_t prim = 0; prim < triangles_.size(); ++prim) {
        if (camera_ray && !triangles_[prim].camera_visible)
            continue;
        Hit h;
        if (intersect_triangle(prim, ray, have ? best.t : ray.tmax, h) && closer(h.t, prim, best, have)) {
            best = h;
            have = true;
        }
    }
    if (!have)
        return std::nullopt;
    return best;
}

bool TriScene::occluded(const Ray &ray) const {
    if (!built())
        throw ArgumentError("scene BVH has not been built");
    const Vec3 inv_dir = ray.dir.cwiseInverse();
    std::array<std::uint32_t, 128> stack;
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node &node = nodes_[stack[--sp]];
        const std::uint32_t ni = static_cast<std::uint32_t>(&node - nodes_.data());
        double tnear;
        if (!hit_box(node.bounds, ray.origin, inv_dir, ray.tmax, tnear))
            continue;
        if (node.count > 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                Hit h;
                if (intersect_triangle(prim_order_[i], ray, ray.tmax, h))
                    return true;
            }
        } else {
            stack[sp++] = node.first;
            stack[sp++] = ni + 1;
        }
    }
    return false;
}

bool TriScene::validate_node(std::uint32_t ni, Aabb &out) const {
    const Node &node = nodes_[ni];
    Aabb covered;
    if (node.count > 0) {
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
            for (std::uint32_t v : triangles_[prim_order_[i]].v)
                covered.extend(positions_[v]);
    } else {
        Aabb l, r;
        if (!validate_node(ni + 1, l) || !validate_node(node.first, r))
            return false;
        covered.extend(l);
        covered.extend(r);
    }
    out = covered;
    return node.bounds.contains(covered);
}

bool TriScene::validate_bvh() const {
    if (!built())
        return false;
    Aabb all;
    return validate_node(0, all);
}

}  // namespace prt
