#include "prt/transport.hpp"

#include "prt/error.hpp"
#include "prt/parallel.hpp"

namespace prt {

TransportMode parse_transport_mode(const std::string &s) {
    if (s == "cos")
        return TransportMode::CosineOnly;
    if (s == "cosvis")
        return TransportMode::CosineVisibility;
    if (s == "full")
        return TransportMode::FullReflectance;
    throw ArgumentError("unknown transport mode '" + s + "' (expected cos, cosvis or full)");
}

std::string to_string(TransportMode m) {
    switch (m) {
    case TransportMode::CosineOnly:
        return "cos";
    case TransportMode::CosineVisibility:
        return "cosvis";
    case TransportMode::FullReflectance:
        return "full";
    }
    return "full";
}

TransportMap::TransportMap(int width, int height, ShDegree degree)
    : width_(width), height_(height), degree_(degree) {
    if (width <= 0 || height <= 0)
        throw ArgumentError("transport map needs positive dimensions");
    planes_.assign(pixel_count() * degree.coeff_count(), 0.0);
    valid_.assign(pixel_count(), 0);
}

ShVector TransportMap::at(std::size_t pixel) const {
    ShVector v(degree_);
    for (int i = 0; i < degree_.coeff_count(); ++i)
        v[i] = coeff(pixel, i);
    return v;
}

void TransportMap::set(std::size_t pixel, const ShVector &v) {
    if (v.degree() != degree_)
        throw ArgumentError("transport vector degree does not match the map");
    for (int i = 0; i < degree_.coeff_count(); ++i)
        coeff(pixel, i) = v[i];
    valid_[pixel] = 1;
}

TransportMap TransportMap::truncated(ShDegree degree) const {
    if (degree.n() > degree_.n())
        throw ArgumentError("cannot truncate transport to a higher degree");
    TransportMap out(width_, height_, degree);
    std::copy_n(planes_.begin(), out.planes_.size(), out.planes_.begin());
    out.valid_ = valid_;
    return out;
}

Vec3 clamp_view_direction(const Vec3 &wo, const Vec3 &n) {
    const double c = wo.dot(n);
    if (c > 0.0)
        return wo;
    Vec3 r = wo - 2.0 * c * n;
    if (r.dot(n) <= 1e-6)
        r = (r + 1e-3 * n).normalized();
    return r;
}

namespace {

void accumulate_point(const TriScene &scene, const SurfacePoint &p, const Vec3 &wo, TransportMode mode,
                      std::span<const SphereSample> samples, std::span<double> basis, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const ShDegree degree = ShDegree::from_coeff_count(out.size());
    for (const auto &s : samples) {
        const double cos_i = s.dir.dot(p.normal);
        if (cos_i <= 0.0)
            continue;
        double f = 1.0;
        if (mode == TransportMode::FullReflectance) {
            f = material_eval(p.material, s.dir, wo, p.normal);
            if (f <= 0.0)
                continue;
        }
        if (mode != TransportMode::CosineOnly && !visibility(scene, p, s.dir))
            continue;
        const double w = s.weight * f * cos_i;
        sh_eval_basis(degree, s.dir, basis);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += w * basis[i];
    }
}

SphereSampler make_sampler(SphereSampler::Kind kind, int samples) {
    if (samples < 1)
        throw ArgumentError("transport needs at least one sample");
    switch (kind) {
    case SphereSampler::Kind::Independent:
        return SphereSampler::independent(samples, 0);
    case SphereSampler::Kind::Stratified:
        return SphereSampler::stratified(samples, 0);
    case SphereSampler::Kind::LatLong:
        break;
    }
    throw ArgumentError("transport sampling must be independent or stratified");
}

}  // namespace

ShVector compute_transport_point(const TriScene &scene, const SurfacePoint &p, const Vec3 &wo, TransportMode mode,
                                 ShDegree degree, int samples, std::uint64_t seed, SphereSampler::Kind sampling) {
    const SphereSampler sampler = make_sampler(sampling, samples);
    std::vector<SphereSample> dirs;
    sampler.draw_into(seed, dirs);
    std::vector<double> basis(degree.coeff_count());
    ShVector t(degree);
    accumulate_point(scene, p, clamp_view_direction(wo, p.normal), mode, dirs, basis, t.coeffs());
    return t;
}

TransportMap compute_transport_map(const TriScene &scene, const Camera &cam, const TransportConfig &cfg) {
    cam.validate();
    const SphereSampler sampler = make_sampler(cfg.sampling, cfg.samples);
    const PrimaryHits hits = primary_hits(scene, cam);
    TransportMap map(cam.width, cam.height, cfg.degree);
    const int n = cfg.degree.coeff_count();
    parallel_for(
        map.pixel_count(), worker_count(cfg.workers),
        [&](std::size_t pixel) {
            const auto &hit = hits.points[pixel];
            if (!hit)
                return;
            thread_local std::vector<SphereSample> dirs;
            thread_local std::vector<double> basis;
            thread_local std::vector<double> acc;
            basis.resize(n);
            acc.resize(n);
            sampler.draw_into(derive_seed(cfg.seed, pixel), dirs);
            const int x = static_cast<int>(pixel % cam.width);
            const int y = static_cast<int>(pixel / cam.width);
            const Vec3 wo = -cam.pixel_ray(x, y).dir.normalized();
            accumulate_point(scene, *hit, clamp_view_direction(wo, hit->normal), cfg.mode, dirs, basis, acc);
            for (int i = 0; i < n; ++i)
                map.coeff(pixel, i) = acc[i];
            map.set_valid(pixel, true);
        },
        4);
    return map;
}

}  // namespace prt
