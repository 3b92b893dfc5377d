#include "prt/oracle_pt.hpp"

#include "prt/error.hpp"
#include "prt/parallel.hpp"

#include <cmath>

namespace prt {

EnvSampling parse_env_sampling(const std::string &s) {
    if (s == "uniform")
        return EnvSampling::Uniform;
    if (s == "stratified")
        return EnvSampling::Stratified;
    if (s == "importance")
        return EnvSampling::Importance;
    throw ArgumentError("unknown PT sampling '" + s + "' (expected uniform, stratified or importance)");
}

std::string to_string(EnvSampling s) {
    switch (s) {
    case EnvSampling::Uniform:
        return "uniform";
    case EnvSampling::Stratified:
        return "stratified";
    case EnvSampling::Importance:
        return "importance";
    }
    return "uniform";
}

namespace {

double luminance(const Vec3 &c) { return 0.2126 * c.x() + 0.7152 * c.y() + 0.0722 * c.z(); }

/// Incident radiance plus the sampling strategy for it.
class LightModel {
  public:
    LightModel(const EnvironmentMap *env, std::optional<LightCoeffs> sh, EnvSampling sampling)
        : env_(env), sh_(std::move(sh)), sampling_(sampling) {
        if (sampling_ == EnvSampling::Importance) {
            if (!env_ || sh_)
                throw ArgumentError("importance sampling needs a raw environment map");
            std::vector<double> w(static_cast<std::size_t>(env_->width()) * env_->height());
            for (int y = 0; y < env_->height(); ++y)
                for (int x = 0; x < env_->width(); ++x)
                    w[static_cast<std::size_t>(y) * env_->width() + x] =
                        luminance(env_->texel(x, y)) * env_->texel_solid_angle(y);
            dist_ = Distribution1D(w);
        }
        if (sh_)
            basis_size_ = sh_->degree().coeff_count();
    }

    bool black() const { return sampling_ == EnvSampling::Importance && dist_.empty(); }

    Vec3 radiance(const Vec3 &d, std::vector<double> &basis) const {
        if (!sh_)
            return env_->lookup(d);
        basis.resize(basis_size_);
        sh_eval_basis(sh_->degree(), d, basis);
        Vec3 out = Vec3::Zero();
        for (int c = 0; c < 3; ++c) {
            const auto coeffs = (*sh_)[c].coeffs();
            double s = 0.0;
            for (int i = 0; i < basis_size_; ++i)
                s += coeffs[i] * basis[i];
            out[c] = s;
        }
        return out;
    }

    /// Fills dirs with spp directions and their weights (1 / (pdf * spp)).
    void draw(std::uint64_t seed, int spp, std::vector<SphereSample> &dirs) const {
        switch (sampling_) {
        case EnvSampling::Uniform:
            SphereSampler::independent(spp, seed).draw_into(seed, dirs);
            break;
        case EnvSampling::Stratified:
            SphereSampler::stratified(spp, seed).draw_into(seed, dirs);
            break;
        case EnvSampling::Importance: {
            dirs.resize(spp);
            Rng rng(seed);
            for (auto &s : dirs) {
                double pmf = 0.0;
                const std::size_t texel = dist_.sample(rng.uniform(), pmf);
                const int x = static_cast<int>(texel % env_->width());
                const int y = static_cast<int>(texel / env_->width());
                const double z0 = std::cos(kPi * y / env_->height());
                const double z1 = std::cos(kPi * (y + 1) / env_->height());
                const double z = z0 + (z1 - z0) * rng.uniform();
                const double phi = 2.0 * kPi * (x + rng.uniform()) / env_->width();
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                s.dir = Vec3(r * std::cos(phi), r * std::sin(phi), z);
                s.weight = env_->texel_solid_angle(y) / (pmf * spp);
            }
            break;
        }
        }
    }

  private:
    const EnvironmentMap *env_;
    std::optional<LightCoeffs> sh_;
    EnvSampling sampling_;
    Distribution1D dist_;
    int basis_size_ = 0;
};

/// Direct lighting at p toward wo (white lobe), estimated with dirs.
Vec3 direct(const TriScene &scene, const LightModel &light, const SurfacePoint &p, const Vec3 &wo,
            std::span<const SphereSample> dirs, std::vector<double> &basis) {
    Vec3 acc = Vec3::Zero();
    for (const auto &s : dirs) {
        const double cos_i = s.dir.dot(p.normal);
        if (cos_i <= 0.0)
            continue;
        const double f = material_eval(p.material, s.dir, wo, p.normal);
        if (f <= 0.0 || !visibility(scene, p, s.dir))
            continue;
        acc += (s.weight * f * cos_i) * light.radiance(s.dir, basis);
    }
    return acc;
}

Vec3 one_bounce(const TriScene &scene, const LightModel &light, const SurfacePoint &p, const Vec3 &wo, Rng &rng,
                std::vector<SphereSample> &scratch, std::vector<double> &basis) {
    const Vec3 wi = uniform_sphere(rng.uniform(), rng.uniform());
    const double cos_i = wi.dot(p.normal);
    if (cos_i <= 0.0)
        return Vec3::Zero();
    const double f = material_eval(p.material, wi, wo, p.normal);
    if (f <= 0.0)
        return Vec3::Zero();
    const double side = wi.dot(p.geometric_normal) >= 0.0 ? 1.0 : -1.0;
    const Ray ray{p.position + side * scene.shadow_epsilon() * p.geometric_normal, wi};
    const auto hit = scene.intersect(ray);
    if (!hit)
        return Vec3::Zero();
    const SurfacePoint q = scene.surface_point(ray, *hit);
    light.draw(mix_seed(static_cast<std::uint64_t>(rng.uniform() * 0x1p53)), 1, scratch);
    const Vec3 lq = q.material.albedo.cwiseProduct(direct(scene, light, q, -wi, scratch, basis)) *
                    (1.0 - q.material.transparency);
    return (f * cos_i / kUniformSpherePdf) * lq;
}

Image render(const TriScene &scene, const LightModel &light, const Camera &cam, const PtConfig &cfg) {
    cam.validate();
    if (cfg.spp < 1)
        throw ArgumentError("spp must be >= 1");
    if (cfg.max_bounces < 0 || cfg.max_bounces > 1)
        throw ArgumentError("max_bounces must be 0 or 1");
    Image out(cam.width, cam.height, 3);
    if (light.black())
        return out;
    const PrimaryHits hits = primary_hits(scene, cam);
    parallel_for(
        out.pixel_count(), worker_count(cfg.workers),
        [&](std::size_t pixel) {
            const auto &hit = hits.points[pixel];
            if (!hit)
                return;
            thread_local std::vector<SphereSample> dirs;
            thread_local std::vector<SphereSample> scratch;
            thread_local std::vector<double> basis;
            const std::uint64_t seed = derive_seed(cfg.seed, pixel);
            const int x = static_cast<int>(pixel % cam.width);
            const int y = static_cast<int>(pixel / cam.width);
            const Vec3 wo = clamp_view_direction(-cam.pixel_ray(x, y).dir.normalized(), hit->normal);
            light.draw(seed, cfg.spp, dirs);
            Vec3 l = direct(scene, light, *hit, wo, dirs, basis);
            if (cfg.max_bounces > 0) {
                Rng rng(derive_seed(seed, 0x5eed));
                Vec3 indirect = Vec3::Zero();
                for (int s = 0; s < cfg.spp; ++s)
                    indirect += one_bounce(scene, light, *hit, wo, rng, scratch, basis);
                l += indirect / cfg.spp;
            }
            const double mask = 1.0 - hit->material.transparency;
            out.set_rgb(pixel, mask * hit->material.albedo.cwiseProduct(l));
        },
        4);
    return out;
}

}  // namespace

Image render_pt(const TriScene &scene, const EnvironmentMap &env, const Camera &cam, const PtConfig &cfg) {
    if (cfg.band_limit_light)
        return render_pt(scene, project_env(env, *cfg.band_limit_light), cam, cfg);
    return render(scene, LightModel(&env, std::nullopt, cfg.sampling), cam, cfg);
}

Image render_pt(const TriScene &scene, const LightCoeffs &l, const Camera &cam, const PtConfig &cfg) {
    LightCoeffs used = l;
    if (cfg.band_limit_light && cfg.band_limit_light->n() < l.degree().n())
        used = l.resized(*cfg.band_limit_light);
    return render(scene, LightModel(nullptr, std::move(used), cfg.sampling), cam, cfg);
}

GBuffers render_buffers(const TriScene &scene, const Camera &cam) {
    cam.validate();
    const PrimaryHits hits = primary_hits(scene, cam);
    GBuffers g{Image(cam.width, cam.height, 3), Image(cam.width, cam.height, 3), Image(cam.width, cam.height, 1),
               Image(cam.width, cam.height, 3)};
    for (std::size_t p = 0; p < hits.points.size(); ++p) {
        const auto &hit = hits.points[p];
        if (!hit)
            continue;
        const Material &m = hit->material;
        g.albedo.set_rgb(p, m.albedo);
        g.normals.set_rgb(p, (hit->normal + Vec3::Ones()) * 0.5);
        g.mask.at(p, 0) = 1.0 - m.transparency;
        g.material.set_rgb(p, Vec3(m.roughness, m.transparency, m.metallic));
    }
    return g;
}

DecomposedScene render_decomposed(const TriScene &scene, const Camera &cam, const TransportConfig &tcfg) {
    GBuffers g = render_buffers(scene, cam);
    DecomposedScene s(cam.width, cam.height, tcfg.degree);
    s.albedo = std::move(g.albedo);
    s.normals = std::move(g.normals);
    s.mask = std::move(g.mask);
    s.material = std::move(g.material);
    s.transport = compute_transport_map(scene, cam, tcfg);
    for (std::size_t p = 0; p < s.transport.pixel_count(); ++p) {
        if (s.mask.at(p, 0) <= 0.0) {
            for (int i = 0; i < tcfg.degree.coeff_count(); ++i)
                s.transport.coeff(p, i) = 0.0;
            s.transport.set_valid(p, false);
        }
    }
    return s;
}

}  // namespace prt
