#include "fixtures.hpp"

#include "prt/error.hpp"
#include "prt/metrics.hpp"
#include "prt/oracle_pt.hpp"

#include <gtest/gtest.h>

using namespace prt;

namespace {

EnvironmentMap constant_env(double v) { return make_procedural_env("constant", 64, 32, v); }

}  // namespace

TEST(PtSampling, Parse) {
    EXPECT_EQ(parse_env_sampling("uniform"), EnvSampling::Uniform);
    EXPECT_EQ(parse_env_sampling("stratified"), EnvSampling::Stratified);
    EXPECT_EQ(parse_env_sampling("importance"), EnvSampling::Importance);
    EXPECT_EQ(to_string(EnvSampling::Importance), "importance");
    EXPECT_THROW(parse_env_sampling("bogus"), ArgumentError);
}

TEST(RenderPt, BlackEnvironmentIsBlack) {
    const TriScene s = fixtures::sphere_on_plane(fixtures::lambert(), fixtures::lambert(), 16);
    PtConfig cfg;
    cfg.spp = 16;
    cfg.max_bounces = 1;
    const Image img = render_pt(s, constant_env(0.0), fixtures::sphere_on_plane_camera(8), cfg);
    for (double v : img.data())
        EXPECT_EQ(v, 0.0);
}

TEST(RenderPt, FurnacePlaneWithinFourSigma) {
    const TriScene s = fixtures::open_plane(fixtures::lambert(1.0));
    PtConfig cfg;
    cfg.spp = 2048;
    cfg.seed = 3;
    const Image img = render_pt(s, constant_env(1.0), fixtures::plane_camera(8), cfg);
    // Per-sample estimator 4 max(cos, 0): variance 8/3 - 1.
    const double sigma = std::sqrt((8.0 / 3.0 - 1.0) / cfg.spp);
    for (double v : img.data())
        EXPECT_NEAR(v, 1.0, 4.0 * sigma);
    cfg.sampling = EnvSampling::Importance;
    const Image importance = render_pt(s, constant_env(1.0), fixtures::plane_camera(8), cfg);
    for (double v : importance.data())
        EXPECT_NEAR(v, 1.0, 4.0 * sigma);
}

TEST(RenderPt, ShLightRejectsImportanceSampling) {
    const TriScene s = fixtures::open_plane(fixtures::lambert(1.0));
    PtConfig cfg;
    cfg.sampling = EnvSampling::Importance;
    const LightCoeffs l = project_env(constant_env(1.0), ShDegree(4));
    EXPECT_THROW(render_pt(s, l, fixtures::plane_camera(4), cfg), ArgumentError);
}

TEST(RenderPt, BandLimitedLightMatchesPrt) {
    const TriScene s = fixtures::lone_sphere(fixtures::lambert(0.7), 32);
    const Camera cam = fixtures::sphere_camera(16);
    const LightCoeffs l = normalize_env(project_env(make_procedural_env("two-lights"), ShDegree(4)), 0.8);
    TransportConfig tc;
    tc.samples = 2048;
    const DecomposedScene d = render_decomposed(s, cam, tc);
    PtConfig pc;
    pc.spp = 1024;
    pc.sampling = EnvSampling::Stratified;
    const Image pt = render_pt(s, l, cam, pc);
    EXPECT_LT(fixtures::masked_mean_abs(reconstruct(d, l), pt, d.mask), 0.01);
    // The same light given as a map with band_limit_light set.
    pc.band_limit_light = ShDegree(4);
    const Image pt_map = render_pt(s, make_procedural_env("two-lights").scaled(normalization_scale(
                                          project_env(make_procedural_env("two-lights"), ShDegree(4)), 0.8)),
                                   cam, pc);
    EXPECT_LT(fixtures::masked_mean_abs(pt_map, pt, d.mask), 1e-9);
}

TEST(RenderPt, LinearInLight) {
    const TriScene s = fixtures::sphere_on_plane(fixtures::lambert(), fixtures::lambert(0.5), 16);
    const Camera cam = fixtures::sphere_on_plane_camera(8);
    const EnvironmentMap env = make_procedural_env("sun-sky", 64, 32);
    PtConfig cfg;
    cfg.spp = 32;
    cfg.seed = 5;
    cfg.max_bounces = 1;
    const Image a = render_pt(s, env, cam, cfg), b = render_pt(s, env.scaled(2.0), cam, cfg);
    for (std::size_t k = 0; k < a.data().size(); ++k)
        EXPECT_NEAR(b.data()[k], 2.0 * a.data()[k], 1e-12 * std::max(1.0, a.data()[k]));
}

TEST(RenderPt, DeterministicAcrossWorkers) {
    const TriScene s = fixtures::sphere_on_plane(fixtures::lambert(), fixtures::lambert(0.5), 16);
    const Camera cam = fixtures::sphere_on_plane_camera(8);
    PtConfig cfg;
    cfg.spp = 16;
    cfg.workers = 1;
    const Image a = render_pt(s, make_procedural_env("studio", 64, 32), cam, cfg);
    cfg.workers = 8;
    EXPECT_EQ(a, render_pt(s, make_procedural_env("studio", 64, 32), cam, cfg));
}

TEST(RenderPt, VarianceHalvesWhenSppDoubles) {
    const TriScene s = fixtures::sphere_on_plane(fixtures::lambert(), fixtures::lambert(0.5), 16);
    const Camera cam = fixtures::sphere_on_plane_camera(16);
    const EnvironmentMap env = make_procedural_env("sun-sky", 64, 32);
    auto variance = [&](int spp) {
        std::vector<Image> runs;
        for (int r = 0; r < 32; ++r) {
            PtConfig cfg;
            cfg.spp = spp;
            cfg.seed = 1000 + r + 100 * spp;
            runs.push_back(render_pt(s, env, cam, cfg));
        }
        double total = 0.0;
        const std::size_t n = runs[0].data().size();
        for (std::size_t k = 0; k < n; ++k) {
            double m = 0.0, m2 = 0.0;
            for (const auto &img : runs) {
                m += img.data()[k];
                m2 += img.data()[k] * img.data()[k];
            }
            m /= runs.size();
            total += m2 / runs.size() - m * m;
        }
        return total;
    };
    const double ratio = variance(16) / variance(32);
    EXPECT_GE(ratio, 1.6);
    EXPECT_LE(ratio, 2.4);
}

TEST(RenderPt, ImportanceAgreesWithUniform) {
    const TriScene s = fixtures::lone_sphere(fixtures::lambert(0.8), 24);
    const Camera cam = fixtures::sphere_camera(12);
    const EnvironmentMap env = make_procedural_env("sunset", 64, 32);
    PtConfig cfg;
    cfg.spp = 4096;
    cfg.sampling = EnvSampling::Stratified;
    const Image u = render_pt(s, env, cam, cfg);
    cfg.sampling = EnvSampling::Importance;
    const Image i = render_pt(s, env, cam, cfg);
    const GBuffers g = render_buffers(s, cam);
    EXPECT_LT(fixtures::masked_mean_abs(u, i, g.mask), 0.01);
}

TEST(RenderBuffers, MissesSphereMaterialAndNormals) {
    TriScene s;
    const Material m = Material::make(Vec3(0.2, 0.4, 0.6), 0.3, 0.7, 0.25);
    prt::add_uv_sphere(s, Vec3::Zero(), 1.0, 48, 96, fixtures::add_mat(s, m));
    s.build();
    const Camera cam = fixtures::sphere_camera(17);
    const GBuffers g = render_buffers(s, cam);
    EXPECT_EQ(g.mask.at(0, 0), 0.0);
    for (int c = 0; c < 3; ++c) {
        EXPECT_EQ(g.albedo.at(0, 0, c), 0.0);
        EXPECT_EQ(g.normals.at(0, 0, c), 0.0);
        EXPECT_EQ(g.material.at(0, 0, c), 0.0);
    }
    for (std::size_t p = 0; p < g.mask.pixel_count(); ++p) {
        if (g.mask.at(p, 0) == 0.0)
            continue;
        EXPECT_DOUBLE_EQ(g.mask.at(p, 0), 0.75);
        EXPECT_EQ(g.material.rgb(p), Vec3(0.3, 0.25, 0.7));
        EXPECT_EQ(g.albedo.rgb(p), Vec3(0.2, 0.4, 0.6));
    }
    const Vec3 n = 2.0 * g.normals.rgb(8 * 17 + 8) - Vec3::Ones();
    EXPECT_NEAR((0.5 * (n + Vec3::Ones()) - 0.5 * (Vec3(0, -1, 0) + Vec3::Ones())).norm(), 0.0, 1e-2);
}

TEST(RenderDecomposed, TransportOnlyWhereMasked) {
    const TriScene s = fixtures::lone_sphere(fixtures::lambert(), 16);
    TransportConfig tc;
    tc.samples = 32;
    const DecomposedScene d = render_decomposed(s, fixtures::sphere_camera(8), tc);
    EXPECT_NO_THROW(d.validate());
    EXPECT_TRUE(d.residual.is_zero());
    for (std::size_t p = 0; p < d.mask.pixel_count(); ++p) {
        EXPECT_EQ(d.transport.valid(p), d.mask.at(p, 0) > 0.0);
        if (d.mask.at(p, 0) == 0.0)
            for (int i = 0; i < 25; ++i)
                EXPECT_EQ(d.transport.coeff(p, i), 0.0);
    }
}
