#include "fixtures.hpp"

#include "prt/error.hpp"
#include "prt/relight.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace prt;

namespace {

DecomposedScene random_scene(int w, int h, std::uint64_t seed, bool residual = true) {
    DecomposedScene s(w, h, ShDegree(4));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0), c(-0.3, 0.3);
    for (std::size_t p = 0; p < s.albedo.pixel_count(); ++p) {
        const bool on = (p % 5) != 0;
        s.mask.at(p, 0) = on ? 1.0 : 0.0;
        s.albedo.set_rgb(p, Vec3(u(rng), u(rng), u(rng)));
        if (!on)
            continue;
        for (int i = 0; i < 25; ++i)
            s.transport.coeff(p, i) = c(rng);
        s.transport.set_valid(p, true);
        if (residual)
            for (int ch = 0; ch < 3; ++ch)
                for (int i = 0; i < 25; ++i)
                    s.residual.coeff(p, ch, i) = 0.1 * c(rng);
    }
    return s;
}

LightCoeffs light(const char *name) { return normalize_env(project_env(make_procedural_env(name, 64, 32), ShDegree(4)), 0.8); }

double bright_centroid_x(const Image &img) {
    double sum = 0.0, wsum = 0.0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const double v = img.at(x, y, 0) + img.at(x, y, 1) + img.at(x, y, 2);
            sum += v * (x + 0.5 - 0.5 * img.width());
            wsum += v;
        }
    return sum / wsum;
}

}  // namespace

TEST(Shade, ZeroLightAndLinearity) {
    const DecomposedScene s = random_scene(6, 5, 1);
    const Image zero = shade(s.transport, LightCoeffs(ShDegree(4)));
    for (double v : zero.data())
        EXPECT_EQ(v, 0.0);
    const LightCoeffs l = light("sun-sky");
    const Image a = shade(s.transport, l), b = shade(s.transport, l * 2.0);
    for (std::size_t k = 0; k < a.data().size(); ++k)
        EXPECT_EQ(b.data()[k], 2.0 * a.data()[k]);
    EXPECT_THROW(shade(s.transport, LightCoeffs(ShDegree(2))), ArgumentError);
}

TEST(Shade, FurnacePlane) {
    const TriScene scene = fixtures::open_plane(fixtures::lambert(1.0));
    TransportConfig tc;
    tc.samples = 4096;
    const DecomposedScene d = render_decomposed(scene, fixtures::plane_camera(8), tc);
    const Image s = shade(d.transport, project_env(make_procedural_env("constant", 64, 32), ShDegree(4)));
    for (double v : s.data())
        EXPECT_NEAR(v, 1.0, 0.01);
}

TEST(ResidualImage, ZeroAndDefinitional) {
    DecomposedScene s = random_scene(6, 5, 2, false);
    const LightCoeffs l = light("studio");
    const Image e = residual_image(s.residual, l);
    for (double v : e.data())
        EXPECT_EQ(v, 0.0);
    for (std::size_t p = 0; p < s.albedo.pixel_count(); ++p)
        for (int c = 0; c < 3; ++c)
            for (int i = 0; i < 25; ++i)
                s.residual.coeff(p, c, i) = s.transport.coeff(p, i);
    EXPECT_EQ(residual_image(s.residual, l), shade(s.transport, l));
}

TEST(Reconstruct, MatchesPerPixelOracle) {
    const DecomposedScene s = random_scene(7, 4, 3);
    const LightCoeffs l = light("two-lights");
    const Image r = reconstruct(s, l);
    for (std::size_t p = 0; p < s.albedo.pixel_count(); ++p)
        for (int c = 0; c < 3; ++c) {
            double sh = 0.0, e = 0.0;
            for (int i = 0; i < 25; ++i) {
                sh += s.transport.coeff(p, i) * l[c][i];
                e += s.residual.coeff(p, c, i) * l[c][i];
            }
            const double expect = (s.albedo.at(p, c) * sh + e) * s.mask.at(p, 0);
            EXPECT_NEAR(r.at(p, c), expect, 1e-12);
        }
}

TEST(Reconstruct, DegenerateCases) {
    DecomposedScene s = random_scene(5, 5, 4, false);
    const LightCoeffs l = light("sunset");
    const Image r = reconstruct(s, l), sh = shade(s.transport, l);
    for (std::size_t p = 0; p < s.albedo.pixel_count(); ++p)
        for (int c = 0; c < 3; ++c)
            EXPECT_DOUBLE_EQ(r.at(p, c), s.albedo.at(p, c) * sh.at(p, c) * s.mask.at(p, 0));
    for (std::size_t p = 0; p < s.albedo.pixel_count(); ++p)
        s.albedo.set_rgb(p, Vec3::Ones());
    const Image r1 = reconstruct(s, l);
    for (std::size_t p = 0; p < s.albedo.pixel_count(); ++p)
        for (int c = 0; c < 3; ++c)
            EXPECT_DOUBLE_EQ(r1.at(p, c), sh.at(p, c) * s.mask.at(p, 0));
}

TEST(Reconstruct, LinearAndMaskIdempotent) {
    const DecomposedScene s = random_scene(6, 6, 5);
    const LightCoeffs l = light("studio");
    const Image a = reconstruct(s, l), b = reconstruct(s, l * 3.0);
    for (std::size_t k = 0; k < a.data().size(); ++k)
        EXPECT_NEAR(b.data()[k], 3.0 * a.data()[k], 1e-12);
    TermSelection terms[] = {{true, true, true}, {false, true, false}, {true, false, false}, {false, false, true}};
    for (const auto &t : terms) {
        const Image img = term_image(s, l, t);
        const Rgba8Image disp = to_display(img, s.mask, {});
        for (std::size_t p = 0; p < img.pixel_count(); ++p) {
            if (s.mask.at(p, 0) != 0.0)
                continue;
            for (int c = 0; c < 3; ++c) {
                EXPECT_EQ(img.at(p, c), 0.0);
                EXPECT_EQ(disp.pixels[4 * p + c], 0);
            }
            EXPECT_EQ(disp.pixels[4 * p + 3], 0);
        }
    }
}

TEST(TermImage, Selections) {
    const DecomposedScene s = random_scene(5, 4, 6);
    const LightCoeffs l = light("sun-sky");
    const Image sh = shade(s.transport, l), e = residual_image(s.residual, l);
    const Image full = term_image(s, l, {});
    const Image rec = reconstruct(s, l);
    for (std::size_t k = 0; k < full.data().size(); ++k)
        EXPECT_NEAR(full.data()[k], rec.data()[k], 1e-15);
    const Image shading = term_image(s, l, {false, true, false});
    const Image albedo = term_image(s, l, {true, false, false});
    const Image res = term_image(s, l, {false, false, true}, 10.0);
    for (std::size_t p = 0; p < s.albedo.pixel_count(); ++p)
        for (int c = 0; c < 3; ++c) {
            const double m = s.mask.at(p, 0);
            EXPECT_NEAR(shading.at(p, c), sh.at(p, c) * m, 1e-15);
            EXPECT_NEAR(albedo.at(p, c), s.albedo.at(p, c) * m, 1e-15);
            EXPECT_NEAR(res.at(p, c), std::abs(e.at(p, c)) * 10.0 * m, 1e-13);
        }
    DecomposedScene no_e = random_scene(5, 4, 6, false);
    const Image none = term_image(no_e, l, {false, false, true});
    for (double v : none.data())
        EXPECT_EQ(v, 0.0);
}

TEST(Display, ExposureGammaAndAlpha) {
    Image img(3, 1, 3);
    img.set_rgb(0, Vec3(0.25, 0.5, 2.0));
    img.set_rgb(1, Vec3(-1.0, 0.0, 1.0));
    img.set_rgb(2, Vec3(0.2, 0.2, 0.2));
    Image mask(3, 1, 1, 1.0);
    mask.at(2, 0) = 0.5;
    const Rgba8Image lin = to_display(img, mask, {0.0, 1.0});
    EXPECT_EQ(lin.pixels[0], 64);
    EXPECT_EQ(lin.pixels[1], 128);
    EXPECT_EQ(lin.pixels[2], 255);
    EXPECT_EQ(lin.pixels[4], 0);
    EXPECT_EQ(lin.pixels[3], 255);
    EXPECT_EQ(lin.pixels[11], 128);
    const Rgba8Image up = to_display(img, mask, {1.0, 1.0});
    EXPECT_EQ(up.pixels[0], 128);  // 0.25 * 2
    EXPECT_EQ(up.pixels[1], 255);
    const Rgba8Image g = to_display(img, mask, {0.0, 2.2});
    EXPECT_EQ(g.pixels[1], static_cast<int>(std::lround(std::pow(0.5, 1 / 2.2) * 255)));
    const Rgba8Image opaque = to_display(img, Image(), {});
    EXPECT_EQ(opaque.pixels[11], 255);
}

TEST(Relight, IdentityMatchesClampedReconstruct) {
    const DecomposedScene s = random_scene(6, 6, 7);
    const LightCoeffs l = light("studio");
    const Rgba8Image a = relight(s, l, Rotation3::identity(), {0.0, 1.0});
    const Rgba8Image b = to_display(reconstruct(s, l), s.mask, {0.0, 1.0});
    EXPECT_EQ(a.pixels, b.pixels);
}

TEST(Relight, YawFlipsBrightSideOfSphere) {
    const TriScene scene = fixtures::lone_sphere(fixtures::lambert(0.8), 32);
    TransportConfig tc;
    tc.samples = 256;
    const DecomposedScene d = render_decomposed(scene, fixtures::sphere_camera(32), tc);
    const LightCoeffs l = light("two-lights");
    const double x0 = bright_centroid_x(reconstruct(d, l));
    const double x180 = bright_centroid_x(reconstruct(d, rotate_env(l, Rotation3::yaw_pitch_roll(180, 0, 0))));
    const double xm180 = bright_centroid_x(reconstruct(d, rotate_env(l, Rotation3::yaw_pitch_roll(-180, 0, 0))));
    EXPECT_LT(x0 * x180, 0.0);
    EXPECT_NEAR(x180, xm180, 1e-6);
    EXPECT_GT(std::abs(x0), 0.25);
}

TEST(DecomposedScene, Validate) {
    DecomposedScene s = random_scene(4, 4, 8);
    EXPECT_NO_THROW(s.validate());
    s.albedo.at(0, 0) = 1.5;
    EXPECT_THROW(s.validate(), ArgumentError);
    s.albedo.at(0, 0) = 0.5;
    s.residual.coeff(1, 0, 0) = std::nan("");
    EXPECT_THROW(s.validate(), ArgumentError);
    s.residual.coeff(1, 0, 0) = 0.0;
    s.mask = Image(3, 4, 1);
    EXPECT_THROW(s.validate(), ArgumentError);
}
