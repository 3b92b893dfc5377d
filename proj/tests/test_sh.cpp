#include "fixtures.hpp"

#include "prt/error.hpp"
#include "prt/sh.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace prt;

namespace {

Vec3 random_dir(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Vec3 v(g(rng), g(rng), g(rng));
    return v.normalized();
}

ShVector random_vec(ShDegree deg, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ShVector v(deg);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = u(rng);
    return v;
}

Rotation3 random_rotation(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> a(0.0, 2.0 * kPi);
    return Rotation3::axis_angle(random_dir(rng), a(rng));
}

}  // namespace

TEST(ShEval, AnalyticValues) {
    EXPECT_NEAR(sh_eval(0, 0, Direction(0.6, 0.0, 0.8)), 0.2820948, 1e-7);
    EXPECT_NEAR(sh_eval(1, 0, Direction(0, 0, 1)), 0.4886025, 1e-7);
    EXPECT_NEAR(sh_eval(1, 1, Direction(0, 0, 1)), 0.0, 1e-12);
}

TEST(ShEval, MatchesLegendreOracle) {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 50; ++k) {
        const Vec3 d = random_dir(rng);
        for (int l = 0; l <= kMaxShDegree; ++l)
            for (int m = -l; m <= l; ++m)
                EXPECT_NEAR(sh_eval(l, m, Direction(d)), fixtures::sh_oracle(l, m, d), 1e-9) << l << "," << m;
    }
}

TEST(ShEval, BasisAgreesWithSingle) {
    const Vec3 d = Vec3(0.3, -0.5, 0.7).normalized();
    std::vector<double> all(121);
    sh_eval_basis(ShDegree(10), d, all);
    for (int l = 0; l <= 10; ++l)
        for (int m = -l; m <= l; ++m)
            EXPECT_NEAR(all[sh_index(l, m)], sh_eval(l, m, Direction(d)), 1e-12);
}

TEST(ShEval, RejectsOutOfRange) {
    const Direction z(0, 0, 1);
    EXPECT_THROW(sh_eval(11, 0, z), ArgumentError);
    EXPECT_THROW(sh_eval(-1, 0, z), ArgumentError);
    EXPECT_THROW(sh_eval(2, 3, z), ArgumentError);
    EXPECT_THROW(sh_eval(2, -3, z), ArgumentError);
}

TEST(ShTypes, Invariants) {
    EXPECT_THROW(Direction(1.0, 1.0, 0.0), ArgumentError);
    EXPECT_THROW(Direction::normalize(Vec3::Zero()), ArgumentError);
    EXPECT_THROW(ShDegree(11), ArgumentError);
    EXPECT_THROW(ShDegree(-1), ArgumentError);
    EXPECT_EQ(ShDegree::from_coeff_count(25).n(), 4);
    EXPECT_THROW(ShDegree::from_coeff_count(24), ArgumentError);
    EXPECT_THROW(ShVector(std::vector<double>(10, 0.0)), ArgumentError);
    EXPECT_THROW(ShVector(std::vector<double>{std::nan("")}), NumericError);
    Mat3 bad = Mat3::Identity();
    bad(0, 0) = -1.0;
    EXPECT_THROW(Rotation3{bad}, ArgumentError);
    EXPECT_THROW(Rotation3{Mat3(2.0 * Mat3::Identity())}, ArgumentError);
}

TEST(ShProject, ConstantFunction) {
    const ShVector c = sh_project([](const Vec3 &) { return 1.0; }, ShDegree(4), SphereSampler::lat_long(64, 128));
    EXPECT_NEAR(c[0], 2.0 * std::sqrt(kPi), 1e-6);
    for (std::size_t i = 1; i < c.size(); ++i)
        EXPECT_NEAR(c[i], 0.0, 2e-3);
}

TEST(ShProject, BasisFunctionIsUnit) {
    const ShVector c = sh_project([](const Vec3 &d) { return sh_eval(2, 1, Direction::normalize(d)); }, ShDegree(4),
                                  SphereSampler::lat_long(64, 128));
    for (std::size_t i = 0; i < c.size(); ++i)
        EXPECT_NEAR(c[i], i == 7 ? 1.0 : 0.0, 2e-3) << i;
}

TEST(ShProject, ClampedCosine) {
    const ShVector c = sh_project([](const Vec3 &d) { return std::max(d.z(), 0.0); }, ShDegree(4),
                                  SphereSampler::lat_long(1024, 8));
    EXPECT_NEAR(c[0], 0.8862269, 1e-4);
    EXPECT_NEAR(c[2], 1.0233267, 1e-4);
    const auto q = fixtures::sphere_quadrature(64, 8, true);
    double c6 = 0.0;
    for (std::size_t k = 0; k < q.dirs.size(); ++k)
        c6 += q.weights[k] * q.dirs[k].z() * fixtures::sh_oracle(2, 0, q.dirs[k]);
    EXPECT_NEAR(c[6], c6, 1e-4);
}

TEST(ShProject, MonteCarloIsUnbiased) {
    const SphereSampler s = SphereSampler::independent(20000, 3);
    const ShVector c = sh_project([](const Vec3 &) { return 1.0; }, ShDegree(2), s);
    EXPECT_NEAR(c[0], 2.0 * std::sqrt(kPi), 1e-9);
    // Each estimate is 4 pi mean(Y_i) with Var(Y_i) = 1 / (4 pi).
    const double sigma = 4.0 * kPi / std::sqrt(4.0 * kPi * 20000);
    for (std::size_t i = 1; i < c.size(); ++i)
        EXPECT_NEAR(c[i], 0.0, 4.0 * sigma);
}

TEST(ShProject, NonFiniteSampleReportsDirection) {
    try {
        sh_project([](const Vec3 &d) { return d.z() > 0.9 ? std::nan("") : 0.0; }, ShDegree(2),
                   SphereSampler::lat_long(16, 32));
        FAIL();
    } catch (const NumericError &e) {
        EXPECT_NE(std::string(e.what()).find("direction"), std::string::npos);
    }
}

TEST(ShProject, OrthonormalityMonteCarloWithinFourSigma) {
    const int n = 100000;
    const auto samples = SphereSampler::independent(n, 9).draw();
    std::vector<double> y(25);
    std::vector<double> sum(625, 0.0), sum2(625, 0.0);
    for (const auto &s : samples) {
        sh_eval_basis(ShDegree(4), s.dir, y);
        for (int i = 0; i < 25; ++i)
            for (int j = 0; j < 25; ++j) {
                const double v = kFourPi * y[i] * y[j];
                sum[i * 25 + j] += v;
                sum2[i * 25 + j] += v * v;
            }
    }
    for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 25; ++j) {
            const double mean = sum[i * 25 + j] / n;
            const double var = sum2[i * 25 + j] / n - mean * mean;
            const double se = std::sqrt(var / n);
            EXPECT_LE(std::abs(mean - (i == j ? 1.0 : 0.0)), 4.0 * se + 1e-12) << i << "," << j;
        }
}

TEST(ShProject, RoundTripBandLimited) {
    std::mt19937_64 rng(4);
    const ShVector v = random_vec(ShDegree(4), rng);
    const ShVector c = sh_project([&](const Vec3 &d) { return v.eval(d); }, ShDegree(4), SphereSampler::lat_long(128, 256));
    for (int k = 0; k < 100; ++k) {
        const Vec3 d = random_dir(rng);
        EXPECT_NEAR(c.eval(d), v.eval(d), 2e-3);
    }
}

TEST(ShDot, ValuesAndErrors) {
    const ShVector e0 = ShVector::basis(ShDegree(4), 0);
    EXPECT_DOUBLE_EQ(sh_dot(e0, e0), 1.0);
    std::mt19937_64 rng(5);
    EXPECT_DOUBLE_EQ(sh_dot(ShVector(ShDegree(4)), random_vec(ShDegree(4), rng)), 0.0);
    EXPECT_THROW(sh_dot(ShVector(ShDegree(2)), ShVector(ShDegree(4))), ArgumentError);
}

TEST(ShDot, ClampedCosineAgainstConstantLight) {
    const double c = 2.5;
    const ShVector t = sh_project([](const Vec3 &d) { return std::max(d.z(), 0.0); }, ShDegree(4),
                                  SphereSampler::lat_long(512, 16));
    const ShVector l = sh_project([&](const Vec3 &) { return c; }, ShDegree(4), SphereSampler::lat_long(64, 128));
    EXPECT_NEAR(sh_dot(t, l), c * kPi, 1e-3);
}

TEST(ShDot, Bilinear) {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 20; ++k) {
        const ShVector t1 = random_vec(ShDegree(4), rng), t2 = random_vec(ShDegree(4), rng),
                       l = random_vec(ShDegree(4), rng);
        const double a = 1.7;
        const double lhs = sh_dot(a * t1 + t2, l);
        const double rhs = a * sh_dot(t1, l) + sh_dot(t2, l);
        EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
    }
}

TEST(ShRotate, Identity) {
    std::mt19937_64 rng(7);
    const ShVector v = random_vec(ShDegree(4), rng);
    const ShVector r = sh_rotate(v, Rotation3::identity());
    for (std::size_t i = 0; i < v.size(); ++i)
        EXPECT_NEAR(r[i], v[i], 1e-12);
}

TEST(ShRotate, PointwiseProperty) {
    std::mt19937_64 rng(8);
    for (int deg : {1, 2, 4, 7, 10}) {
        for (int k = 0; k < 10; ++k) {
            const ShVector v = random_vec(ShDegree(deg), rng);
            const Rotation3 r = random_rotation(rng);
            const ShVector rv = sh_rotate(v, r);
            for (int j = 0; j < 5; ++j) {
                const Vec3 d = random_dir(rng);
                EXPECT_NEAR(rv.eval(d), v.eval(r.inverse() * d), 1e-5 * std::max(1.0, std::abs(rv.eval(d))));
            }
        }
    }
}

TEST(ShRotate, ZLobeToYAxis) {
    const ShVector v = ShVector::basis(ShDegree(4), 2);
    const ShVector r = sh_rotate(v, Rotation3::axis_angle(Vec3::UnitX(), kPi / 2));
    const auto proj = sh_project([&](const Vec3 &d) { return sh_eval(1, 0, Direction(Rotation3::axis_angle(Vec3::UnitX(), -kPi / 2) * d)); },
                                 ShDegree(4), SphereSampler::lat_long(64, 128));
    EXPECT_NEAR(std::abs(r[1]), 1.0, 1e-9);
    EXPECT_NEAR(r[2], 0.0, 1e-9);
    EXPECT_NEAR(r[3], 0.0, 1e-9);
    for (std::size_t i = 0; i < r.size(); ++i)
        EXPECT_NEAR(r[i], proj[i], 2e-3);
    EXPECT_NEAR(r.norm(), 1.0, 1e-12);
}

TEST(ShRotate, NormPreservedAndBandsSeparate) {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 20; ++k) {
        const ShVector v = random_vec(ShDegree(4), rng);
        const Rotation3 r = random_rotation(rng);
        const ShVector rv = sh_rotate(v, r);
        EXPECT_NEAR(rv.norm(), v.norm(), 1e-6);
        for (int l = 0; l <= 4; ++l) {
            double a = 0.0, b = 0.0;
            for (int m = -l; m <= l; ++m) {
                a += v.at(l, m) * v.at(l, m);
                b += rv.at(l, m) * rv.at(l, m);
            }
            EXPECT_NEAR(std::sqrt(a), std::sqrt(b), 1e-9);
        }
    }
}

TEST(ShRotate, Composition) {
    std::mt19937_64 rng(10);
    for (int k = 0; k < 20; ++k) {
        const ShVector v = random_vec(ShDegree(4), rng);
        const Rotation3 r1 = random_rotation(rng), r2 = random_rotation(rng);
        const ShVector a = sh_rotate(sh_rotate(v, r1), r2);
        const ShVector b = sh_rotate(v, r2 * r1);
        for (std::size_t i = 0; i < v.size(); ++i)
            EXPECT_NEAR(a[i], b[i], 1e-5);
    }
}

TEST(ShRotate, YawPitchRollConvention) {
    const Rotation3 r = Rotation3::yaw_pitch_roll(90.0, 0.0, 0.0);
    EXPECT_TRUE((r * Vec3::UnitX()).isApprox(Vec3::UnitY(), 1e-12));
    const Rotation3 p = Rotation3::yaw_pitch_roll(0.0, 90.0, 0.0);
    EXPECT_TRUE((p * Vec3::UnitZ()).isApprox(Vec3::UnitX(), 1e-12));
    const Rotation3 all = Rotation3::yaw_pitch_roll(30, 20, 10);
    const Mat3 expect = (Eigen::AngleAxisd(deg_to_rad(10), Vec3::UnitX()) *
                         Eigen::AngleAxisd(deg_to_rad(20), Vec3::UnitY()) *
                         Eigen::AngleAxisd(deg_to_rad(30), Vec3::UnitZ()))
                            .toRotationMatrix();
    EXPECT_TRUE(all.matrix().isApprox(expect, 1e-12));
}

TEST(ShText, RoundTripBitExact) {
    std::mt19937_64 rng(11);
    ShVector v = random_vec(ShDegree(4), rng);
    v[3] = 1e-300;
    v[4] = -0.1;
    std::stringstream ss;
    write_sh_text(ss, v);
    EXPECT_EQ(ss.str().rfind("SH 4\n", 0), 0u);
    const ShVector back = read_sh_text(ss);
    EXPECT_EQ(back, v);

    const ShVectorRgb rgb(random_vec(ShDegree(2), rng), random_vec(ShDegree(2), rng), random_vec(ShDegree(2), rng));
    std::stringstream s2;
    write_sh_text(s2, rgb);
    EXPECT_EQ(read_sh_rgb_text(s2), rgb);
}

TEST(ShText, ParseErrors) {
    std::istringstream bad_header("XX 2\n1 2 3");
    EXPECT_THROW(read_sh_text(bad_header), ParseError);
    std::istringstream truncated("SH 1\n1 2 3");
    EXPECT_THROW(read_sh_text(truncated), ParseError);
    std::istringstream bad_value("SH 1\n1 2 x 4");
    try {
        read_sh_text(bad_value);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_GT(e.offset(), 4u);
    }
    std::istringstream bad_degree("SH 11\n");
    EXPECT_ANY_THROW(read_sh_text(bad_degree));
}
