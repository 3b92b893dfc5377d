#include "prt/sampling.hpp"

#include "prt/error.hpp"

#include <algorithm>
#include <cmath>

namespace prt {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix_seed(base ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

Vec3 uniform_sphere(double u1, double u2) {
    const double z = 1.0 - 2.0 * u1;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * kPi * u2;
    return {r * std::cos(phi), r * std::sin(phi), z};
}

Vec3 cosine_hemisphere(double u1, double u2) {
    const double r = std::sqrt(u1);
    const double phi = 2.0 * kPi * u2;
    return {r * std::cos(phi), r * std::sin(phi), std::sqrt(std::max(0.0, 1.0 - u1))};
}

std::vector<Vec3> spherical_fibonacci(int count) {
    std::vector<Vec3> out;
    out.reserve(count);
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int j = 0; j < count; ++j) {
        const double z = 1.0 - (2.0 * j + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double frac = j / golden;
        frac -= std::floor(frac);
        const double phi = 2.0 * kPi * frac;
        out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return out;
}

SphereSampler SphereSampler::independent(int count, std::uint64_t seed) {
    if (count < 1)
        throw ArgumentError("sphere sampler needs at least one sample");
    SphereSampler s;
    s.kind_ = Kind::Independent;
    s.count_ = count;
    s.seed_ = seed;
    return s;
}

SphereSampler SphereSampler::stratified(int count, std::uint64_t seed) {
    SphereSampler s = independent(count, seed);
    s.kind_ = Kind::Stratified;
    // Prefer an exact rows x cols factorization near the equal-area shape.
    const double ideal = std::sqrt(count / 2.0);
    int rows = std::max(1, static_cast<int>(ideal));
    for (int r = std::max(1, static_cast<int>(ideal / 2)); r <= static_cast<int>(2 * ideal) + 1; ++r)
        if (count % r == 0 && (count % rows != 0 || std::abs(r - ideal) < std::abs(rows - ideal)))
            rows = r;
    s.n_theta_ = rows;
    s.n_phi_ = count / rows;
    return s;
}

SphereSampler SphereSampler::lat_long(int n_theta, int n_phi) {
    if (n_theta < 1 || n_phi < 1)
        throw ArgumentError("lat-long quadrature needs a non-empty grid");
    SphereSampler s;
    s.kind_ = Kind::LatLong;
    s.n_theta_ = n_theta;
    s.n_phi_ = n_phi;
    s.count_ = n_theta * n_phi;
    return s;
}

int SphereSampler::count() const { return count_; }

std::vector<SphereSample> SphereSampler::draw(std::uint64_t seed) const {
    std::vector<SphereSample> out;
    draw_into(seed, out);
    return out;
}

void SphereSampler::draw_into(std::uint64_t seed, std::vector<SphereSample> &out) const {
    out.resize(count_);
    switch (kind_) {
    case Kind::LatLong: {
        const double dphi = 2.0 * kPi / n_phi_;
        std::size_t k = 0;
        for (int i = 0; i < n_theta_; ++i) {
            const double t0 = kPi * i / n_theta_;
            const double t1 = kPi * (i + 1) / n_theta_;
            const double omega = (std::cos(t0) - std::cos(t1)) * dphi;
            const double theta = 0.5 * (t0 + t1);
            for (int j = 0; j < n_phi_; ++j)
                out[k++] = {spherical_direction(theta, (j + 0.5) * dphi), omega};
        }
        return;
    }
    case Kind::Independent: {
        Rng rng(seed);
        const double w = kFourPi / count_;
        for (auto &s : out) {
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            s = {uniform_sphere(u1, u2), w};
        }
        return;
    }
    case Kind::Stratified: {
        Rng rng(seed);
        const double w = kFourPi / count_;
        const int rows = n_theta_;
        const int cols = n_phi_;
        std::size_t k = 0;
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const double u1 = (i + rng.uniform()) / rows;
                const double u2 = (j + rng.uniform()) / cols;
                out[k++] = {uniform_sphere(u1, u2), w};
            }
        while (k < out.size()) {
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            out[k++] = {uniform_sphere(u1, u2), w};
        }
        return;
    }
    }
}

Distribution1D::Distribution1D(std::span<const double> weights)
    : weights_(weights.begin(), weights.end()) {
    cdf_.resize(weights_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i]))
            throw ArgumentError("distribution weights must be finite and non-negative");
        acc += weights_[i];
        cdf_[i] = acc;
    }
    total_ = acc;
}

std::size_t Distribution1D::sample(double u, double &pmf) const {
    const double target = u * total_;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    std::size_t i = std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1);
    // Skip zero-weight bins that share a cdf value with their predecessor.
    while (weights_[i] <= 0.0 && i + 1 < weights_.size())
        ++i;
    pmf = weights_[i] / total_;
    return i;
}

}  // namespace prt
