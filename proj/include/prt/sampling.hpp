#pragma once

#include "prt/math.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace prt {

/// splitmix64 finalizer; used to derive independent per-pixel streams from
/// a user seed.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    /// Uniform in [0, 1).
    double uniform() { return std::generate_canonical<double, 64>(engine_); }

  private:
    std::mt19937_64 engine_;
};

Vec3 uniform_sphere(double u1, double u2);
inline constexpr double kUniformSpherePdf = 1.0 / (4.0 * std::numbers::pi);

/// Cosine-weighted direction about +z.
Vec3 cosine_hemisphere(double u1, double u2);

/// M points of the spherical Fibonacci lattice (deterministic, near-uniform).
std::vector<Vec3> spherical_fibonacci(int count);

struct SphereSample {
    Vec3 dir;
    double weight;  // quadrature weight, sums to ~4*pi
};

/// Strategy for turning an integral over the sphere into a weighted sum.
///
/// Independent and Stratified are Monte Carlo with the uniform sphere pdf
/// (every sample has weight 4*pi/count). Stratified jitters one sample per
/// cell of an equal-area (cos theta, phi) grid with about sqrt(count / 2) rows,
/// using an exact factorization of count when one lies near that
/// shape; otherwise the samples left over are drawn independently. LatLong is a deterministic midpoint
/// rule on an n_theta x n_phi grid with exact cell solid angles.
class SphereSampler {
  public:
    enum class Kind { Independent, Stratified, LatLong };

    static SphereSampler independent(int count, std::uint64_t seed);
    static SphereSampler stratified(int count, std::uint64_t seed);
    static SphereSampler lat_long(int n_theta, int n_phi);

    Kind kind() const { return kind_; }
    int count() const;
    std::uint64_t seed() const { return seed_; }

    std::vector<SphereSample> draw() const { return draw(seed_); }
    std::vector<SphereSample> draw(std::uint64_t seed) const;
    /// Allocation-free variant for hot loops; `out` is resized to count().
    void draw_into(std::uint64_t seed, std::vector<SphereSample> &out) const;

  private:
    Kind kind_ = Kind::Independent;
    int count_ = 0;
    int n_theta_ = 0;
    int n_phi_ = 0;
    std::uint64_t seed_ = 0;
};

/// Piecewise-constant 1D distribution with O(log n) sampling.
class Distribution1D {
  public:
    Distribution1D() = default;
    explicit Distribution1D(std::span<const double> weights);

    bool empty() const { return total_ <= 0.0; }
    double total() const { return total_; }
    std::size_t size() const { return weights_.size(); }
    /// Returns the sampled index; `pmf` receives its probability.
    std::size_t sample(double u, double &pmf) const;
    double pmf(std::size_t i) const { return total_ > 0.0 ? weights_[i] / total_ : 0.0; }

  private:
    std::vector<double> weights_;
    std::vector<double> cdf_;
    double total_ = 0.0;
};

}  // namespace prt
