#pragma once

#include "prt/geometry.hpp"
#include "prt/sampling.hpp"
#include "prt/sh.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace prt {

enum class TransportMode { CosineOnly, CosineVisibility, FullReflectance };

/// Accepts "cos", "cosvis" and "full"; throws ArgumentError otherwise.
TransportMode parse_transport_mode(const std::string &s);
std::string to_string(TransportMode m);

/// Per-pixel scalar transport coefficients, stored plane-major
/// (coefficient i of every pixel, then coefficient i+1).
class TransportMap {
  public:
    TransportMap(int width, int height, ShDegree degree);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
    ShDegree degree() const { return degree_; }

    double &coeff(std::size_t pixel, int i) { return planes_[static_cast<std::size_t>(i) * pixel_count() + pixel]; }
    double coeff(std::size_t pixel, int i) const { return planes_[static_cast<std::size_t>(i) * pixel_count() + pixel]; }
    std::span<const double> plane(int i) const { return {planes_.data() + i * pixel_count(), pixel_count()}; }
    std::span<double> plane(int i) { return {planes_.data() + i * pixel_count(), pixel_count()}; }

    ShVector at(std::size_t pixel) const;
    /// Stores v and marks the pixel valid.
    void set(std::size_t pixel, const ShVector &v);
    bool valid(std::size_t pixel) const { return valid_[pixel] != 0; }
    void set_valid(std::size_t pixel, bool v) { valid_[pixel] = v ? 1 : 0; }

    /// Keeps the first (degree+1)^2 planes.
    TransportMap truncated(ShDegree degree) const;
    friend bool operator==(const TransportMap &, const TransportMap &) = default;

  private:
    int width_;
    int height_;
    ShDegree degree_;
    std::vector<double> planes_;
    std::vector<std::uint8_t> valid_;
};

struct TransportConfig {
    TransportMode mode = TransportMode::FullReflectance;
    ShDegree degree{4};
    int samples = 1024;
    std::uint64_t seed = 0;
    SphereSampler::Kind sampling = SphereSampler::Kind::Stratified;
    int workers = 0;  // 0 = all available, capped by PRT_THREADS
};

/// Moves a view direction that lies below the shading horizon back into the
/// upper hemisphere by mirroring it across the tangent plane.
Vec3 clamp_view_direction(const Vec3 &wo, const Vec3 &n);

/// Monte Carlo SH projection of f * V * max(w . n, 0) at p with uniform-pdf
/// sphere samples. f = 1 for the cosine modes (V = 1 for CosineOnly) and the
/// white material lobe for FullReflectance.
ShVector compute_transport_point(const TriScene &scene, const SurfacePoint &p, const Vec3 &wo, TransportMode mode,
                                 ShDegree degree, int samples, std::uint64_t seed,
                                 SphereSampler::Kind sampling = SphereSampler::Kind::Stratified);

/// Transport at every primary hit of cam; each pixel uses derive_seed(seed,
/// pixel) so results do not depend on the worker count.
TransportMap compute_transport_map(const TriScene &scene, const Camera &cam, const TransportConfig &cfg);

}  // namespace prt
