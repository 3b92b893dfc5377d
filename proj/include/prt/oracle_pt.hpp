#pragma once

#include "prt/envlight.hpp"
#include "prt/geometry.hpp"
#include "prt/relight.hpp"
#include "prt/transport.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace prt {

/// How light directions are drawn at each shading point.
enum class EnvSampling {
    Uniform,     // independent uniform sphere
    Stratified,  // jittered equal-area grid, uniform pdf
    Importance,  // luminance x solid-angle CDF over texels (maps only)
};
EnvSampling parse_env_sampling(const std::string &s);
std::string to_string(EnvSampling s);

struct PtConfig {
    int spp = 256;
    std::uint64_t seed = 0;
    int max_bounces = 0;  // 0 = direct only, 1 = one indirect bounce
    /// When set, incident radiance is the SH expansion of the light at this
    /// degree instead of the raw map.
    std::optional<ShDegree> band_limit_light;
    EnvSampling sampling = EnvSampling::Uniform;
    int workers = 0;
};

/// Monte Carlo direct (+ optional one-bounce) illumination with pixel-center
/// primary rays: pixel = mask * albedo * integral of L * f * V * cos, with f
/// the white material lobe. Misses are 0.
Image render_pt(const TriScene &scene, const EnvironmentMap &env, const Camera &cam, const PtConfig &cfg);
/// Same with radiance given by the SH expansion of l (truncated to
/// band_limit_light when that is lower). Importance sampling is rejected.
Image render_pt(const TriScene &scene, const LightCoeffs &l, const Camera &cam, const PtConfig &cfg);

struct GBuffers {
    Image albedo;    // RGB
    Image normals;   // RGB, (n + 1) / 2, zero on misses
    Image mask;      // coverage * (1 - transparency)
    Image material;  // roughness, transparency, metallic
};
GBuffers render_buffers(const TriScene &scene, const Camera &cam);

/// Ground-truth buffers plus transport (zero residual); transport is valid
/// wherever the mask is positive.
DecomposedScene render_decomposed(const TriScene &scene, const Camera &cam, const TransportConfig &tcfg);

}  // namespace prt
