#pragma once

#include "prt/envlight.hpp"
#include "prt/image.hpp"
#include "prt/io.hpp"
#include "prt/transport.hpp"

#include <filesystem>

namespace prt {

/// Per-pixel RGB residual coefficients: plane (c, i) holds coefficient i of
/// channel c for every pixel.
class ResidualMap {
  public:
    ResidualMap(int width, int height, ShDegree degree);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
    ShDegree degree() const { return degree_; }

    double &coeff(std::size_t pixel, int c, int i) { return data_[plane_offset(c, i) + pixel]; }
    double coeff(std::size_t pixel, int c, int i) const { return data_[plane_offset(c, i) + pixel]; }
    std::span<const double> plane(int c, int i) const { return {data_.data() + plane_offset(c, i), pixel_count()}; }
    std::span<double> plane(int c, int i) { return {data_.data() + plane_offset(c, i), pixel_count()}; }

    ShVectorRgb at(std::size_t pixel) const;
    void set(std::size_t pixel, const ShVectorRgb &v);
    bool is_zero() const;
    friend bool operator==(const ResidualMap &, const ResidualMap &) = default;

  private:
    std::size_t plane_offset(int c, int i) const {
        return (static_cast<std::size_t>(c) * degree_.coeff_count() + i) * pixel_count();
    }
    int width_;
    int height_;
    ShDegree degree_;
    std::vector<double> data_;
};

/// The intrinsic buffers of one rendered view.
struct DecomposedScene {
    Image albedo;    // RGB, in [0, 1]
    Image mask;      // 1 channel, coverage * (1 - transparency)
    Image normals;   // RGB, (n + 1) / 2
    Image material;  // RGB: roughness, transparency, metallic
    TransportMap transport;
    ResidualMap residual;
    bool residual_missing = false;  // set by the loader when no residual planes were stored

    /// Blank buffers (zero mask, zero transport and residual).
    DecomposedScene(int width, int height, ShDegree degree);

    int width() const { return albedo.width(); }
    int height() const { return albedo.height(); }
    ShDegree degree() const { return transport.degree(); }
    /// Throws ArgumentError when buffers disagree in shape or degree, or hold
    /// out-of-range or non-finite values.
    void validate() const;
};

/// S_c = T . L_c per pixel; invalid pixels are 0.
Image shade(const TransportMap &t, const LightCoeffs &l);
/// E_c . L_c per pixel (signed).
Image residual_image(const ResidualMap &e, const LightCoeffs &l);
/// (albedo * S + E) * mask, linear and unclamped.
Image reconstruct(const DecomposedScene &scene, const LightCoeffs &l);

struct DisplayOptions {
    double exposure = 0.0;  // stops
    double gamma = 2.2;
};

/// Linear RGB -> 8-bit RGBA: scale by 2^exposure, clamp to [0, 1], encode
/// with 1/gamma; alpha is the mask (opaque when mask is empty).
Rgba8Image to_display(const Image &linear, const Image &mask, const DisplayOptions &opts);

/// Rotates the light, reconstructs and converts for display.
Rgba8Image relight(const DecomposedScene &scene, const LightCoeffs &light, const Rotation3 &rotation,
                   const DisplayOptions &opts);

/// Which terms of the reconstruction to show.
struct TermSelection {
    bool albedo = true;
    bool shading = true;
    bool residual = true;
};
inline constexpr double kDefaultResidualScale = 10.0;

/// Linear image of the selected terms, multiplied by the mask. The
/// residual-only selection shows |E| * residual_scale.
Image term_image(const DecomposedScene &scene, const LightCoeffs &l, const TermSelection &terms,
                 double residual_scale = kDefaultResidualScale);

/// SHC layout: albedo.{r,g,b}, mask, normal.{x,y,z},
/// material.{rough,transp,metal}, transport.NN, residual.{r,g,b}.NN.
ShcContainer to_container(const DecomposedScene &scene);
/// Infers the degree from the transport plane count (9 or 25). Missing
/// residual planes load as zero with residual_missing set; any other missing
/// plane is a LoadError naming it.
DecomposedScene from_container(const ShcContainer &c);
void save_decomposed(const DecomposedScene &scene, const std::filesystem::path &path);
DecomposedScene load_decomposed(const std::filesystem::path &path);

}  // namespace prt
