#pragma once

#include "prt/image.hpp"
#include "prt/relight.hpp"

#include <span>
#include <string>
#include <vector>

namespace prt {

inline constexpr double kPsnrCap = 99.0;
inline constexpr double kMaskThreshold = 0.5;

struct MetricReport {
    double l1_x100 = 0.0;
    double l2_x100 = 0.0;
    double psnr = kPsnrCap;
    std::size_t pixel_count = 0;
    bool masked = false;
};

/// Mean absolute / squared difference over all channels (x100) and PSNR with
/// peak 1. With a mask only pixels where mask > 0.5 count. Throws
/// ArgumentError on shape mismatch.
MetricReport image_metrics(const Image &a, const Image &b, const Image *mask = nullptr);

/// Copy of img clamped to [0, 1].
Image clamp_unit(const Image &img);

/// Mean of (log(|x| + 1) - log(|y| + 1))^2.
double log_loss(std::span<const double> x, std::span<const double> y);

/// One side (prediction or ground truth) of the render loss.
struct RenderTerms {
    const Image *albedo;
    const TransportMap *transport;
    const LightCoeffs *light;
};

struct LabeledLoss {
    std::string label;
    double l1 = 0.0;
};

/// Masked L1 of every way to form the shading (T x L from pred/gt, 4 entries,
/// against S(T_gt, L_gt)) and the relit image (albedo x T x L, 8 entries,
/// against target = albedo_gt * S(T_gt, L_gt) + E . L_gt). The predicted
/// residual, when given, is added to every relit combination using that
/// combination's light.
std::vector<LabeledLoss> render_loss_suite(const RenderTerms &pred, const RenderTerms &gt,
                                           const ResidualMap *e_pred, const Image &mask);

}  // namespace prt
