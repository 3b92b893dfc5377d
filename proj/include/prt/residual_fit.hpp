#pragma once

#include "prt/relight.hpp"

#include <span>
#include <vector>

namespace prt {

struct ResidualFitConfig {
    double lambda = 1e-4;      // ridge weight, >= 0
    double tolerance = 1e-6;   // bound on |(G + lambda I) e - b| / max(1, |b|) per pixel
    int workers = 0;
};

struct ResidualFitReport {
    std::vector<double> l2_before;  // per training image, mean squared error x 100 over mask > 0
    std::vector<double> l2_after;
    double max_normal_residual = 0.0;
};

/// Ridge least squares for E: per pixel and channel c, minimizes
/// sum_k (e . L_kc - r_kc)^2 + lambda |e|^2 with r = PT_k / mask - albedo * S_k.
/// Pixels with zero mask get e = 0. Throws SolverError when lambda = 0 and
/// the normal matrix is singular (always the case for fewer than
/// (N+1)^2 lights), and NumericError when the solution misses the tolerance.
ResidualMap fit_residual(const DecomposedScene &scene, std::span<const Image> pt_images,
                         std::span<const LightCoeffs> lights, const ResidualFitConfig &cfg,
                         ResidualFitReport *report = nullptr);

struct LambdaSelection {
    double lambda = 0.0;
    std::vector<double> candidates;
    std::vector<double> validation_error;  // mean squared error per candidate
};

/// Half-decade ridge candidates 1e-4 ... 1e4.
std::vector<double> default_lambda_candidates();

/// K-fold cross-validation over the training lights (fold f holds lights
/// k with k % folds == f): picks the candidate with the lowest mean squared
/// validation error between display-clamped ([0, 1]) reconstruction and
/// ground truth over mask > 0 pixels.
LambdaSelection select_lambda(const DecomposedScene &scene, std::span<const Image> pt_images,
                              std::span<const LightCoeffs> lights, std::span<const double> candidates,
                              int folds = 5, int workers = 0);

}  // namespace prt
