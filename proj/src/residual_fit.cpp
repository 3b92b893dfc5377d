#include "prt/residual_fit.hpp"

#include "prt/error.hpp"
#include "prt/metrics.hpp"
#include "prt/parallel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <mutex>

namespace prt {

namespace {

double masked_l2_x100(const DecomposedScene &scene, const Image &pred, const Image &pt) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t p = 0; p < pt.pixel_count(); ++p) {
        if (scene.mask.at(p, 0) <= 0.0)
            continue;
        for (int c = 0; c < 3; ++c) {
            const double d = pred.at(p, c) - pt.at(p, c);
            sum += d * d;
        }
        count += 3;
    }
    return count ? 100.0 * sum / static_cast<double>(count) : 0.0;
}

}  // namespace

ResidualMap fit_residual(const DecomposedScene &scene, std::span<const Image> pt_images,
                         std::span<const LightCoeffs> lights, const ResidualFitConfig &cfg,
                         ResidualFitReport *report) {
    scene.validate();
    if (lights.empty())
        throw ArgumentError("residual fit needs at least one training light");
    if (pt_images.size() != lights.size())
        throw ArgumentError("residual fit needs one ground-truth image per light");
    if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda))
        throw ArgumentError("lambda must be a finite value >= 0");
    const ShDegree degree = scene.degree();
    const int n = degree.coeff_count();
    const std::size_t k_count = lights.size();
    for (std::size_t k = 0; k < k_count; ++k) {
        if (lights[k].degree() != degree)
            throw ArgumentError("training light " + std::to_string(k) + " has degree " +
                                std::to_string(lights[k].degree().n()) + ", scene has " +
                                std::to_string(degree.n()));
        const Image &img = pt_images[k];
        if (img.width() != scene.width() || img.height() != scene.height() || img.channels() != 3)
            throw ArgumentError("ground-truth image " + std::to_string(k) + " does not match the scene");
    }
    if (cfg.lambda == 0.0 && k_count < static_cast<std::size_t>(n))
        throw SolverError("normal matrix is singular with " + std::to_string(k_count) + " lights < " +
                          std::to_string(n) + " coefficients; use lambda > 0");

    using MatN = Eigen::MatrixXd;
    using VecN = Eigen::VectorXd;
    std::array<MatN, 3> lmat;  // K x n per channel
    std::array<MatN, 3> gram;
    std::array<Eigen::LLT<MatN>, 3> solvers;
    for (int c = 0; c < 3; ++c) {
        lmat[c].resize(static_cast<Eigen::Index>(k_count), n);
        for (std::size_t k = 0; k < k_count; ++k)
            for (int i = 0; i < n; ++i)
                lmat[c](static_cast<Eigen::Index>(k), i) = lights[k][c][i];
        gram[c] = lmat[c].transpose() * lmat[c];
        gram[c].diagonal().array() += cfg.lambda;
        if (cfg.lambda == 0.0) {
            Eigen::SelfAdjointEigenSolver<MatN> eig(gram[c], Eigen::EigenvaluesOnly);
            const double hi = eig.eigenvalues().maxCoeff();
            const double lo = eig.eigenvalues().minCoeff();
            if (!(hi > 0.0) || lo <= 1e-12 * hi)
                throw SolverError("normal matrix for channel " + std::to_string(c) +
                                  " is singular; use lambda > 0");
        }
        solvers[c].compute(gram[c]);
        if (solvers[c].info() != Eigen::Success)
            throw SolverError("normal matrix factorization failed; use lambda > 0");
    }

    std::vector<Image> shading;
    shading.reserve(k_count);
    for (const auto &l : lights)
        shading.push_back(shade(scene.transport, l));

    ResidualMap e(scene.width(), scene.height(), degree);
    double max_residual = 0.0;
    std::mutex residual_mutex;
    parallel_for(e.pixel_count(), worker_count(cfg.workers), [&](std::size_t p) {
        const double m = scene.mask.at(p, 0);
        if (m <= 0.0)
            return;
        double local_max = 0.0;
        VecN r(static_cast<Eigen::Index>(k_count));
        for (int c = 0; c < 3; ++c) {
            const double rho = scene.albedo.at(p, c);
            for (std::size_t k = 0; k < k_count; ++k)
                r[static_cast<Eigen::Index>(k)] = pt_images[k].at(p, c) / m - rho * shading[k].at(p, c);
            const VecN b = lmat[c].transpose() * r;
            const VecN sol = solvers[c].solve(b);
            local_max = std::max(local_max, (gram[c] * sol - b).norm() / std::max(1.0, b.norm()));
            for (int i = 0; i < n; ++i)
                e.coeff(p, c, i) = sol[i];
        }
        std::lock_guard lock(residual_mutex);
        max_residual = std::max(max_residual, local_max);
    });
    if (!(max_residual <= cfg.tolerance))
        throw NumericError("residual solve missed the tolerance (normal-equation residual " +
                           std::to_string(max_residual) + ")");

    if (report) {
        report->l2_before.clear();
        report->l2_after.clear();
        report->max_normal_residual = max_residual;
        DecomposedScene base = scene;
        base.residual = ResidualMap(scene.width(), scene.height(), degree);
        DecomposedScene fitted = scene;
        fitted.residual = e;
        for (std::size_t k = 0; k < k_count; ++k) {
            report->l2_before.push_back(masked_l2_x100(scene, reconstruct(base, lights[k]), pt_images[k]));
            report->l2_after.push_back(masked_l2_x100(scene, reconstruct(fitted, lights[k]), pt_images[k]));
        }
    }
    return e;
}

std::vector<double> default_lambda_candidates() {
    std::vector<double> out;
    for (int e = -8; e <= 8; ++e)
        out.push_back(std::pow(10.0, 0.5 * e));
    return out;
}

LambdaSelection select_lambda(const DecomposedScene &scene, std::span<const Image> pt_images,
                              std::span<const LightCoeffs> lights, std::span<const double> candidates, int folds,
                              int workers) {
    if (candidates.empty())
        throw ArgumentError("lambda selection needs candidates");
    if (folds < 2 || static_cast<std::size_t>(folds) > lights.size())
        throw ArgumentError("cross-validation needs 2 <= folds <= number of lights");
    if (pt_images.size() != lights.size())
        throw ArgumentError("residual fit needs one ground-truth image per light");
    LambdaSelection sel;
    sel.candidates.assign(candidates.begin(), candidates.end());
    sel.validation_error.assign(candidates.size(), 0.0);
    std::size_t samples = 0;
    for (int f = 0; f < folds; ++f) {
        std::vector<Image> train_pt;
        std::vector<LightCoeffs> train_l;
        std::vector<std::size_t> val;
        for (std::size_t k = 0; k < lights.size(); ++k) {
            if (static_cast<int>(k % folds) == f) {
                val.push_back(k);
            } else {
                train_pt.push_back(pt_images[k]);
                train_l.push_back(lights[k]);
            }
        }
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            ResidualFitConfig cfg;
            cfg.lambda = candidates[c];
            cfg.workers = workers;
            DecomposedScene fitted = scene;
            fitted.residual = fit_residual(scene, train_pt, train_l, cfg);
            for (std::size_t k : val)
                sel.validation_error[c] +=
                    masked_l2_x100(scene, clamp_unit(reconstruct(fitted, lights[k])), clamp_unit(pt_images[k]));
        }
        samples += val.size();
    }
    std::size_t best = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        sel.validation_error[c] /= static_cast<double>(samples) * 100.0;
        if (sel.validation_error[c] < sel.validation_error[best])
            best = c;
    }
    sel.lambda = candidates[best];
    return sel;
}

}  // namespace prt
