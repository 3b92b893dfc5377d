#include "prt/metrics.hpp"

#include "prt/error.hpp"

#include <algorithm>
#include <cmath>

namespace prt {

MetricReport image_metrics(const Image &a, const Image &b, const Image *mask) {
    if (!a.same_shape(b))
        throw ArgumentError("metric inputs differ in shape");
    if (mask && (mask->width() != a.width() || mask->height() != a.height() || mask->channels() < 1))
        throw ArgumentError("metric mask does not match the images");
    MetricReport r;
    r.masked = mask != nullptr;
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    std::size_t values = 0;
    for (std::size_t p = 0; p < a.pixel_count(); ++p) {
        if (mask && !(mask->at(p, 0) > kMaskThreshold))
            continue;
        ++r.pixel_count;
        for (int c = 0; c < a.channels(); ++c) {
            const double d = a.at(p, c) - b.at(p, c);
            abs_sum += std::abs(d);
            sq_sum += d * d;
        }
        values += a.channels();
    }
    if (values == 0)
        return r;
    const double mse = sq_sum / static_cast<double>(values);
    r.l1_x100 = 100.0 * abs_sum / static_cast<double>(values);
    r.l2_x100 = 100.0 * mse;
    r.psnr = mse > 0.0 ? std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse)) : kPsnrCap;
    return r;
}

Image clamp_unit(const Image &img) {
    Image out = img;
    for (double &v : out.data())
        v = std::clamp(v, 0.0, 1.0);
    return out;
}

double log_loss(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ArgumentError("log_loss inputs differ in shape");
    if (x.empty())
        return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = std::log1p(std::abs(x[i])) - std::log1p(std::abs(y[i]));
        s += d * d;
    }
    return s / static_cast<double>(x.size());
}

namespace {

double masked_l1(const Image &a, const Image &b, const Image &mask) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t p = 0; p < a.pixel_count(); ++p) {
        if (!(mask.at(p, 0) > kMaskThreshold))
            continue;
        for (int c = 0; c < a.channels(); ++c)
            sum += std::abs(a.at(p, c) - b.at(p, c));
        n += a.channels();
    }
    return n ? sum / static_cast<double>(n) : 0.0;
}

Image relit(const Image &albedo, const Image &s, const ResidualMap *e, const LightCoeffs &l) {
    Image out(s.width(), s.height(), 3);
    Image r;
    if (e)
        r = residual_image(*e, l);
    for (std::size_t p = 0; p < out.pixel_count(); ++p)
        for (int c = 0; c < 3; ++c)
            out.at(p, c) = albedo.at(p, c) * s.at(p, c) + (e ? r.at(p, c) : 0.0);
    return out;
}

}  // namespace

std::vector<LabeledLoss> render_loss_suite(const RenderTerms &pred, const RenderTerms &gt,
                                           const ResidualMap *e_pred, const Image &mask) {
    for (const RenderTerms *t : {&pred, &gt})
        if (!t->albedo || !t->transport || !t->light)
            throw ArgumentError("render loss terms must all be provided");
    const int w = gt.albedo->width();
    const int h = gt.albedo->height();
    for (const RenderTerms *t : {&pred, &gt}) {
        if (t->albedo->width() != w || t->albedo->height() != h || t->albedo->channels() != 3 ||
            t->transport->width() != w || t->transport->height() != h)
            throw ArgumentError("render loss buffers are inconsistent");
    }
    if (mask.width() != w || mask.height() != h)
        throw ArgumentError("render loss mask is inconsistent");
    if (e_pred && (e_pred->width() != w || e_pred->height() != h))
        throw ArgumentError("render loss residual is inconsistent");

    const RenderTerms *side[2] = {&pred, &gt};
    const char *name[2] = {"pred", "gt"};
    Image shading[2][2];  // [T][L]
    for (int t = 0; t < 2; ++t)
        for (int l = 0; l < 2; ++l)
            shading[t][l] = shade(*side[t]->transport, *side[l]->light);

    const Image &s_target = shading[1][1];
    const Image target = relit(*gt.albedo, s_target, e_pred, *gt.light);
    std::vector<LabeledLoss> out;
    for (int t = 0; t < 2; ++t)
        for (int l = 0; l < 2; ++l)
            out.push_back({std::string("shading[T=") + name[t] + ",L=" + name[l] + "]",
                           masked_l1(shading[t][l], s_target, mask)});
    for (int a = 0; a < 2; ++a)
        for (int t = 0; t < 2; ++t)
            for (int l = 0; l < 2; ++l)
                out.push_back({std::string("image[rho=") + name[a] + ",T=" + name[t] + ",L=" + name[l] + "]",
                               masked_l1(relit(*side[a]->albedo, shading[t][l], e_pred, *side[l]->light), target,
                                         mask)});
    return out;
}

}  // namespace prt
