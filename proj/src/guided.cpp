#include "trifuse/guided.hpp"

#include "trifuse/image_ops.hpp"

#include <cmath>

namespace trifuse {

Plane guided_filter(const Plane& guide, const Plane& input, int radius, double eps) {
    require(guide.rows() == input.rows() && guide.cols() == input.cols(),
            "guided_filter: dimensions differ");
    require(radius >= 1 && eps > 0.0, "guided_filter: need radius >= 1 and eps > 0");
    const Plane mean_g = box_mean(guide, radius);
    const Plane mean_i = box_mean(input, radius);
    const Plane corr_gg = box_mean(guide * guide, radius);
    const Plane corr_gi = box_mean(guide * input, radius);
    const Plane var_g = corr_gg - mean_g.square();
    const Plane cov_gi = corr_gi - mean_g * mean_i;
    const Plane a = cov_gi / (var_g + eps);
    const Plane b = mean_i - a * mean_g;
    return box_mean(a, radius) * guide + box_mean(b, radius);
}

Image guided_filter(const Image& guide, const Image& input, int radius, double eps) {
    return Image(guided_filter(guide.px, input.px, radius, eps), input.range);
}

Image gff_fuse(const std::array<Image, 3>& inputs, const GffParams& params,
               GffWeights* weights_out) {
    require(inputs[0].same_size(inputs[1]) && inputs[1].same_size(inputs[2]),
            "gff_fuse: dimensions differ");
    const int h = inputs[0].height(), w = inputs[0].width();
    const ValueRange range = inputs[0].range;
    const double span = range.span() > 0 ? range.span() : 1.0;

    std::array<Plane, 3> x, base, detail, saliency;
    for (int k = 0; k < 3; ++k) {
        x[std::size_t(k)] = (inputs[std::size_t(k)].px - range.lo) / span;  // unit range
        base[std::size_t(k)] = box_mean(x[std::size_t(k)], params.two_scale_radius);
        detail[std::size_t(k)] = x[std::size_t(k)] - base[std::size_t(k)];
        saliency[std::size_t(k)] = gaussian_filter(laplacian3(x[std::size_t(k)]).abs(),
                                                   params.saliency_sigma, params.saliency_radius);
    }

    // Binary weights at the saliency argmax, ties to the lowest index.
    std::array<Plane, 3> pmap;
    for (auto& p : pmap) p = Plane::Zero(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            int best = 0;
            for (int k = 1; k < 3; ++k)
                if (saliency[std::size_t(k)](i, j) > saliency[std::size_t(best)](i, j)) best = k;
            pmap[std::size_t(best)](i, j) = 1.0;
        }

    GffWeights wt;
    for (int k = 0; k < 3; ++k) {
        wt.base[std::size_t(k)] =
            guided_filter(x[std::size_t(k)], pmap[std::size_t(k)], params.base_radius,
                          params.base_eps)
                .max(0.0)
                .min(1.0);
        wt.detail[std::size_t(k)] =
            guided_filter(x[std::size_t(k)], pmap[std::size_t(k)], params.detail_radius,
                          params.detail_eps)
                .max(0.0)
                .min(1.0);
    }
    auto renormalize = [&](std::array<Plane, 3>& maps) {
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) {
                const double sum = maps[0](i, j) + maps[1](i, j) + maps[2](i, j);
                if (sum > 1e-12) {
                    for (auto& m : maps) m(i, j) /= sum;
                } else {
                    for (auto& m : maps) m(i, j) = 1.0 / 3.0;
                }
            }
    };
    renormalize(wt.base);
    renormalize(wt.detail);

    Plane fused = Plane::Zero(h, w);
    for (int k = 0; k < 3; ++k)
        fused += wt.base[std::size_t(k)] * base[std::size_t(k)] +
                 wt.detail[std::size_t(k)] * detail[std::size_t(k)];

    if (weights_out) *weights_out = std::move(wt);
    return Image(fused * span + range.lo, range);
}

}  // namespace trifuse
