#ifndef TRIFUSE_GUIDED_HPP
#define TRIFUSE_GUIDED_HPP

#include "trifuse/image.hpp"

#include <array>

namespace trifuse {

/// Local-linear-model edge-preserving filter:
///   a = cov(G,I) / (var(G) + eps),  b = mean(I) - a mean(G),
///   out = mean(a) G + mean(b)
/// over (2r+1)^2 box windows computed with integral images.
Plane guided_filter(const Plane& guide, const Plane& input, int radius, double eps);
Image guided_filter(const Image& guide, const Image& input, int radius, double eps);

struct GffParams {
    int two_scale_radius = 15;    // 31x31 box blur for the base layer
    double saliency_sigma = 5.0;  // smoothing of |Laplacian|
    int saliency_radius = 5;
    int base_radius = 45;
    double base_eps = 0.3;  // on unit-range data
    int detail_radius = 7;
    double detail_eps = 1e-6;
};

/// Per-layer refined weight maps (unit-sum at every pixel).
struct GffWeights {
    std::array<Plane, 3> base;
    std::array<Plane, 3> detail;
};

/// Two-scale guided-filter fusion of three inputs: box-blur base/detail
/// split, argmax-of-saliency binary weights (ties to the lowest input index),
/// guided-filter refinement per layer, renormalization, weighted recombine.
/// Operates internally on unit-range data; eps values assume that scale.
Image gff_fuse(const std::array<Image, 3>& inputs, const GffParams& params = {},
               GffWeights* weights_out = nullptr);

}  // namespace trifuse

#endif
