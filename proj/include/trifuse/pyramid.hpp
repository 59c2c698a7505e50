#ifndef TRIFUSE_PYRAMID_HPP
#define TRIFUSE_PYRAMID_HPP

#include "trifuse/image.hpp"

#include <array>
#include <vector>

namespace trifuse {

/// Multi-scale band decomposition: detail bands (finest first) plus the
/// coarsest smoothed residual. synthesize(analyze(img)) reproduces img.
struct Pyramid {
    std::vector<Plane> details;
    Plane base;

    int levels() const { return static_cast<int>(details.size()); }
};

struct FusionRule {
    enum class Detail { AbsMax } detail = Detail::AbsMax;
    enum class Base { Mean, LocalEnergy } base = Base::Mean;
};

/// Smooth with the 5-tap binomial kernel [1 4 6 4 1]/16 (replicate borders)
/// and keep every other sample; sizes follow ceil(n/2).
Plane pyr_down(const Plane& p);

/// Interpolating upsample to an explicit target size; inverse companion of
/// pyr_down for band reconstruction.
Plane pyr_up(const Plane& p, int target_h, int target_w);

/// Band decomposition with `levels` detail bands.
Pyramid analyze(const Image& img, int levels);

/// Recombine bands; exact inverse of analyze on unmodified bands.
Image synthesize(const Pyramid& p, ValueRange range = {});

/// Three-input band fusion: per detail coefficient, keep the value of
/// largest magnitude (ties broken toward the larger signed value, so the
/// result is independent of input order); bases combine per rule.
Image lp_fuse(const std::array<Image, 3>& inputs, int levels, const FusionRule& rule = {});

}  // namespace trifuse

#endif
