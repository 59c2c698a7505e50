#ifndef TRIFUSE_EDGES_HPP
#define TRIFUSE_EDGES_HPP

#include "trifuse/image.hpp"

#include <optional>

namespace trifuse {

struct CannyConfig {
    double sigma = 1.4;            // pre-smoothing
    double high_percentile = 0.90; // of gradient magnitude
    double low_fraction = 0.4;     // low = low_fraction * high
};

using EdgeMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Canny edge mask: Gaussian smooth, Sobel, non-maximum suppression, double
/// threshold with hysteresis. Thresholds are percentile-based so the detector
/// is invariant to the image's level scale.
EdgeMask canny(const Image& img, const CannyConfig& cfg = {});

/// Jensen-Shannon divergence (log base 2, in [0,1]) between the histograms of
/// gradient magnitudes inside each image's Canny mask, using `bins` equal
/// width bins over the joint magnitude range. Empty masks make the comparison
/// undefined and return nullopt.
std::optional<double> edge_histogram_js(const Image& a, const Image& b, int bins = 64,
                                        const CannyConfig& cfg = {});

}  // namespace trifuse

#endif
