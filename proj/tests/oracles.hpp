// Test-only brute-force reference implementations and corpus builders.
// These stay independent of the library's metric code paths: they histogram
// exact sample values and sum definitions directly.
#ifndef TRIFUSE_TESTS_ORACLES_HPP
#define TRIFUSE_TESTS_ORACLES_HPP

#include "trifuse/image.hpp"
#include "trifuse/image_ops.hpp"
#include "trifuse/rng.hpp"

#include <cmath>
#include <map>

namespace oracles {

using trifuse::Image;
using trifuse::Plane;
using trifuse::Rng;

inline double brute_entropy(const Image& img) {
    std::map<double, long> counts;
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) ++counts[img.px(i, j)];
    const double n = double(img.pixels());
    double en = 0.0;
    for (const auto& [v, c] : counts) en -= (c / n) * std::log2(c / n);
    return en;
}

inline double brute_mutual_information(const Image& a, const Image& b) {
    std::map<std::pair<double, double>, long> joint;
    std::map<double, long> ma, mb;
    for (int i = 0; i < a.height(); ++i)
        for (int j = 0; j < a.width(); ++j) {
            ++joint[{a.px(i, j), b.px(i, j)}];
            ++ma[a.px(i, j)];
            ++mb[b.px(i, j)];
        }
    const double n = double(a.pixels());
    double mi = 0.0;
    for (const auto& [xy, c] : joint) {
        const double pxy = c / n;
        const double px = ma[xy.first] / n;
        const double py = mb[xy.second] / n;
        mi += pxy * std::log2(pxy / (px * py));
    }
    return mi;
}

inline double brute_std_dev(const Image& img) {
    const double n = double(img.pixels());
    double mean = 0.0;
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) mean += img.px(i, j);
    mean /= n;
    double acc = 0.0;
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) acc += (img.px(i, j) - mean) * (img.px(i, j) - mean);
    return std::sqrt(acc / n);
}

inline double brute_spatial_frequency(const Image& img) {
    const int m = img.height(), n = img.width();
    double rf = 0.0, cf = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 1; j < n; ++j) {
            const double d = img.px(i, j) - img.px(i, j - 1);
            rf += d * d;
        }
    for (int i = 1; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const double d = img.px(i, j) - img.px(i - 1, j);
            cf += d * d;
        }
    rf = std::sqrt(rf / (double(m) * (n - 1)));
    cf = std::sqrt(cf / (double(m - 1) * n));
    return std::sqrt(rf * rf + cf * cf);
}

/// Textbook global histogram equalization over 256 integer levels.
inline Image global_he(const Image& img) {
    std::vector<long> hist(256, 0);
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j)
            ++hist[std::size_t(std::min(255, std::max(0, int(img.px(i, j)))))];
    long total = 0, cdf_min = 0;
    for (long h : hist) total += h;
    for (long h : hist)
        if (h > 0) {
            cdf_min = h;
            break;
        }
    std::vector<double> lut(256, 0.0);
    long cdf = 0;
    for (int v = 0; v < 256; ++v) {
        cdf += hist[std::size_t(v)];
        lut[std::size_t(v)] = cdf < cdf_min ? 0.0
                                            : std::floor(double(cdf - cdf_min) /
                                                             double(total - cdf_min) * 255.0 +
                                                         0.5);
    }
    Image out = img;
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j)
            out.px(i, j) = lut[std::size_t(std::min(255, std::max(0, int(img.px(i, j)))))];
    return out;
}

/// Random integer-valued image drawing from at most `levels` gray values.
inline Image random_levels_image(int w, int h, int levels, Rng& rng) {
    std::vector<double> palette;
    for (int k = 0; k < levels; ++k) palette.push_back(double(rng.below(256)));
    Plane p(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            p(i, j) = palette[std::size_t(rng.below(std::uint64_t(levels)))];
    return Image(std::move(p), {0.0, 255.0});
}

/// Locally stationary test raster: the texture statistics are the same in
/// every tile while the mean drifts slowly, which is the regime adaptive
/// equalization is designed for.
inline Image stationary_texture_image(int n, std::uint64_t seed, double drift_amp = 0.3,
                                      double tex_amp = 1.0) {
    Rng rng(seed);
    constexpr double kTau = 6.283185307179586;
    Plane p = Plane::Zero(n, n);
    const double dir = rng.uniform(0.0, kTau);
    const double fx = std::cos(dir) / (2.0 * n), fy = std::sin(dir) / (2.0 * n);
    const double ph = rng.uniform(0.0, kTau);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i, j) = drift_amp * std::cos(kTau * (fx * j + fy * i) + ph);
    for (int k = 0; k < 5; ++k) {
        const double period = rng.uniform(6.0, 24.0);
        const double th = rng.uniform(0.0, kTau);
        const double gx = std::cos(th) / period, gy = std::sin(th) / period;
        const double phase = rng.uniform(0.0, kTau);
        const double amp = tex_amp * rng.uniform(0.5, 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) p(i, j) += amp * std::cos(kTau * (gx * j + gy * i) + phase);
    }
    const double lo = p.minCoeff(), hi = p.maxCoeff();
    Image img(20.0 + (p - lo) * (215.0 / (hi - lo)), {0.0, 255.0});
    img.px = trifuse::round_half_away(img.px);
    return img;
}

}  // namespace oracles

#endif
