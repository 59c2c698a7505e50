#include "trifuse/synthetic.hpp"

#include "trifuse/rng.hpp"

#include <cmath>

namespace trifuse {

namespace {

constexpr double kTau = 6.283185307179586;

// Sum of `count` random-direction cosine gratings with unit peak amplitude.
Plane gratings(int w, int h, Rng& rng, int count, double min_period, double max_period) {
    Plane p = Plane::Zero(h, w);
    for (int k = 0; k < count; ++k) {
        const double period = rng.uniform(min_period, max_period);
        const double theta = rng.uniform(0.0, kTau);
        const double fx = std::cos(theta) / period;
        const double fy = std::sin(theta) / period;
        const double phase = rng.uniform(0.0, kTau);
        const double amp = rng.uniform(0.4, 1.0);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j)
                p(i, j) += amp * std::cos(kTau * (fx * j + fy * i) + phase);
        }
    const double peak = p.abs().maxCoeff();
    if (peak > 0.0) p /= peak;
    return p;
}

// A few smooth Gaussian bumps in [0, 1].
Plane blobs(int w, int h, Rng& rng, int count) {
    Plane p = Plane::Zero(h, w);
    for (int k = 0; k < count; ++k) {
        const double cx = rng.uniform(0.1, 0.9) * w;
        const double cy = rng.uniform(0.1, 0.9) * h;
        const double sx = rng.uniform(0.12, 0.3) * w;
        const double sy = rng.uniform(0.12, 0.3) * h;
        const double amp = rng.uniform(0.5, 1.0);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) {
                const double dx = (j - cx) / sx, dy = (i - cy) / sy;
                p(i, j) += amp * std::exp(-0.5 * (dx * dx + dy * dy));
            }
    }
    const double peak = p.maxCoeff();
    if (peak > 0.0) p /= peak;
    return p;
}

}  // namespace

Image synthetic_gray(int width, int height, std::uint64_t seed, double detail, double noise) {
    Rng rng(seed);
    const double dim = double(std::min(width, height));
    const Plane low = gratings(width, height, rng, 3, dim / 2.0, dim * 1.5);
    const Plane mid = gratings(width, height, rng, 3, dim / 8.0, dim / 3.0);
    const Plane fine = gratings(width, height, rng, 2, 4.0, dim / 10.0);
    const Plane bump = blobs(width, height, rng, 3);

    Plane p = 0.45 * low + 0.6 * bump + detail * (0.3 * mid + 0.15 * fine);
    if (noise > 0.0)
        for (int i = 0; i < height; ++i)
            for (int j = 0; j < width; ++j) p(i, j) += noise * (rng.uniform() - 0.5);

    const double lo = p.minCoeff(), hi = p.maxCoeff();
    const double span = hi > lo ? hi - lo : 1.0;
    return Image(10.0 + (p - lo) * (235.0 / span), {0.0, 255.0});
}

Sample synthetic_scene(int width, int height, std::uint64_t seed) {
    Rng rng(seed * 2654435761ULL + 17);
    const double dim = double(std::min(width, height));

    const Plane structure = blobs(width, height, rng, 4);
    const Plane coarse = gratings(width, height, rng, 2, dim / 3.0, dim);
    const Plane texture = gratings(width, height, rng, 4, 3.0, 10.0);
    const Plane thermal_blobs = blobs(width, height, rng, 3);

    Sample s;
    s.rgb.range = {0.0, 255.0};
    // Smooth visible band: broad structure only, no fine texture.
    const Plane lum = 115.0 + 55.0 * structure + 15.0 * coarse;
    s.rgb.r = (lum * rng.uniform(0.85, 1.0)).min(255.0).max(0.0);
    s.rgb.g = (lum * rng.uniform(0.9, 1.05)).min(255.0).max(0.0);
    s.rgb.b = (lum * rng.uniform(0.75, 0.95)).min(255.0).max(0.0);

    // Darker thermal band whose fine texture survives only at crushed
    // contrast; contrast expansion recovers it.
    Plane th = 55.0 + 45.0 * thermal_blobs + 4.0 * texture;
    s.thermal = Image(th.min(255.0).max(0.0), {0.0, 255.0});
    s.band = ThermalBand::LWIR;
    return s;
}

std::vector<Sample> synthetic_dataset(int count, int width, int height, std::uint64_t seed) {
    std::vector<Sample> out;
    out.reserve(std::size_t(count));
    for (int k = 0; k < count; ++k) {
        Sample s = synthetic_scene(width, height, seed + std::uint64_t(k) * 1000003ULL);
        char id[16];
        std::snprintf(id, sizeof id, "scene%03d", k);
        s.id = id;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace trifuse
