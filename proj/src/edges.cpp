#include "trifuse/edges.hpp"

#include "trifuse/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace trifuse {

namespace {

double percentile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    const std::size_t k = std::size_t(q * double(v.size() - 1) + 0.5);
    std::nth_element(v.begin(), v.begin() + std::ptrdiff_t(k), v.end());
    return v[k];
}

}  // namespace

EdgeMask canny(const Image& img, const CannyConfig& cfg) {
    const int h = img.height(), w = img.width();
    const int radius = std::max(1, int(std::ceil(3.0 * cfg.sigma)));
    const Plane smooth = gaussian_filter(img.px, cfg.sigma, radius);
    const SobelResult grad = sobel_gradient(smooth);

    // Non-maximum suppression along the quantized gradient direction.
    Plane nms = Plane::Zero(h, w);
    for (int i = 1; i < h - 1; ++i)
        for (int j = 1; j < w - 1; ++j) {
            const double m = grad.magnitude(i, j);
            if (m == 0.0) continue;
            const double gx = grad.gx(i, j), gy = grad.gy(i, j);
            double m1, m2;
            const double ax = std::abs(gx), ay = std::abs(gy);
            if (ax >= 2.414 * ay) {  // ~horizontal gradient
                m1 = grad.magnitude(i, j - 1);
                m2 = grad.magnitude(i, j + 1);
            } else if (ay >= 2.414 * ax) {  // ~vertical
                m1 = grad.magnitude(i - 1, j);
                m2 = grad.magnitude(i + 1, j);
            } else if (gx * gy > 0.0) {  // diagonal \.
                m1 = grad.magnitude(i - 1, j - 1);
                m2 = grad.magnitude(i + 1, j + 1);
            } else {  // diagonal /
                m1 = grad.magnitude(i - 1, j + 1);
                m2 = grad.magnitude(i + 1, j - 1);
            }
            if (m >= m1 && m >= m2) nms(i, j) = m;
        }

    std::vector<double> mags;
    mags.reserve(std::size_t(h) * w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) mags.push_back(grad.magnitude(i, j));
    const double high = percentile(std::move(mags), cfg.high_percentile);
    const double low = cfg.low_fraction * high;

    EdgeMask mask = EdgeMask::Constant(h, w, false);
    if (high <= 0.0) return mask;  // flat image: no edges

    // Hysteresis: strong seeds grow through weak neighbors.
    std::vector<std::pair<int, int>> stack;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            if (nms(i, j) >= high) {
                mask(i, j) = true;
                stack.emplace_back(i, j);
            }
    while (!stack.empty()) {
        auto [i, j] = stack.back();
        stack.pop_back();
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                const int ni = i + di, nj = j + dj;
                if (ni < 0 || nj < 0 || ni >= h || nj >= w || mask(ni, nj)) continue;
                if (nms(ni, nj) >= low && nms(ni, nj) > 0.0) {
                    mask(ni, nj) = true;
                    stack.emplace_back(ni, nj);
                }
            }
    }
    return mask;
}

std::optional<double> edge_histogram_js(const Image& a, const Image& b, int bins,
                                        const CannyConfig& cfg) {
    require(a.same_size(b), "edge_histogram_js: dimensions differ");
    require(bins >= 2, "edge_histogram_js: need at least 2 bins");

    const EdgeMask ma = canny(a, cfg);
    const EdgeMask mb = canny(b, cfg);
    const SobelResult ga = sobel_gradient(a.px);
    const SobelResult gb = sobel_gradient(b.px);

    double maxmag = 0.0;
    std::uint64_t na = 0, nb = 0;
    for (int i = 0; i < a.height(); ++i)
        for (int j = 0; j < a.width(); ++j) {
            if (ma(i, j)) {
                maxmag = std::max(maxmag, ga.magnitude(i, j));
                ++na;
            }
            if (mb(i, j)) {
                maxmag = std::max(maxmag, gb.magnitude(i, j));
                ++nb;
            }
        }
    if (na == 0 || nb == 0) return std::nullopt;

    const double width = maxmag > 0.0 ? maxmag / double(bins) : 1.0;
    std::vector<double> p(std::size_t(bins), 0.0), q(std::size_t(bins), 0.0);
    auto bin_of = [&](double m) { return std::min(bins - 1, int(m / width)); };
    for (int i = 0; i < a.height(); ++i)
        for (int j = 0; j < a.width(); ++j) {
            if (ma(i, j)) p[std::size_t(bin_of(ga.magnitude(i, j)))] += 1.0;
            if (mb(i, j)) q[std::size_t(bin_of(gb.magnitude(i, j)))] += 1.0;
        }
    for (auto& v : p) v /= double(na);
    for (auto& v : q) v /= double(nb);

    auto kl_to_mid = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (int k = 0; k < bins; ++k) {
            if (u[std::size_t(k)] <= 0.0) continue;
            const double m = 0.5 * (u[std::size_t(k)] + v[std::size_t(k)]);
            s += u[std::size_t(k)] * std::log2(u[std::size_t(k)] / m);
        }
        return s;
    };
    return 0.5 * (kl_to_mid(p, q) + kl_to_mid(q, p));
}

}  // namespace trifuse
