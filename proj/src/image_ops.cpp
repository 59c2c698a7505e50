#include "trifuse/image_ops.hpp"

#include <algorithm>
#include <cmath>

namespace trifuse {

Image to_luminance(const ColorImage& rgb) {
    require(rgb.r.rows() == rgb.g.rows() && rgb.g.rows() == rgb.b.rows() &&
                rgb.r.cols() == rgb.g.cols() && rgb.g.cols() == rgb.b.cols(),
            "to_luminance: mismatched plane dimensions");
    Plane y = 0.299 * rgb.r + 0.587 * rgb.g + 0.114 * rgb.b;
    return Image(std::move(y), rgb.range);
}

namespace {

Plane resize_plane(const Plane& src, int w, int h) {
    const int sw = static_cast<int>(src.cols());
    const int sh = static_cast<int>(src.rows());
    Plane out(h, w);
    const double sx = (w > 1) ? double(sw - 1) / double(w - 1) : 0.0;
    const double sy = (h > 1) ? double(sh - 1) / double(h - 1) : 0.0;
    for (int i = 0; i < h; ++i) {
        const double fy = i * sy;
        const int y0 = std::min(static_cast<int>(fy), sh - 1);
        const int y1 = std::min(y0 + 1, sh - 1);
        const double wy = fy - y0;
        for (int j = 0; j < w; ++j) {
            const double fx = j * sx;
            const int x0 = std::min(static_cast<int>(fx), sw - 1);
            const int x1 = std::min(x0 + 1, sw - 1);
            const double wx = fx - x0;
            const double top = src(y0, x0) * (1.0 - wx) + src(y0, x1) * wx;
            const double bot = src(y1, x0) * (1.0 - wx) + src(y1, x1) * wx;
            out(i, j) = top * (1.0 - wy) + bot * wy;
        }
    }
    return out;
}

}  // namespace

Image resize_bilinear(const Image& img, int width, int height) {
    require(width >= 1 && height >= 1, "resize_bilinear: target must be >= 1x1");
    return Image(resize_plane(img.px, width, height), img.range);
}

ColorImage resize_bilinear(const ColorImage& img, int width, int height) {
    require(width >= 1 && height >= 1, "resize_bilinear: target must be >= 1x1");
    ColorImage out;
    out.r = resize_plane(img.r, width, height);
    out.g = resize_plane(img.g, width, height);
    out.b = resize_plane(img.b, width, height);
    out.range = img.range;
    return out;
}

Plane replicate_pad(const Plane& p, int r) {
    const int h = static_cast<int>(p.rows());
    const int w = static_cast<int>(p.cols());
    Plane out(h + 2 * r, w + 2 * r);
    out.block(r, r, h, w) = p;
    for (int k = 0; k < r; ++k) {
        out.block(k, r, 1, w) = p.row(0);
        out.block(h + r + k, r, 1, w) = p.row(h - 1);
    }
    for (int k = 0; k < r; ++k) {
        out.col(k) = out.col(r);
        out.col(w + r + k) = out.col(w + r - 1);
    }
    return out;
}

SobelResult sobel_gradient(const Plane& img) {
    const int h = static_cast<int>(img.rows());
    const int w = static_cast<int>(img.cols());
    const Plane p = replicate_pad(img, 1);
    SobelResult res;
    // gx responds to horizontal change, gy to vertical change.
    res.gx = (p.block(0, 2, h, w) - p.block(0, 0, h, w)) +
             2.0 * (p.block(1, 2, h, w) - p.block(1, 0, h, w)) +
             (p.block(2, 2, h, w) - p.block(2, 0, h, w));
    res.gy = (p.block(2, 0, h, w) - p.block(0, 0, h, w)) +
             2.0 * (p.block(2, 1, h, w) - p.block(0, 1, h, w)) +
             (p.block(2, 2, h, w) - p.block(0, 2, h, w));
    res.magnitude = (res.gx.square() + res.gy.square()).sqrt();
    return res;
}

Eigen::VectorXd gaussian_kernel(double sigma, int radius) {
    Eigen::VectorXd k(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i)
        k(i + radius) = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k /= k.sum();
    return k;
}

Plane gaussian_filter(const Plane& p, double sigma, int radius) {
    const Eigen::VectorXd k = gaussian_kernel(sigma, radius);
    const int h = static_cast<int>(p.rows());
    const int w = static_cast<int>(p.cols());
    const Plane padded = replicate_pad(p, radius);
    Plane horiz = Plane::Zero(h + 2 * radius, w);
    for (int t = 0; t < k.size(); ++t)
        horiz += k(t) * padded.block(0, t, h + 2 * radius, w);
    Plane out = Plane::Zero(h, w);
    for (int t = 0; t < k.size(); ++t)
        out += k(t) * horiz.block(t, 0, h, w);
    return out;
}

Plane box_mean(const Plane& p, int radius) {
    const int h = static_cast<int>(p.rows());
    const int w = static_cast<int>(p.cols());
    // Integral image with a zero top row / left column.
    Eigen::MatrixXd integral = Eigen::MatrixXd::Zero(h + 1, w + 1);
    for (int i = 0; i < h; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < w; ++j) {
            rowsum += p(i, j);
            integral(i + 1, j + 1) = integral(i, j + 1) + rowsum;
        }
    }
    Plane out(h, w);
    for (int i = 0; i < h; ++i) {
        const int y0 = std::max(0, i - radius);
        const int y1 = std::min(h - 1, i + radius);
        for (int j = 0; j < w; ++j) {
            const int x0 = std::max(0, j - radius);
            const int x1 = std::min(w - 1, j + radius);
            const double sum = integral(y1 + 1, x1 + 1) - integral(y0, x1 + 1) -
                               integral(y1 + 1, x0) + integral(y0, x0);
            out(i, j) = sum / double((y1 - y0 + 1) * (x1 - x0 + 1));
        }
    }
    return out;
}

Plane laplacian3(const Plane& p) {
    const int h = static_cast<int>(p.rows());
    const int w = static_cast<int>(p.cols());
    const Plane q = replicate_pad(p, 1);
    return q.block(0, 1, h, w) + q.block(2, 1, h, w) + q.block(1, 0, h, w) +
           q.block(1, 2, h, w) - 4.0 * q.block(1, 1, h, w);
}

Plane round_half_away(const Plane& p) {
    return p.unaryExpr([](double v) {
        return v >= 0.0 ? std::floor(v + 0.5) : std::ceil(v - 0.5);
    });
}

double clamp_to_range(Image& img) {
    const double lo = img.range.lo, hi = img.range.hi;
    double overshoot = 0.0;
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) {
            double& v = img.px(i, j);
            if (v < lo) {
                overshoot = std::max(overshoot, lo - v);
                v = lo;
            } else if (v > hi) {
                overshoot = std::max(overshoot, v - hi);
                v = hi;
            }
        }
    return overshoot;
}

Image to_common8(const Image& img, bool quantize) {
    Image out = img;
    if (!(img.range.lo == 0.0 && img.range.hi == 255.0)) {
        const double span = img.range.span();
        out.px = (img.px - img.range.lo) * (255.0 / (span > 0 ? span : 1.0));
        out.range = {0.0, 255.0};
    }
    if (quantize) out.px = round_half_away(out.px).min(255.0).max(0.0);
    return out;
}

ColorImage reattach_chroma(const ColorImage& rgb, const Image& y) {
    require(rgb.width() == y.width() && rgb.height() == y.height(),
            "reattach_chroma: dimensions differ");
    const Image oldy = to_luminance(rgb);
    // BT.601: Cb = (B - Y) * 0.564, Cr = (R - Y) * 0.713.
    const Plane cb = (rgb.b - oldy.px) * 0.564;
    const Plane cr = (rgb.r - oldy.px) * 0.713;
    ColorImage out;
    out.r = y.px + cr / 0.713;
    out.b = y.px + cb / 0.564;
    out.g = (y.px - 0.299 * out.r - 0.114 * out.b) / 0.587;
    out.range = rgb.range;
    return out;
}

}  // namespace trifuse
