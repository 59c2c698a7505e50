#include "trifuse/pyramid.hpp"

#include "trifuse/image_ops.hpp"

#include <algorithm>
#include <cmath>

namespace trifuse {

namespace {

// Separable [1 4 6 4 1]/16 smoothing with replicate borders.
Plane binomial5(const Plane& p) {
    const int h = int(p.rows()), w = int(p.cols());
    const Plane q = replicate_pad(p, 2);
    Plane horiz(h + 4, w);
    horiz = q.block(0, 0, h + 4, w) + 4.0 * q.block(0, 1, h + 4, w) +
            6.0 * q.block(0, 2, h + 4, w) + 4.0 * q.block(0, 3, h + 4, w) +
            q.block(0, 4, h + 4, w);
    Plane out = (horiz.block(0, 0, h, w) + 4.0 * horiz.block(1, 0, h, w) +
                 6.0 * horiz.block(2, 0, h, w) + 4.0 * horiz.block(3, 0, h, w) +
                 horiz.block(4, 0, h, w)) /
                256.0;
    return out;
}

inline int clampi(int v, int hi) { return std::min(std::max(v, 0), hi); }

}  // namespace

Plane pyr_down(const Plane& p) {
    const Plane s = binomial5(p);
    const int h = int((p.rows() + 1) / 2), w = int((p.cols() + 1) / 2);
    Plane out(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) out(i, j) = s(2 * i, 2 * j);
    return out;
}

Plane pyr_up(const Plane& p, int target_h, int target_w) {
    const int sh = int(p.rows()), sw = int(p.cols());
    // Columns first: even outputs blend [1 6 1]/8, odd outputs blend [1 1]/2.
    Plane cols(sh, target_w);
    for (int i = 0; i < sh; ++i)
        for (int j = 0; j < target_w; ++j) {
            if (j % 2 == 0) {
                const int k = j / 2;
                cols(i, j) = (p(i, clampi(k - 1, sw - 1)) + 6.0 * p(i, clampi(k, sw - 1)) +
                              p(i, clampi(k + 1, sw - 1))) /
                             8.0;
            } else {
                const int k = j / 2;
                cols(i, j) = 0.5 * (p(i, clampi(k, sw - 1)) + p(i, clampi(k + 1, sw - 1)));
            }
        }
    Plane out(target_h, target_w);
    for (int i = 0; i < target_h; ++i) {
        if (i % 2 == 0) {
            const int k = i / 2;
            out.row(i) = (cols.row(clampi(k - 1, sh - 1)) + 6.0 * cols.row(clampi(k, sh - 1)) +
                          cols.row(clampi(k + 1, sh - 1))) /
                         8.0;
        } else {
            const int k = i / 2;
            out.row(i) = 0.5 * (cols.row(clampi(k, sh - 1)) + cols.row(clampi(k + 1, sh - 1)));
        }
    }
    return out;
}

Pyramid analyze(const Image& img, int levels) {
    require(levels >= 1, "analyze: need at least one level");
    require(std::min(img.width(), img.height()) >= (1 << levels),
            "analyze: too many levels for image size");
    Pyramid pyr;
    Plane current = img.px;
    for (int k = 0; k < levels; ++k) {
        Plane next = pyr_down(current);
        pyr.details.push_back(current -
                              pyr_up(next, int(current.rows()), int(current.cols())));
        current = std::move(next);
    }
    pyr.base = std::move(current);
    return pyr;
}

Image synthesize(const Pyramid& p, ValueRange range) {
    Plane current = p.base;
    for (int k = p.levels() - 1; k >= 0; --k) {
        const Plane& d = p.details[std::size_t(k)];
        current = d + pyr_up(current, int(d.rows()), int(d.cols()));
    }
    return Image(std::move(current), range);
}

namespace {

// Largest-magnitude coefficient; ties prefer the larger signed value so the
// selection is a pure function of the value set.
inline double pick_abs_max(double a, double b, double c) {
    auto better = [](double x, double y) {
        const double ax = std::abs(x), ay = std::abs(y);
        return ax > ay || (ax == ay && x > y);
    };
    double best = a;
    if (better(b, best)) best = b;
    if (better(c, best)) best = c;
    return best;
}

// Order-independent three-way sum: add in sorted order.
inline double sym_sum3(double a, double b, double c) {
    if (a < b) std::swap(a, b);
    if (b < c) std::swap(b, c);
    if (a < b) std::swap(a, b);
    return (a + b) + c;
}

}  // namespace

Image lp_fuse(const std::array<Image, 3>& inputs, int levels, const FusionRule& rule) {
    require(inputs[0].same_size(inputs[1]) && inputs[1].same_size(inputs[2]),
            "lp_fuse: dimensions differ");
    const std::array<Pyramid, 3> pyrs = {analyze(inputs[0], levels), analyze(inputs[1], levels),
                                         analyze(inputs[2], levels)};
    Pyramid fused;
    for (int k = 0; k < levels; ++k) {
        const Plane& d0 = pyrs[0].details[std::size_t(k)];
        const Plane& d1 = pyrs[1].details[std::size_t(k)];
        const Plane& d2 = pyrs[2].details[std::size_t(k)];
        Plane d(d0.rows(), d0.cols());
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j)
                d(i, j) = pick_abs_max(d0(i, j), d1(i, j), d2(i, j));
        fused.details.push_back(std::move(d));
    }

    const Plane& b0 = pyrs[0].base;
    const Plane& b1 = pyrs[1].base;
    const Plane& b2 = pyrs[2].base;
    Plane base(b0.rows(), b0.cols());
    if (rule.base == FusionRule::Base::Mean) {
        for (int i = 0; i < base.rows(); ++i)
            for (int j = 0; j < base.cols(); ++j)
                base(i, j) = sym_sum3(b0(i, j), b1(i, j), b2(i, j)) / 3.0;
    } else {
        // Local-energy weighting of the base bands.
        const std::array<Plane, 3> energy = {box_mean(b0.square(), 3), box_mean(b1.square(), 3),
                                             box_mean(b2.square(), 3)};
        for (int i = 0; i < base.rows(); ++i)
            for (int j = 0; j < base.cols(); ++j) {
                const double wsum = sym_sum3(energy[0](i, j), energy[1](i, j), energy[2](i, j));
                if (wsum <= 0.0) {
                    base(i, j) = sym_sum3(b0(i, j), b1(i, j), b2(i, j)) / 3.0;
                } else {
                    base(i, j) = sym_sum3(energy[0](i, j) * b0(i, j), energy[1](i, j) * b1(i, j),
                                          energy[2](i, j) * b2(i, j)) /
                                 wsum;
                }
            }
    }
    fused.base = std::move(base);
    return synthesize(fused, inputs[0].range);
}

}  // namespace trifuse
