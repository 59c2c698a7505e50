#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trifuse/image_ops.hpp"
#include "trifuse/rng.hpp"

using namespace trifuse;

namespace {

Plane random_plane(int h, int w, Rng& rng, double lo = 0.0, double hi = 255.0) {
    Plane p(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) p(i, j) = rng.uniform(lo, hi);
    return p;
}

}  // namespace

TEST_CASE("to_luminance BT.601 weights") {
    ColorImage c;
    c.r = Plane::Constant(2, 2, 90.0);
    c.g = Plane::Constant(2, 2, 90.0);
    c.b = Plane::Constant(2, 2, 90.0);
    CHECK(to_luminance(c).px(0, 0) == doctest::Approx(90.0).epsilon(1e-12));

    c.r.setConstant(255.0);
    c.g.setConstant(255.0);
    c.b.setConstant(255.0);
    CHECK(to_luminance(c).px(1, 1) == doctest::Approx(255.0).epsilon(1e-12));

    c.g.setConstant(0.0);
    c.b.setConstant(0.0);
    CHECK(to_luminance(c).px(0, 1) == doctest::Approx(76.245).epsilon(1e-12));
}

TEST_CASE("to_luminance stays within channel bounds") {
    Rng rng(11);
    ColorImage c;
    c.r = random_plane(9, 7, rng);
    c.g = random_plane(9, 7, rng);
    c.b = random_plane(9, 7, rng);
    const Image y = to_luminance(c);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 7; ++j) {
            const double lo = std::min({c.r(i, j), c.g(i, j), c.b(i, j)});
            const double hi = std::max({c.r(i, j), c.g(i, j), c.b(i, j)});
            CHECK(y.px(i, j) >= lo - 1e-12);
            CHECK(y.px(i, j) <= hi + 1e-12);
        }
}

TEST_CASE("to_luminance rejects mismatched planes") {
    ColorImage c;
    c.r = Plane::Zero(4, 4);
    c.g = Plane::Zero(4, 4);
    c.b = Plane::Zero(4, 5);
    CHECK_THROWS_AS(to_luminance(c), std::invalid_argument);
}

TEST_CASE("resize_bilinear identity and constants") {
    Rng rng(3);
    Image img(random_plane(6, 5, rng));
    const Image same = resize_bilinear(img, 5, 6);
    CHECK((same.px - img.px).abs().maxCoeff() == 0.0);

    const Image c = Image::constant(4, 3, 42.0);
    const Image up = resize_bilinear(c, 11, 9);
    CHECK(up.width() == 11);
    CHECK(up.height() == 9);
    CHECK((up.px - 42.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("resize_bilinear corner-aligned 1x2 -> 1x3") {
    Plane p(1, 2);
    p << 0.0, 100.0;
    const Image out = resize_bilinear(Image(p), 3, 1);
    CHECK(out.px(0, 0) == doctest::Approx(0.0));
    CHECK(out.px(0, 1) == doctest::Approx(50.0));
    CHECK(out.px(0, 2) == doctest::Approx(100.0));
}

TEST_CASE("resize_bilinear bounded by input extrema") {
    Rng rng(17);
    const Image img(random_plane(13, 9, rng));
    const Image out = resize_bilinear(img, 31, 17);
    CHECK(out.px.maxCoeff() <= img.px.maxCoeff() + 1e-12);
    CHECK(out.px.minCoeff() >= img.px.minCoeff() - 1e-12);
}

TEST_CASE("sobel_gradient on flat and ramp images") {
    const Image flat = Image::constant(8, 6, 7.0);
    const SobelResult g = sobel_gradient(flat);
    CHECK(g.gx.abs().maxCoeff() == 0.0);
    CHECK(g.gy.abs().maxCoeff() == 0.0);
    CHECK(g.magnitude.abs().maxCoeff() == 0.0);

    Plane ramp(6, 8);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 8; ++j) ramp(i, j) = double(j);
    const SobelResult gr = sobel_gradient(Image(ramp));
    CHECK(gr.gy.abs().maxCoeff() == 0.0);  // replicate keeps rows identical
    for (int i = 0; i < 6; ++i)
        for (int j = 1; j < 7; ++j) CHECK(gr.gx(i, j) == doctest::Approx(8.0));
}

TEST_CASE("sobel_gradient vertical step peaks at 4x255") {
    Plane step = Plane::Zero(7, 8);
    for (int i = 0; i < 7; ++i)
        for (int j = 4; j < 8; ++j) step(i, j) = 255.0;
    const SobelResult g = sobel_gradient(Image(step));
    for (int i = 1; i < 6; ++i) {
        CHECK(g.magnitude(i, 3) == doctest::Approx(1020.0));
        CHECK(g.magnitude(i, 4) == doctest::Approx(1020.0));
        CHECK(g.magnitude(i, 1) == doctest::Approx(0.0));
    }
}

TEST_CASE("sobel_gradient linearity under affine rescale") {
    Rng rng(23);
    const Image img(random_plane(10, 12, rng));
    Image scaled = img;
    scaled.px = 5.0 + 3.0 * img.px;
    const SobelResult g1 = sobel_gradient(img);
    const SobelResult g2 = sobel_gradient(scaled);
    CHECK((g2.gx - 3.0 * g1.gx).abs().maxCoeff() < 1e-9);
    CHECK((g2.gy - 3.0 * g1.gy).abs().maxCoeff() < 1e-9);
}

TEST_CASE("clamp_to_range reports the overshoot") {
    Image img(Plane::Constant(2, 2, 300.0), {0.0, 255.0});
    img.px(0, 0) = -20.0;
    const double overshoot = clamp_to_range(img);
    CHECK(overshoot == doctest::Approx(45.0));
    CHECK(img.px.maxCoeff() == 255.0);
    CHECK(img.px.minCoeff() == 0.0);
}

TEST_CASE("to_common8 rescales wide ranges") {
    Image img(Plane::Constant(3, 3, 32768.0), {0.0, 65535.0});
    const Image out = to_common8(img, true);
    CHECK(out.range.hi == 255.0);
    CHECK(out.px(1, 1) == doctest::Approx(128.0));  // rounds half away from zero
}

TEST_CASE("reattach_chroma keeps the new luminance") {
    Rng rng(31);
    ColorImage c;
    c.r = random_plane(8, 8, rng, 40, 200);
    c.g = random_plane(8, 8, rng, 40, 200);
    c.b = random_plane(8, 8, rng, 40, 200);
    Image y = to_luminance(c);
    y.px += 10.0;
    const ColorImage out = reattach_chroma(c, y);
    const Image y2 = to_luminance(out);
    CHECK((y2.px - y.px).abs().maxCoeff() < 1e-9);
}
