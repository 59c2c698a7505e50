#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "trifuse/guided.hpp"
#include "trifuse/image_ops.hpp"

using namespace trifuse;

TEST_CASE("guided_filter keeps constant inputs") {
    Rng rng(3);
    Plane guide(24, 24);
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) guide(i, j) = rng.uniform(0.0, 1.0);
    const Plane input = Plane::Constant(24, 24, 0.42);
    const Plane out = guided_filter(guide, input, 4, 1e-3);
    CHECK((out - 0.42).abs().maxCoeff() < 1e-12);
}

TEST_CASE("guided_filter with tiny eps reproduces a piecewise-constant self-guide") {
    Plane img(32, 32);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) img(i, j) = (j < 16) ? 0.2 : 0.8;
    const Plane out = guided_filter(img, img, 4, 1e-9);
    CHECK((out - img).abs().maxCoeff() <= 1e-3);
}

TEST_CASE("guided_filter with huge eps approaches the double box filter") {
    Rng rng(8);
    Plane img(40, 40);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) img(i, j) = rng.uniform(0.0, 1.0);
    const Plane out = guided_filter(img, img, 3, 1e12);
    const Plane twice = box_mean(box_mean(img, 3), 3);
    CHECK((out - twice).abs().maxCoeff() <= 1e-6);
}

TEST_CASE("guided_filter validates arguments") {
    const Plane p = Plane::Zero(8, 8);
    CHECK_THROWS_AS(guided_filter(p, Plane::Zero(8, 9), 2, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(guided_filter(p, p, 0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(guided_filter(p, p, 2, 0.0), std::invalid_argument);
}

TEST_CASE("gff_fuse of identical inputs returns the input") {
    const Image img = oracles::stationary_texture_image(64, 17);
    const Image fused = gff_fuse({img, img, img});
    CHECK((fused.px - img.px).abs().maxCoeff() <= 1e-4);
}

TEST_CASE("gff_fuse weight maps are nonnegative and sum to one") {
    const Image a = oracles::stationary_texture_image(64, 31);
    const Image b = oracles::stationary_texture_image(64, 32);
    const Image c = oracles::stationary_texture_image(64, 33);
    GffWeights wt;
    (void)gff_fuse({a, b, c}, {}, &wt);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            double sb = 0.0, sd = 0.0;
            for (int k = 0; k < 3; ++k) {
                CHECK(wt.base[std::size_t(k)](i, j) >= -1e-12);
                CHECK(wt.detail[std::size_t(k)](i, j) >= -1e-12);
                sb += wt.base[std::size_t(k)](i, j);
                sd += wt.detail[std::size_t(k)](i, j);
            }
            CHECK(sb == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(sd == doctest::Approx(1.0).epsilon(1e-6));
        }
}

TEST_CASE("gff_fuse is permutation invariant away from saliency ties") {
    const Image a = oracles::stationary_texture_image(64, 41);
    const Image b = oracles::stationary_texture_image(64, 42);
    const Image c = oracles::stationary_texture_image(64, 43);
    const Image base = gff_fuse({a, b, c});
    const Image perm = gff_fuse({c, a, b});
    CHECK((perm.px - base.px).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("a flat input gets no detail weight where others are textured") {
    const Image a = oracles::stationary_texture_image(64, 51);
    const Image b = oracles::stationary_texture_image(64, 52);
    const Image flat = Image::constant(64, 64, 130.0);
    GffWeights wt;
    (void)gff_fuse({a, b, flat}, {}, &wt);

    // Textured region: pixels with clearly nonzero saliency in a or b.
    const Plane sal_a = gaussian_filter(laplacian3(a.px / 255.0).abs(), 5.0, 5);
    const Plane sal_b = gaussian_filter(laplacian3(b.px / 255.0).abs(), 5.0, 5);
    double acc = 0.0;
    long n = 0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j)
            if (sal_a(i, j) > 1e-3 || sal_b(i, j) > 1e-3) {
                acc += wt.detail[2](i, j);
                ++n;
            }
    REQUIRE(n > 500);
    CHECK(acc / double(n) < 0.05);
}

TEST_CASE("gff_fuse rejects mismatched inputs") {
    const Image a = Image::constant(32, 32, 1.0);
    const Image b = Image::constant(32, 30, 1.0);
    CHECK_THROWS_AS(gff_fuse({a, b, a}), std::invalid_argument);
}
