#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "trifuse/clahe.hpp"
#include "trifuse/image_ops.hpp"
#include "trifuse/metrics.hpp"
#include "trifuse/rng.hpp"

#include <numeric>

using namespace trifuse;

TEST_CASE("clip_histogram leaves compliant histograms alone") {
    const std::vector<std::uint64_t> hist = {4, 6, 5, 5};
    CHECK(clip_histogram(hist, 100.0) == hist);
}

TEST_CASE("clip_histogram redistributes [10,0] to [5,5]") {
    const auto out = clip_histogram({10, 0}, 1.0);  // ceiling = ceil(1*10/2) = 5
    REQUIRE(out.size() == 2);
    CHECK(out[0] == 5);
    CHECK(out[1] == 5);
}

TEST_CASE("clip_histogram conserves mass and respects the ceiling") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const int bins = 2 + int(rng.below(64));
        std::vector<std::uint64_t> hist(std::size_t(bins));
        for (auto& h : hist) h = rng.below(1000);
        const double clip = 1.0 + rng.uniform() * 3.0;
        const std::uint64_t total = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
        const auto out = clip_histogram(hist, clip);
        CHECK(std::accumulate(out.begin(), out.end(), std::uint64_t{0}) == total);
        if (total > 0) {
            const auto ceiling =
                std::uint64_t(std::ceil(clip * double(total) / double(bins)));
            for (auto h : out) CHECK(h <= ceiling);
        }
    }
}

TEST_CASE("build_tile_mapping uniform histogram approximates identity ramp") {
    const TileMapping m = build_tile_mapping({25, 25, 25, 25}, {0.0, 255.0});
    REQUIRE(m.lut.size() == 4);
    CHECK(m.lut[0] == 0.0);
    CHECK(m.lut[1] == 85.0);
    CHECK(m.lut[2] == 170.0);
    CHECK(m.lut[3] == 255.0);
}

TEST_CASE("build_tile_mapping single occupied bin degenerates to identity") {
    std::vector<std::uint64_t> hist(256, 0);
    hist[17] = 99;
    const TileMapping m = build_tile_mapping(hist, {0.0, 255.0});
    CHECK(m.monotone());
    CHECK(m.lut[17] == doctest::Approx(17.0));
    CHECK(m.lut[0] == doctest::Approx(0.0));
    CHECK(m.lut[255] == doctest::Approx(255.0));
}

TEST_CASE("build_tile_mapping is monotone for random histograms") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint64_t> hist(64);
        for (auto& h : hist) h = rng.below(50);
        if (std::accumulate(hist.begin(), hist.end(), std::uint64_t{0}) == 0) hist[3] = 1;
        const TileMapping m = build_tile_mapping(hist, {0.0, 255.0});
        CHECK(m.monotone());
        CHECK(m.lut.front() >= 0.0);
        CHECK(m.lut.back() <= 255.0);
    }
}

TEST_CASE("build_tile_mapping rejects the empty histogram") {
    CHECK_THROWS_AS(build_tile_mapping(std::vector<std::uint64_t>(8, 0), {0.0, 255.0}),
                    std::invalid_argument);
}

TEST_CASE("clahe keeps constant images constant") {
    const Image img = Image::constant(40, 30, 123.0);
    const Image out = clahe(img, {});
    CHECK((out.px - img.px).abs().maxCoeff() == 0.0);
}

TEST_CASE("clahe with one tile and unbounded clip equals global equalization") {
    Rng rng(3);
    for (int trial = 0; trial < 3; ++trial) {
        Image img = oracles::stationary_texture_image(64, 100 + std::uint64_t(trial));
        const Image he = oracles::global_he(img);
        const Image out = clahe(img, {1, 1, 1e9, 256});
        CHECK((out.px - he.px).abs().maxCoeff() <= 1.0);
    }
}

TEST_CASE("clahe preserves order inside single-mapping corner regions") {
    Rng rng(13);
    const ClaheConfig cfg{2, 2, 2.0, 256};
    const Image img = oracles::stationary_texture_image(64, 777);
    const Image out = clahe(img, cfg);
    // Tile centers for a 2x2 grid on 64px sit at 15.5/47.5; the four corner
    // quadrants use a single mapping.
    auto corner = [&](int r0, int c0) {
        for (int n = 0; n < 400; ++n) {
            const int i1 = r0 + int(rng.below(15)), j1 = c0 + int(rng.below(15));
            const int i2 = r0 + int(rng.below(15)), j2 = c0 + int(rng.below(15));
            if (img.px(i1, j1) >= img.px(i2, j2))
                CHECK(out.px(i1, j1) >= out.px(i2, j2) - 1e-9);
            else
                CHECK(out.px(i1, j1) <= out.px(i2, j2) + 1e-9);
        }
    };
    corner(0, 0);
    corner(0, 48);
    corner(48, 0);
    corner(48, 48);
}

TEST_CASE("clahe output stays in the value range and connects to tile mappings") {
    const Image img = oracles::stationary_texture_image(96, 4242);
    const ClaheConfig cfg;  // 8x8, clip 2.0, 256 bins
    const Image out = clahe(img, cfg);
    CHECK(out.px.minCoeff() >= 0.0);
    CHECK(out.px.maxCoeff() <= 255.0);
    for (const TileMapping& m : clahe_tile_mappings(img, cfg)) CHECK(m.monotone());
}

TEST_CASE("clahe with clip 1.0 is still monotone and bounded") {
    const Image img = oracles::stationary_texture_image(64, 99);
    const ClaheConfig cfg{4, 4, 1.0, 256};
    for (const TileMapping& m : clahe_tile_mappings(img, cfg)) CHECK(m.monotone());
    const Image out = clahe(img, cfg);
    CHECK(out.px.minCoeff() >= 0.0);
    CHECK(out.px.maxCoeff() <= 255.0);
}

TEST_CASE("synthesize_swir keeps constants and raises entropy") {
    const Image flat = Image::constant(32, 32, 80.0);
    CHECK((synthesize_swir(flat).px - 80.0).abs().maxCoeff() == 0.0);

    for (int k = 0; k < 10; ++k) {
        const Image img = oracles::stationary_texture_image(96, 500 + std::uint64_t(k) * 3);
        const Image swir = synthesize_swir(img, {4, 4, 2.0, 256});
        CHECK(entropy(swir) >= entropy(img) - 0.05);
    }
}

TEST_CASE("synthesize_swir preserves gradient polarity inside tile interiors") {
    const int grid = 4, n = 128, margin = 2;
    for (int k = 0; k < 5; ++k) {
        const Image img = oracles::stationary_texture_image(n, 900 + std::uint64_t(k) * 31);
        const Image swir = synthesize_swir(img, {grid, grid, 2.0, 256});
        const SobelResult gi = sobel_gradient(img.px);
        const SobelResult gj = sobel_gradient(swir.px);
        long agree = 0, seen = 0;
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n - 1; ++j) {
                const int tb_i = (i * grid / n) * n / grid, te_i = (i * grid / n + 1) * n / grid;
                const int tb_j = (j * grid / n) * n / grid, te_j = (j * grid / n + 1) * n / grid;
                if (i - tb_i < margin || te_i - 1 - i < margin || j - tb_j < margin ||
                    te_j - 1 - j < margin)
                    continue;
                if (gi.magnitude(i, j) <= 1.0) continue;
                if (std::abs(gi.gx(i, j)) > 1.0) {
                    ++seen;
                    if (gi.gx(i, j) * gj.gx(i, j) > 0.0) ++agree;
                }
                if (std::abs(gi.gy(i, j)) > 1.0) {
                    ++seen;
                    if (gi.gy(i, j) * gj.gy(i, j) > 0.0) ++agree;
                }
            }
        REQUIRE(seen > 1000);
        CHECK(double(agree) / double(seen) >= 0.99);
    }
}

TEST_CASE("clahe precondition failures throw") {
    const Image img = Image::constant(4, 4, 1.0);
    CHECK_THROWS_AS(clahe(img, {8, 8, 2.0, 256}), std::invalid_argument);  // grid > image
    CHECK_THROWS_AS(clahe(img, {1, 1, 0.5, 256}), std::invalid_argument);  // clip < 1
    CHECK_THROWS_AS(clahe(img, {1, 1, 2.0, 1}), std::invalid_argument);    // bins < 2
}
