#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "trifuse/cascade.hpp"

using namespace trifuse;

namespace {

Image random_image(int n, std::uint64_t seed) {
    Rng rng(seed);
    Plane p(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i, j) = rng.uniform(0.0, 255.0);
    return Image(std::move(p), {0.0, 255.0});
}

}  // namespace

TEST_CASE("identical inputs collapse every order to F(F(a,a),a)") {
    const Image a = random_image(16, 1);
    const Image out = cascade_order_avg(mean_fuse, a, a, a);
    CHECK((out.px - a.px).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("pixel-mean operator gives the closed form (a+b+c)/3") {
    const Image a = random_image(24, 2);
    const Image b = random_image(24, 3);
    const Image c = random_image(24, 4);
    const Image out = cascade_order_avg(mean_fuse, a, b, c);
    const Plane expect = (a.px + b.px + c.px) / 3.0;
    CHECK((out.px - expect).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("order-averaged cascade is permutation invariant") {
    const Image a = random_image(24, 5);
    const Image b = random_image(24, 6);
    const Image c = random_image(24, 7);
    const Image base = cascade_order_avg(mean_fuse, a, b, c);
    const Image* in[3] = {&a, &b, &c};
    const int perms[5][3] = {{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) {
        const Image out = cascade_order_avg(mean_fuse, *in[p[0]], *in[p[1]], *in[p[2]]);
        CHECK((out.px - base.px).abs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("single-pass variant keeps the fixed order") {
    const Image a = random_image(16, 8);
    const Image b = random_image(16, 9);
    const Image c = random_image(16, 10);
    const Image out = cascade_single_pass(mean_fuse, a, b, c);
    const Plane expect = ((a.px + b.px) * 0.5 + c.px) * 0.5;
    CHECK((out.px - expect).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("external command operator round-trips through files") {
    // `cp {a} {out}` is the left-projection operator; the order average of a
    // projection is the plain mean of the three inputs.
    Rng rng(77);
    Plane p(12, 12), q(12, 12), r(12, 12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            p(i, j) = double(rng.below(256));
            q(i, j) = double(rng.below(256));
            r(i, j) = double(rng.below(256));
        }
    const Image a(p, {0.0, 255.0}), b(q, {0.0, 255.0}), c(r, {0.0, 255.0});

    const auto work = std::filesystem::temp_directory_path() / "trifuse_cascade_test";
    const BimodalOp op = external_command_op("cp {a} {out}", work);
    const Image out = cascade_order_avg(op, a, b, c);
    const Plane expect = (a.px + b.px + c.px) / 3.0;
    CHECK((out.px - expect).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("external operator failure names the failing order") {
    const Image a = random_image(8, 11);
    const auto work = std::filesystem::temp_directory_path() / "trifuse_cascade_fail";
    const BimodalOp op = external_command_op("false # {a} {b} {out}", work);
    try {
        (void)cascade_order_avg(op, a, a, a);
        FAIL("expected failure");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("cascade order (0,1,2)") != std::string::npos);
    }
}

TEST_CASE("template placeholders are validated") {
    CHECK_THROWS_AS(external_command_op("cp {a} out.png", "/tmp"), std::invalid_argument);
}
