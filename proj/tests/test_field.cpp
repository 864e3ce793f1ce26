#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "epicurv/errors.hpp"
#include "epicurv/field.hpp"
#include "epicurv/spectral.hpp"

using namespace epicurv;

namespace {

Vec2 random_point(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> uni(-radius, radius);
    return Vec2(uni(rng), uni(rng));
}

double fd_divergence(const FieldModel& m, Vec2 v, double h = 1e-6) {
    const double dx = (eval_Q(m, v + Vec2(h, 0)).real() - eval_Q(m, v - Vec2(h, 0)).real());
    const double dy = (eval_Q(m, v + Vec2(0, h)).imag() - eval_Q(m, v - Vec2(0, h)).imag());
    return (dx + dy) / (2.0 * h);
}

// Constant profile used by the gyration oracle in the dynamics tests.
struct ConstantProfile final : RadialProfile {
    double b0;
    explicit ConstantProfile(double b) : b0(b) {}
    double b(double) const override { return b0; }
    double db(double) const override { return 0.0; }
    double moment(double r) const override { return 0.5 * b0 * r * r; }
};

}  // namespace

TEST_CASE("eval_B: closed-form values") {
    const FieldModel m(1.0, 2.0);
    CHECK(eval_B(m, Vec2(0, 0)) == doctest::Approx(2.0).epsilon(1e-15));

    // r^gamma (B - 1) -> A at large radius
    const double r = 1e3;
    CHECK(std::pow(r, 2.0) * (eval_B(m, Vec2(r, 0)) - 1.0) == doctest::Approx(1.0).epsilon(1e-5));

    const FieldModel m2(-0.5, 1.5);
    const double expected = 1.0 - 0.5 * std::pow(5.0, -0.75);
    CHECK(eval_B(m2, Vec2(2, 0)) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(eval_B(m2, Vec2(0, 2)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("grad_B: radial symmetry at the origin and FD oracle") {
    const FieldModel m(1.0, 2.0, 0.3, 3.5);
    CHECK(grad_B(m, Vec2(0, 0)) == Vec2(0, 0));

    std::mt19937_64 rng(101);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const Vec2 v = random_point(rng, 8.0);
        const Vec2 g = grad_B(m, v);
        const double gx =
            (eval_B(m, v + Vec2(h, 0)) - eval_B(m, v - Vec2(h, 0))) / (2.0 * h);
        const double gy =
            (eval_B(m, v + Vec2(0, h)) - eval_B(m, v - Vec2(0, h))) / (2.0 * h);
        const double scale = std::max(1e-12, std::abs(g));
        CHECK(std::abs(g.real() - gx) / scale <= 1e-7);
        CHECK(std::abs(g.imag() - gy) / scale <= 1e-7);
    }
}

TEST_CASE("grad_B decay exponent") {
    const FieldModel m(1.0, 2.0);  // A1 = 0
    double bound = 0.0;
    for (double r = 10.0; r <= 1e4; r *= 2.0)
        bound = std::max(bound, std::pow(r, m.gamma + 1.0) * std::abs(grad_B(m, Vec2(r, 0))));
    CHECK(bound < 10.0);  // r^{gamma+1} |grad B| stays bounded
}

TEST_CASE("eval_Q: constant-field limit and origin") {
    const FieldModel flat(1e-300, 2.0);  // B == 1 up to 1e-300
    const Vec2 v(0.7, -1.3);
    CHECK(std::abs(eval_Q(flat, v) - v * 0.5) < 1e-15);
    CHECK(eval_Q(flat, Vec2(0, 0)) == Vec2(0, 0));

    const FieldModel m(1.0, 2.0, -0.2, 4.0);
    CHECK(std::abs(eval_Q(m, Vec2(0, 0))) == 0.0);
}

TEST_CASE("div Q = B at random points") {
    const FieldModel m(0.8, 2.5, 0.1, 3.2);
    std::mt19937_64 rng(202);
    for (int i = 0; i < 100; ++i) {
        Vec2 v = random_point(rng, 6.0);
        if (std::abs(v) < 0.1) v += Vec2(0.5, 0.5);
        const double div = fd_divergence(m, v);
        CHECK(div == doctest::Approx(eval_B(m, v)).epsilon(1e-6));
    }
}

TEST_CASE("div Q = B exercises the gamma = 2 logarithmic branch") {
    const FieldModel m(1.0, 2.0);
    CHECK(fd_divergence(m, Vec2(1.2, -0.4)) == doctest::Approx(eval_B(m, Vec2(1.2, -0.4))).epsilon(1e-6));
    // branch switch continuity
    const FieldModel near(1.0, 2.0 + 5e-10);
    const Vec2 v(2.0, 1.0);
    CHECK(std::abs(eval_Q(m, v) - eval_Q(near, v)) < 1e-8);
}

TEST_CASE("rotation equivariance of Q") {
    const FieldModel m(1.0, 2.0, 0.4, 3.0);
    CHECK(rotation_equivariance_check(m, Vec2(0.3, 0.4), 0.0) == 0.0);
    CHECK(rotation_equivariance_check(m, Vec2(1, 0), kTwoPi / 4.0) <= 1e-14);

    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
        worst = std::max(worst, rotation_equivariance_check(m, random_point(rng, 10.0), ang(rng)));
    CHECK(worst <= 1e-12);
}

TEST_CASE("remainder of the expansion at infinity stays bounded") {
    const FieldModel m(1.0, 2.0);
    double worst = 0.0;
    for (double r = 100.0; r <= 1e4; r *= 1.7) {
        const double rem = eval_B(m, Vec2(r, 0)) - 1.0 - m.A * std::pow(r, -m.gamma);
        worst = std::max(worst, std::pow(r, m.gamma + 1.0) * std::abs(rem));
    }
    CHECK(worst < 1.0);
    // remainder_b1 is the same quantity scaled by r^{gamma+beta}
    CHECK(std::abs(m.remainder_b1(Vec2(1e3, 0))) < 1.0);
    CHECK(m.beta() == doctest::Approx(1.0));
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(FieldModel(0.0, 2.0), ConfigError);
    CHECK_THROWS_AS(FieldModel(1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(FieldModel(1.0, 2.0, 0.1, 1.5), ConfigError);
    CHECK_NOTHROW(FieldModel(1e-300, 2.0));
}

TEST_CASE("pluggable profile") {
    const auto m = FieldModel::with_profile(std::make_shared<ConstantProfile>(2.0), 1.0, 2.0);
    CHECK(eval_B(m, Vec2(5, 3)) == 2.0);
    const Vec2 v(0.4, -0.9);
    CHECK(std::abs(eval_Q(m, v) - v) < 1e-15);  // Q = B0 v / 2
    CHECK(fd_divergence(m, v) == doctest::Approx(2.0).epsilon(1e-8));
}
