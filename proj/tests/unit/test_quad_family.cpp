#include <doctest.h>

#include <random>

#include "juliadim/error.hpp"
#include "juliadim/quad_family.hpp"

using namespace juliadim;

namespace {
cplx random_point(std::mt19937_64& rng, double r) {
    std::uniform_real_distribution<double> u(-r, r);
    return {u(rng), u(rng)};
}
}  // namespace

TEST_CASE("epsilon is recomputed from delta and is even in delta") {
    const Param p{cplx(0.3, 0.2)};
    CHECK(std::abs(p.epsilon() - (-p.delta * p.delta / 4.0)) == 0.0);
    CHECK(Param{-p.delta}.epsilon() == p.epsilon());
    const Param q = Param::from_epsilon(p.epsilon());
    CHECK(q.delta.real() >= 0);
    CHECK(std::abs(q.epsilon() - p.epsilon()) < 1e-15);
    const Param r = Param::from_ray(0.25, 0.5);
    CHECK(r.t() == doctest::Approx(0.25));
    CHECK(r.alpha() == doctest::Approx(0.5));
}

TEST_CASE("map evaluation examples") {
    CHECK(eval(QuadMap::f(0.0), 0.0) == cplx(0, 0));
    CHECK(eval(QuadMap::f(1.0), -1.0) == cplx(-1, 0));
    // eps = -1/4 is delta = 1
    CHECK(std::abs(eval(QuadMap::p(1.0), 2.0) - 4.0) < 1e-15);
    CHECK(eval_deriv(QuadMap::f(0.0), 0.0) == cplx(1, 0));
    CHECK(std::abs(eval_deriv(QuadMap::f(0.2), 0.0) - 1.2) < 1e-15);
    CHECK(eval_deriv(QuadMap::f(1.0), -1.0) == cplx(0, 0));
}

TEST_CASE("critical points and fixed points") {
    const cplx d(0.4, -0.3);
    const QuadMap f = QuadMap::f(d);
    CHECK(std::abs(f.critical_point() - (-0.5 - d / 2.0)) < 1e-15);
    CHECK(std::abs(eval_deriv(f, f.critical_point())) < 1e-15);
    CHECK(QuadMap::p(d).critical_point() == cplx(0, 0));
    CHECK(std::abs(eval(f, -d) + d) < 1e-15);
    CHECK(std::abs(eval_deriv(f, 0.0) - (1.0 + d)) < 1e-15);
    CHECK(std::abs(eval_deriv(f, -d) - (1.0 - d)) < 1e-15);
}

TEST_CASE("affine conjugacy to the p family") {
    CHECK(std::abs(conjugate_to_p(0.0, 1.0) - 1.0) < 1e-15);
    CHECK(std::abs(conjugate_to_p(-1.0, 1.0)) < 1e-15);
    std::mt19937_64 rng(7);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const cplx d = random_point(rng, 1.0), z = random_point(rng, 2.0);
        const cplx lhs = conjugate_to_p(eval(QuadMap::f(d), z), d);
        const cplx rhs = eval(QuadMap::p(d), conjugate_to_p(z, d));
        worst = std::max(worst, std::abs(lhs - rhs) / (1 + std::norm(z)));
        CHECK(std::abs(conjugate_from_p(conjugate_to_p(z, d), d) - z) < 1e-14);
    }
    CHECK(worst < 1e-14);
}

TEST_CASE("f_delta and f_-delta are conjugate by a translation") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const cplx d = random_point(rng, 1.0), z = random_point(rng, 2.0);
        CHECK(std::abs(eval(QuadMap::f(-d), z + d) - (eval(QuadMap::f(d), z) + d)) < 1e-13);
    }
}

TEST_CASE("inverse branches") {
    const QuadMap f1 = QuadMap::f(1.0);
    CHECK(std::abs(inverse_branch(f1, 0.0, 0.1)) < 1e-15);
    CHECK(std::abs(inverse_branch(f1, 0.0, -1.9) + 2.0) < 1e-14);
    std::mt19937_64 rng(3);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const cplx d = random_point(rng, 1.0), z = random_point(rng, 3.0), hint = random_point(rng, 3.0);
        const QuadMap f = QuadMap::f(d);
        worst = std::max(worst, std::abs(eval(f, inverse_branch(f, z, hint)) - z));
        cplx w1, w2;
        preimages(f, z, w1, w2);
        CHECK(std::abs(w1) >= std::abs(w2));
    }
    CHECK(worst < 1e-12);
    const cplx d(0.2, 0.1);
    CHECK(std::abs(inverse_fixing_zero(d, 0.0)) < 1e-15);
    CHECK(std::abs(inverse_fixing_zero(d, -d) + d) < 1e-14);
}

TEST_CASE("Mandelbrot membership") {
    CHECK(in_mandelbrot(1.0));
    CHECK_FALSE(in_mandelbrot(10.0));
    CHECK(in_mandelbrot(0.0));
    CHECK(in_mandelbrot(-1.0));
    CHECK(in_main_disk(1.0));
    CHECK_FALSE(in_main_disk(0.0));
    CHECK(in_main_disk(std::polar(0.1, 0.7853981633974483)));
    CHECK_FALSE(in_main_disk(cplx(0, 0.1)));
}
