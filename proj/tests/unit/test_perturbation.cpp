#include <doctest.h>

#include <numbers>
#include <random>

#include "juliadim/boettcher.hpp"
#include "juliadim/error.hpp"
#include "juliadim/perturbation.hpp"

using namespace juliadim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("g examples") {
    CHECK(std::abs(g_fn(0.0)) < 1e-300);
    CHECK(std::abs(g_fn(1.0) - std::exp(-1.0)) < 1e-15);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> re(1e-3, 10), im(-10, 10);
    for (int i = 0; i < 100; ++i) CHECK(std::abs(g_fn({re(rng), im(rng)})) > 0);
}

TEST_CASE("Gamma near zero and at infinity") {
    CHECK(std::abs(gamma_fn(0.0) + 0.5) < 1e-15);
    for (double a = 0; a < 2 * kPi; a += 0.5) {
        const cplx z = std::polar(1e-4, a);
        CHECK(std::abs((1.0 + 2.0 * gamma_fn(z)) / (z / 3.0) - 1.0) < 1e-7);
        CHECK(std::abs(one_plus_two_gamma(z) / (z / 3.0) - 1.0) < 1e-7);
    }
    CHECK(std::abs(gamma_fn(std::polar(1e3, kPi / 4))) < 1e-2);
    CHECK_THROWS_AS(gamma_fn(cplx(0, 2 * kPi)), Error);
}

TEST_CASE("Gamma closed forms agree away from the poles") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int i = 0; i < 500; ++i) {
        const cplx z(u(rng), u(rng));
        if (std::abs(z) < 0.5 || std::abs(std::exp(z) - 1.0) < 0.3) continue;
        const cplx g = gamma_fn(z);
        CHECK(std::abs(gamma_form_sinh(z) - g) < 1e-10 * (1 + std::abs(g)));
        CHECK(std::abs(gamma_form_g(z) - g) < 1e-10 * (1 + std::abs(g)));
        CHECK(std::abs(gamma_form_exp(z) - g) < 1e-10 * (1 + std::abs(g)));
    }
}

TEST_CASE("sinh z - z has no zeros in the punctured disk") {
    double m = 0;
    CHECK(sinh_z_minus_z_nonvanishing(2.0, 10000, 1e-3, &m));
    CHECK(sinh_z_minus_z_nonvanishing(0.5, 2000, 1e-3, &m));
    CHECK(m == doctest::Approx(1.0 / 6).epsilon(0.02));
    const cplx z(1e-3, 2e-3);
    CHECK(std::abs(sinh_minus_z(z) / (z * z * z / 6.0) - 1.0) < 1e-6);
}

TEST_CASE("phi dot at delta = 1 is exact at half a turn") {
    const BoettcherTable t = build_table(1.0, 12);
    const PhiDotSeries s = phi_dot_series(t, DyadicAngle::make(1, 1), 30);
    CHECK(s.truncation_error < 1e-6);
    CHECK(std::isfinite(s.value.real()));
}

TEST_CASE("phi dot matches a finite difference of the table") {
    const double d = 0.4, h = 1e-5;
    const int L = 10;
    const BoettcherTable t = build_table(d, L), tp = build_table(d + h, L), tm = build_table(d - h, L);
    const auto table = phi_dot_table(t);
    for (std::uint64_t k = 1; k < t.size(); k += 53) {
        const cplx fd = (tp.points[k] - tm.points[k]) / (2 * h);
        const PhiDotSeries s = phi_dot_series(t, DyadicAngle::make(k, L));
        CHECK(std::abs(s.value - fd) < 1e-4);
        CHECK(std::abs(table[k] - fd) < 1e-4);
    }
}

TEST_CASE("phi dot satisfies the one-step recursion") {
    const cplx d = std::polar(0.3, 0.4);
    const BoettcherTable t = build_table(d, 9);
    const auto pd = phi_dot_table(t);
    const std::size_t n = t.size();
    for (std::size_t k = 1; k < n; k += 7)
        CHECK(std::abs(pd[k] - phi_dot_step(d, t.points[k], pd[(2 * k) % n])) < 1e-10 * (1 + std::abs(pd[k])));
}

TEST_CASE("the two psi dot forms agree") {
    const cplx d = std::polar(0.2, kPi / 8);
    const BoettcherTable t = build_table(d, 10);
    for (std::size_t k = 3; k < t.size(); k += 101) {
        for (int n = 1; n <= 6; ++n) {
            const PsiDot p = psi_dot(d, n, t.points[k]);
            CHECK(std::abs(p.sum_form - p.orbit_form) < 1e-10 * (1 + std::abs(p.sum_form)));
        }
    }
}
