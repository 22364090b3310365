#include <doctest.h>

#include <numbers>
#include <random>

#include "juliadim/fatou.hpp"

using namespace juliadim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Psi examples") {
    CHECK(std::abs(psi(0.0, -1.0) - 1.0) < 1e-15);
    const double l2 = std::log(2.0);
    CHECK(std::abs(psi(l2, -1.0) - l2) < 1e-14);
    double worst = 0;
    for (double r = 1; r <= 100; r *= 1.7)
        for (double a = -kPi / 4; a <= kPi / 4; a += kPi / 16) {
            const cplx w = -std::polar(r, a);
            worst = std::max(worst, std::abs(psi(1e-8, w) + 1.0 / w));
        }
    CHECK(worst < 1e-6);
}

TEST_CASE("Phi inverts Psi on the principal strip") {
    CHECK(std::abs(phi_fatou(0.0, 1.0) + 1.0) < 1e-15);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const cplx d = std::polar(0.5 * std::abs(u(rng)), 1.4 * u(rng));
        cplx w(20 * u(rng), 20 * u(rng));
        if (std::abs((w * d).imag()) >= 0.9 * kPi || std::abs(w) < 1e-3) continue;
        const cplx z = psi(d, w);
        worst = std::max(worst, std::abs(phi_fatou(d, z) - w) / (1 + std::abs(w)));
    }
    CHECK(worst < 1e-10);
    const cplx d = std::polar(0.1, kPi / 6);
    CHECK(std::abs(phi_fatou(d, psi(d, -5.0)) + 5.0) < 1e-10);
}

TEST_CASE("Psi derivative forms") {
    CHECK(std::abs(psi_prime(0.0, -2.0) - 0.25) < 1e-15);
    const cplx d = std::polar(0.2, 0.4);
    for (int n = 1; n <= 50; n += 7) {
        const cplx e = std::exp(double(n) * d);
        const cplx want = std::pow(d / (e - 1.0), 2) * e;
        CHECK(std::abs(psi_prime(d, -double(n)) - want) < 1e-12 * std::abs(want));
        const PsiPrimeForms f = psi_prime_forms(d, -double(n));
        CHECK(std::abs(f.minus_exp - f.plus_exp) < 1e-12 * std::abs(want));
        CHECK(std::abs(f.minus_exp - f.sinh_form) < 1e-12 * std::abs(want));
    }
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 200; ++i) {
        const cplx w(u(rng), u(rng)), w2(u(rng), u(rng));
        const cplx ratio = psi_prime(d, w2) / psi_prime(d, w);
        const cplx want = std::pow(std::sinh(w * d / 2.0) / std::sinh(w2 * d / 2.0), 2);
        CHECK(std::abs(ratio - want) < 1e-9 * std::abs(want));
    }
}

TEST_CASE("Fatou coordinate steps") {
    CHECK(std::abs(fatou_step(0.0, -1e6, Direction::BWD) - cplx(-1e6 - 1, 0)) < 1e-4);
    const cplx d = std::polar(0.05, kPi / 6);
    for (double x = -40; x <= -5; x += 5) {
        const cplx w(x, 0.5);
        CHECK(std::abs(fatou_step(d, fatou_step(d, w, Direction::BWD), Direction::FWD) - w) < 1e-10);
    }
    cplx w = -20.0;
    for (int n = 1; n <= 100; ++n) {
        w = fatou_step(d, w, Direction::BWD);
        CHECK(std::abs(w - (cplx(-20.0) - double(n))) < 0.1 * n);
    }
}

TEST_CASE("helpers for complex exp and log") {
    const cplx z(1e-9, -2e-9);
    CHECK(std::abs(expm1c(z) - z) < 1e-17);
    CHECK(std::abs(log1pc(z) - z) < 1e-17);
    const cplx y(0.3, 0.7);
    CHECK(std::abs(expm1c(y) - (std::exp(y) - 1.0)) < 1e-15);
    CHECK(std::abs(log1pc(y) - std::log(1.0 + y)) < 1e-15);
}

TEST_CASE("sectors and W regions") {
    CHECK(sector_contains({Sector::PLUS, kPi / 4}, {1, 0.5}));
    CHECK(sector_contains({Sector::MINUS, kPi / 4}, {-3, 1}));
    CHECK_FALSE(sector_contains({Sector::MINUS, kPi / 4}, {1, 0}));
    CHECK_FALSE(sector_contains({Sector::PLUS, kPi / 4, INFINITY, 2.0}, {1.0, 0}));
    CHECK(w_region_contains(kPi / 4, 1.0));
    CHECK(w_region_contains(kPi / 3, 0.2));
    CHECK_FALSE(w_region_contains(kPi / 6, 0.2));
}
