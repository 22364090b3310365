#include <doctest.h>

#include <cmath>
#include <numbers>

#include "juliadim/error.hpp"
#include "juliadim/quadrature.hpp"

using namespace juliadim;

namespace {
constexpr double kPi = std::numbers::pi;

// x sinh x + th x sin(th x) - 2 (cosh x - cos th x), collected by powers of x
double numerator_oracle(double x, double th) {
    if (x > 0.1) return x * std::sinh(x) + th * x * std::sin(th * x) - 2 * (std::cosh(x) - std::cos(th * x));
    double s = 0, fact_odd = 1, fact_even = 2;  // (2k-1)!, (2k)!
    for (int k = 2; k <= 12; ++k) {
        fact_odd *= double(2 * k - 2) * double(2 * k - 1);
        fact_even *= double(2 * k - 1) * double(2 * k);
        const double t2k = std::pow(th, 2 * k), x2k = std::pow(x, 2 * k);
        const double sgn = (k % 2 == 0) ? 1 : -1;
        s += x2k * ((1 - sgn * t2k) / fact_odd - 2 * (1 - sgn * t2k) / fact_even);
    }
    return s;
}

// fixed-grid trapezoid in u with x = u^4
double omega_oracle(double th, double d0) {
    const double U = std::pow(50.0, 0.25);
    const long n = 1000000;
    const double h = U / n;
    double sum = 0;
    for (long i = 1; i <= n; ++i) {
        const double u = i * h, x = u * u * u * u;
        const double den = 2 * std::pow(std::sinh(x / 2), 2) + 2 * std::pow(std::sin(th * x / 2), 2);
        const double f = -numerator_oracle(x, th) / den * std::pow(den, -d0);
        sum += (i == n ? 0.5 : 1.0) * f * 4 * u * u * u;
    }
    return std::sqrt(th * th + 1) * sum * h;
}
}  // namespace

TEST_CASE("Omega agrees with a brute-force trapezoid") {
    const double ref = omega_oracle(0.0, 1.08);
    const QuadratureResult q = omega(0.0, 1.08);
    CHECK(std::abs(q.value / ref - 1) < 1e-6);
    CHECK(q.err_estimate < 1e-8);
    const double ref2 = omega_oracle(0.9, 1.2);
    CHECK(std::abs(omega(0.9, 1.2).value / ref2 - 1) < 1e-6);
}

TEST_CASE("Omega is even and negative on [-1, 1]") {
    for (double th : {0.3, 0.7, 1.2}) CHECK(std::abs(omega(th, 1.08).value - omega(-th, 1.08).value) < 1e-9);
    for (double th : {0.0, 0.25, 0.5, 0.75, 1.0}) CHECK(omega(th, 1.08).value < 0);
    CHECK(omega(2.0, 1.08).value > 0);
    CHECK_THROWS_AS(omega(0.0, 1.6), Error);
    CHECK_THROWS_AS(omega(0.0, 1.0), Error);
}

TEST_CASE("positive zero of Omega") {
    const double t0 = find_theta0(1.08);
    CHECK(t0 >= 1.15);
    CHECK(t0 <= 1.45);
    CHECK(std::abs(omega(t0, 1.08).value) < 1e-7);
    for (double d : {1.06, 1.10}) CHECK(find_theta0(d) > 1.0);
}

TEST_CASE("Delta, Omega and Q identities") {
    for (double a : {0.0, kPi / 6, kPi / 4, 3 * kPi / 8}) {
        for (double D0 : {1.05, 1.08, 1.2}) {
            const double da = delta_alpha(a, D0, 1.0).value;
            const double om = omega(std::tan(a), D0).value;
            CHECK(std::abs(da + std::pow(2.0, -D0) * om) < 1e-6 * std::abs(om));
            CHECK(std::abs(q_integral(D0, a, 1.0).value - da) < 1e-6 * std::abs(da));
        }
    }
    for (double a : {0.0, kPi / 8, kPi / 4}) CHECK(delta_alpha(a, 1.08, 1.0).value > 0);
    for (double a : {0.3, 0.9}) {
        const double p = delta_alpha(a, 1.1, 1.0).value * std::cos(a);
        const double m = delta_alpha(-a, 1.1, 1.0).value * std::cos(-a);
        CHECK(std::abs(p - m) < 1e-9 * std::abs(p));
    }
}

TEST_CASE("Lambda function and its tail") {
    CHECK(std::abs(lambda_fn(1.0, 0.0, 2 * std::asinh(0.5)) - 1.0) < 1e-12);
    CHECK(std::abs(lambda_fn(1.1, 0.0, 1e-4) * std::pow(1e-4, 2.2) - 1) < 0.01);
    double prev = INFINITY;
    for (double t : {0.01, 0.1, 0.5, 1.0, 2.0}) {
        const double v = lambda_tail(1.1, 0.0, 0.3, t).value;
        CHECK(v < prev);
        prev = v;
    }
    const double h = 1.1, t = 1e-3;
    CHECK(std::pow(t, 2 * h - 1) * lambda_tail(h, 0.0, 0.0, t).value == doctest::Approx(1 / (2 * h - 1)).epsilon(0.01));
}

TEST_CASE("Q decays and the step identities hold") {
    CHECK(std::abs(q_fn(1.08, 0.3, 40.0, 1.0)) < 1e-12);
    for (double s : {0.5, 2.0, 5.0})
        for (double a : {0.0, 0.5}) CHECK(std::abs(step3_lhs(s, a).value - step3_rhs(s, a)) < 1e-8);
    for (double th : {0.0, 0.5, 0.9, 1.0})
        for (double x : {0.01, 0.3, 2.0, 8.0}) {
            CHECK(step5_numerator(x, th) > 0);
            CHECK(cosh_minus_cos(x, th) > 0);
        }
    CHECK(step5_partial_sums_positive(0.8, 1.0, 10));
}
