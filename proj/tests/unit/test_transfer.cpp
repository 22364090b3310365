#include <doctest.h>

#include <numbers>
#include <numeric>

#include "juliadim/transfer.hpp"

using namespace juliadim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("circle calibration at delta = 1") {
    const BoettcherTable t = build_table(1.0, 14);
    for (double tau : {0.0, 0.5, 1.0, 1.5}) CHECK(pressure(1.0, tau, t, 14) == doctest::Approx((1 - tau) * std::log(2.0)).epsilon(1e-9));
    CHECK(pressure_oracle(1.0, 0.0, t, 10) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(pressure_oracle(1.0, 1.0, t, 12)) < 2e-2);
    const DimensionResult r = hausdorff_dim(t, 14);
    CHECK(std::abs(r.tau0 - 1.0) < 1e-6);
    const EquilibriumWeights w = equilibrium(1.0, 1.0, t, 10);
    CHECK(lyapunov_integral(w) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("uniform partition at delta = 1 has uniform equilibrium weights") {
    const BoettcherTable t = build_table(1.0, 10);
    TransferOperator op(make_graph(t, 8, 7));
    const EquilibriumWeights w = op.equilibrium(1.0);
    for (double m : w.mu) CHECK(m == doctest::Approx(1.0 / 256).epsilon(1e-8));
}

TEST_CASE("pressure is strictly decreasing") {
    const BoettcherTable t = build_table(0.5, 12);
    TransferOperator op(make_graph(t, 12));
    double prev = op.pressure(0.0);
    for (double tau = 0.2; tau <= 2.0; tau += 0.2) {
        const double p = op.pressure(tau);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("two pressure evaluations agree") {
    const BoettcherTable t = build_table(0.8, 16);
    CHECK(std::abs(pressure_oracle(0.8, 1.05, t, 16) - pressure(0.8, 1.05, t, 16)) < 5e-2);
}

TEST_CASE("dimension lies between 1 and the parabolic bound on the real ray") {
    for (double d : {0.5, 0.2, 0.05}) {
        const DimensionResult r = hausdorff_dim(d, 12);
        CHECK(r.tau0 > 1.0);
        CHECK(r.tau0 < 1.295);
        CHECK(std::abs(r.pressure_residual) < 1e-9);
    }
}

TEST_CASE("conjugate parameters have the same dimension") {
    const cplx d = std::polar(0.3, kPi / 5);
    CHECK(std::abs(hausdorff_dim(d, 12).tau0 - hausdorff_dim(std::conj(d), 12).tau0) < 1e-10);
}

TEST_CASE("equilibrium measure is a probability vector over the partition") {
    const cplx d = std::polar(0.2, kPi / 6);
    const BoettcherTable t = build_table(d, 12);
    const DimensionResult r = hausdorff_dim(t, 12, 1e-12);
    const EquilibriumWeights w = equilibrium(d, r.tau0, t, 12);
    for (double m : w.mu) CHECK(m > 0);
    CHECK(std::accumulate(w.mu.begin(), w.mu.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    double total = remainder_measure(w);
    for (int n = 0; n < w.graph->tail_end; ++n) total += cylinder_measure(w, n);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lyapunov_integral(w) > 0);
}

TEST_CASE("derivative formula matches finite differences and respects conjugation") {
    const cplx d = std::polar(0.3, kPi / 6), v = std::polar(1.0, kPi / 6);
    const int L = 12;
    const int tail = default_tail_end(d, L);
    const BoettcherTable t = build_table(d, L);
    TransferOperator op(make_graph(t, L, tail));
    const double tau = bowen_root(op, 1e-13);
    const double formula = directional_derivative_formula(d, v, op.equilibrium(tau));
    const double h = 0.003;
    auto dim_at = [&](cplx x) {
        TransferOperator o(make_graph(build_table(x, L), L, tail));
        return bowen_root(o, 1e-13);
    };
    const double fd = (dim_at(d + h * v) - dim_at(d - h * v)) / (2 * h);
    CHECK(std::abs(formula / fd - 1) < 0.05);

    const BoettcherTable tc = build_table(std::conj(d), L);
    TransferOperator oc(make_graph(tc, L, tail));
    const double tauc = bowen_root(oc, 1e-13);
    const double fc = directional_derivative_formula(std::conj(d), std::conj(v), oc.equilibrium(tauc));
    CHECK(std::abs(fc - formula) < 1e-8 * std::abs(formula));
}

TEST_CASE("orbit derivatives expand along cylinders") {
    const BoettcherTable t = build_table(0.05, 10);
    const ExpansionReport r = orbit_expansion_check(t, 8, 200);
    CHECK(r.min_ratio_overall > 0);
    CHECK(r.min_deriv_overall > 1);
}
