#include <doctest.h>

#include <cmath>
#include <numbers>

#include "juliadim/error.hpp"
#include "juliadim/experiments.hpp"
#include "juliadim/parallel.hpp"

using namespace juliadim;

TEST_CASE("parallel map preserves order and propagates errors") {
    const std::function<int(std::size_t)> sq = [](std::size_t i) { return int(i * i); };
    const auto a = parallel_map<int>(100, 1, sq), b = parallel_map<int>(100, 4, sq);
    CHECK(a == b);
    CHECK(b[9] == 81);
    const std::function<int(std::size_t)> bad = [](std::size_t i) -> int {
        if (i == 17) throw Error(ErrorKind::NO_CONVERGENCE, "x");
        return 0;
    };
    CHECK_THROWS_AS(parallel_map<int>(40, 3, bad), Error);
}

TEST_CASE("grids") {
    const auto g = default_t_grid();
    REQUIRE(g.size() == 7);
    CHECK(g.front() == 0.4);
    CHECK(g.back() == 0.05);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(1 / std::sqrt(2.0)));
    const auto l = linear_grid(-0.05, -0.01, 5);
    CHECK(l.size() == 5);
    CHECK(l[2] == doctest::Approx(-0.03));
    const auto q = geometric_grid(1.0, 0.125, 4);
    CHECK(q[1] == doctest::Approx(0.5));
}

TEST_CASE("least squares slope of an exact power law") {
    std::vector<double> x, y;
    for (int i = 1; i <= 6; ++i) {
        x.push_back(std::log(double(i)));
        y.push_back(-0.4 * std::log(double(i)) + 3);
    }
    CHECK(least_squares_slope(x, y) == doctest::Approx(-0.4).epsilon(1e-12));
}

TEST_CASE("Richardson pair removes the leading power") {
    const double d0 = 1.08, c = 0.7, p = 2 * d0 - 1;
    auto D = [&](double t) { return d0 - c * std::pow(t, p); };
    CHECK(richardson_pair(0.2, D(0.2), 0.1, D(0.1), p) == doctest::Approx(d0).epsilon(1e-13));
}

TEST_CASE("evaluate_point on the real ray") {
    RunOptions opt;
    opt.level = 11;
    const PointEval p = evaluate_point(0.3, 1.0, opt, 0.003);
    CHECK(p.dim > 1);
    CHECK(p.chi > 0);
    CHECK(p.deriv_formula < 0);
    CHECK(std::abs(p.deriv_formula / p.deriv_fd - 1) < 0.05);
    CHECK_THROWS_AS(evaluate_point(0.001, 1.0, opt, 0.01), Error);
}

TEST_CASE("ray scan rows carry ratios consistent with their inputs") {
    RunOptions opt;
    opt.level = 10;
    const RayScan s = ray_scan(0.0, {0.2, 0.1}, 1.08, opt, 2);
    REQUIRE(s.rows.size() == 2);
    for (const RayRow& r : s.rows) {
        CHECK(r.ok);
        CHECK(r.ratio == r.point.deriv_formula / std::pow(r.t, 2 * s.d0 - 2));
        CHECK(r.ratio < 0);
    }
    CHECK(s.fitted_A > 0);
    CHECK(std::isfinite(s.stabilization));
    CHECK(std::abs(s.A_big - s.A_big_check) < 1e-12 * std::abs(s.A_big));
}

TEST_CASE("eps scan is convex near the parabolic parameter") {
    RunOptions opt;
    opt.level = 10;
    const EpsScan s = eps_scan(linear_grid(-0.05, -0.01, 5), opt);
    CHECK(s.convex);
    CHECK(s.min_second > 0);
    CHECK(std::isnan(s.rows.front().d_second));
    for (const EpsRow& r : s.rows) CHECK(r.d_prime > 0);
}

TEST_CASE("Mandelbrot grid is symmetric under delta -> -delta") {
    const auto cells = mandelbrot_grid(-3, 3, -2, 2, 13, 9, 500, 2);
    REQUIRE(cells.size() == 13 * 9);
    for (std::size_t i = 0; i < cells.size(); ++i) CHECK(cells[i].in_delta == cells[cells.size() - 1 - i].in_delta);
    const auto one = mandelbrot_grid(1, 1.5, 0, 0.5, 2, 2, 500, 1);
    CHECK(one[0].in_delta);
    CHECK_FALSE(one[0].in_eps);
}
