#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <numbers>

#include "juliadim/boettcher.hpp"
#include "juliadim/quad_family.hpp"

using namespace juliadim;

TEST_CASE("delta = 1 table is the shifted unit circle") {
    const BoettcherTable t = build_table(1.0, 3);
    REQUIRE(t.size() == 8);
    for (int k = 0; k < 8; ++k) {
        const cplx want = std::polar(1.0, 2 * std::numbers::pi * k / 8) - 1.0;
        CHECK(std::abs(t.points[k] - want) < 1e-12);
    }
    const BoettcherTable big = build_table(1.0, 12);
    CHECK(std::abs(big.points[0]) == 0.0);
    for (const cplx& z : julia_cloud(big)) CHECK(std::abs(std::abs(z + 1.0) - 1.0) < 1e-10);
    CHECK(julia_cloud(big).size() == 4096);
}

TEST_CASE("landing points") {
    const BoettcherTable t = build_table(1.0, 10);
    CHECK(std::abs(landing_point(t, DyadicAngle::make(0, 0))) < 1e-15);
    CHECK(std::abs(landing_point(t, DyadicAngle::make(1, 1)) + 2.0) < 1e-12);
    const DyadicAngle a = DyadicAngle::make(6, 4);
    CHECK(a.numerator == 3);
    CHECK(a.level == 3);
    CHECK(a.turns() == doctest::Approx(0.375));
}

TEST_CASE("semiconjugacy residual") {
    const BoettcherTable t = build_table(0.5, 10);
    CHECK(t.residual < 1e-9);
    CHECK(semiconjugacy_residual(t) < 1e-9);
    const QuadMap f = QuadMap::f(t.delta);
    const std::size_t n = t.size();
    for (std::size_t k = 0; k < n; k += 37) CHECK(std::abs(eval(f, t.points[k]) - t.points[(2 * k) % n]) < 1e-9);
    const auto chain = landing_chain(t, 14);
    for (std::size_t m = 0; m + 1 < chain.size(); ++m) CHECK(std::abs(eval(f, chain[m + 1]) - chain[m]) < 1e-9);
}

TEST_CASE("real parameters give conjugation-symmetric tables") {
    const BoettcherTable t = build_table(0.3, 9);
    const std::size_t n = t.size();
    for (std::size_t k = 1; k < n; ++k) CHECK(std::abs(t.points[n - k] - std::conj(t.points[k])) < 1e-10);
}

TEST_CASE("tables depend continuously on delta") {
    const cplx d = std::polar(0.3, std::numbers::pi / 6);
    const BoettcherTable a = build_table(d, 9), b = build_table(d + 1e-6, 9);
    double worst = 0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a.points[k] - b.points[k]));
    CHECK(worst < 1e-4);
}

TEST_CASE("cylinder sizes are positive and scale like n^-2 at the parabolic parameter") {
    const BoettcherTable t = build_table(std::polar(0.2, 0.3), 10);
    for (const Cylinder& c : cylinders(t, 8)) CHECK(c.size > 0);
    const BoettcherTable p = build_table(0.0, 14);
    double lo = 1e300, hi = 0;
    for (const Cylinder& c : cylinders(p, 12)) {
        if (c.index < 10) continue;
        const double s = c.size * c.index * c.index;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    CHECK(hi / lo < 20 * 20);
    CHECK(lo > 1.0 / 20);
    CHECK(hi < 20);
}

TEST_CASE("table files round-trip exactly") {
    const BoettcherTable t = build_table(cplx(0.4, 0.1), 8);
    const auto path = (std::filesystem::temp_directory_path() / "juliadim_unit_table.csv").string();
    write_table(path, t);
    const BoettcherTable r = read_table(path);
    std::remove(path.c_str());
    REQUIRE(r.size() == t.size());
    CHECK(r.level == t.level);
    CHECK(r.delta == t.delta);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(r.points[k] == t.points[k]);
}

TEST_CASE("table cache returns the built table") {
    const auto dir = std::filesystem::temp_directory_path() / "juliadim_unit_cache";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const TableCache cache(dir.string());
    const BoettcherTable a = cache.get(0.6, 8);
    CHECK(std::filesystem::exists(cache.path_for(0.6, 8)));
    const BoettcherTable b = cache.get(0.6, 8);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.points[k] == b.points[k]);
    std::filesystem::remove_all(dir);
}
