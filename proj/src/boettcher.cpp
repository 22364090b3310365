#include "juliadim/boettcher.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "juliadim/csv.hpp"
#include "juliadim/error.hpp"

namespace juliadim {

namespace {

constexpr int kSeedLevel = 4;
constexpr int kContinuationSteps = 200;
constexpr int kMaxSweeps = 500;

// levels 1..L by continuation along the segment from delta=1, where
// phi(s) = s - 1 is known in closed form
std::vector<cplx> seed_by_continuation(cplx delta, int L) {
    const std::size_t n = std::size_t(1) << L;
    std::vector<cplx> pts(n);
    for (std::size_t k = 0; k < n; ++k)
        pts[k] = std::polar(1.0, 2.0 * std::numbers::pi * double(k) / double(n)) - 1.0;
    for (int s = 1; s <= kContinuationSteps; ++s) {
        const cplx d = 1.0 + (delta - 1.0) * (double(s) / kContinuationSteps);
        const QuadMap f = QuadMap::f(d);
        pts[0] = 0.0;
        for (int lev = 1; lev <= L; ++lev) {
            const std::size_t stride = std::size_t(1) << (L - lev);
            for (std::size_t k = stride; k < n; k += 2 * stride)
                pts[k] = inverse_branch(f, pts[(2 * k) & (n - 1)], pts[k]);
        }
    }
    return pts;
}

}  // namespace

DyadicAngle DyadicAngle::make(std::uint64_t k, int level) {
    k &= (level >= 64) ? ~0ull : ((1ull << level) - 1);
    if (k == 0) return {0, 0};
    while ((k & 1) == 0) {
        k >>= 1;
        --level;
    }
    return {k, level};
}

double DyadicAngle::turns() const { return std::ldexp(double(numerator), -level); }

double table_diameter(const std::vector<cplx>& pts) {
    if (pts.empty()) return 0;
    const cplx a = pts[0], b = pts[pts.size() / 2];
    double d = 0;
    for (const cplx& z : pts) d = std::max({d, std::abs(z - a), std::abs(z - b)});
    return d;
}

double semiconjugacy_residual(const BoettcherTable& table) {
    const QuadMap f = QuadMap::f(table.delta);
    const std::size_t n = table.points.size(), mask = n - 1;
    double r = 0;
    for (std::size_t k = 0; k < n; ++k)
        r = std::max(r, std::abs(eval(f, table.points[k]) - table.points[(2 * k) & mask]));
    return r;
}

BoettcherTable build_table(cplx delta, int level, double tol) {
    if (level < 1 || level > 24) throw Error(ErrorKind::LEVEL_EXCEEDED, "table level must be in [1, 24]");
    if (!(in_main_disk(delta) || delta == 0.0))
        throw Error(ErrorKind::OUT_OF_DOMAIN, "parameter outside the main component");

    BoettcherTable t;
    t.delta = delta;
    t.level = level;
    t.tol = tol;
    const std::size_t n = std::size_t(1) << level, mask = n - 1;
    t.points.assign(n, cplx(0.0));

    const int L0 = std::min(level, kSeedLevel);
    const auto seed = seed_by_continuation(delta, L0);
    for (std::size_t k = 0; k < seed.size(); ++k) t.points[k << (level - L0)] = seed[k];

    const QuadMap f = QuadMap::f(delta);
    for (int lev = L0 + 1; lev <= level; ++lev) {
        const std::size_t stride = std::size_t(1) << (level - lev);
        for (std::size_t k = stride; k < n; k += 2 * stride) {
            const cplx hint = 0.5 * (t.points[(k - stride) & mask] + t.points[(k + stride) & mask]);
            t.points[k] = inverse_branch(f, t.points[(2 * k) & mask], hint);
        }
    }
    t.diameter = table_diameter(t.points);

    const double target = tol * t.diameter;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        double moved = 0;
        for (int lev = 1; lev <= level; ++lev) {
            const std::size_t stride = std::size_t(1) << (level - lev);
            for (std::size_t k = stride; k < n; k += 2 * stride) {
                const cplx w = inverse_branch(f, t.points[(2 * k) & mask], t.points[k]);
                moved = std::max(moved, std::abs(w - t.points[k]));
                t.points[k] = w;
            }
        }
        if (moved < target) break;
    }
    t.residual = semiconjugacy_residual(t);
    if (sweep == kMaxSweeps || !(t.residual < target))
        throw Error(ErrorKind::NO_CONVERGENCE, "pullback refinement did not stabilize");
    return t;
}

cplx landing_point(const BoettcherTable& table, DyadicAngle angle) {
    if (angle.level > table.level) throw Error(ErrorKind::LEVEL_EXCEEDED, "angle finer than table");
    return table.at(angle.numerator, angle.level);
}

std::vector<Cylinder> cylinders(const BoettcherTable& table, int n_max) {
    if (n_max + 2 > table.level) throw Error(ErrorKind::LEVEL_EXCEEDED, "cylinder endpoints finer than table");
    std::vector<Cylinder> out;
    for (int n = 0; n <= n_max; ++n) {
        Cylinder c;
        c.index = n;
        c.outer = table.at(1, n + 1);
        c.inner = table.at(1, n + 2);
        c.size = std::abs(c.outer - c.inner);
        out.push_back(c);
    }
    return out;
}

std::vector<cplx> julia_cloud(const BoettcherTable& table) { return table.points; }

cplx pullback_toward_zero(cplx delta, cplx z) {
    return inverse_branch(QuadMap::f(delta), z, z / (1.0 + delta));
}

std::vector<cplx> landing_chain(const BoettcherTable& table, int n_max, bool conjugate_side) {
    std::vector<cplx> out;
    out.reserve(n_max + 1);
    const std::uint64_t top = (1ull << table.level) - 1;
    for (int n = 0; n <= n_max; ++n) {
        if (n + 1 <= table.level) {
            const std::uint64_t k = 1ull << (table.level - n - 1);
            out.push_back(table.points[conjugate_side ? (top + 1 - k) & top : k]);
        } else {
            out.push_back(pullback_toward_zero(table.delta, out.back()));
        }
    }
    return out;
}

void write_table(const std::string& path, const BoettcherTable& t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::IO_ERROR, "cannot write " + path);
    os << "delta_re,delta_im,level,tol,residual\n";
    os << fmt17(t.delta.real()) << ',' << fmt17(t.delta.imag()) << ',' << t.level << ',' << fmt17(t.tol) << ','
       << fmt17(t.residual) << '\n';
    for (std::size_t k = 0; k < t.points.size(); ++k)
        os << k << ',' << fmt17(t.points[k].real()) << ',' << fmt17(t.points[k].imag()) << '\n';
    if (!os) throw Error(ErrorKind::IO_ERROR, "short write to " + path);
}

BoettcherTable read_table(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::IO_ERROR, "cannot read " + path);
    std::string line;
    std::getline(is, line);
    if (line != "delta_re,delta_im,level,tol,residual") throw Error(ErrorKind::PARSE_ERROR, "bad table header");
    BoettcherTable t;
    std::getline(is, line);
    {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double re, im;
        if (!(ss >> re >> im >> t.level >> t.tol >> t.residual)) throw Error(ErrorKind::PARSE_ERROR, "bad table record");
        t.delta = {re, im};
    }
    if (t.level < 1 || t.level > 24) throw Error(ErrorKind::PARSE_ERROR, "bad table level");
    const std::size_t n = std::size_t(1) << t.level;
    t.points.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::getline(is, line)) throw Error(ErrorKind::PARSE_ERROR, "truncated table");
        const char* p = line.c_str();
        char* end;
        const unsigned long long idx = std::strtoull(p, &end, 10);
        if (*end != ',' || idx != k) throw Error(ErrorKind::PARSE_ERROR, "bad table row");
        const double re = std::strtod(end + 1, &end);
        if (*end != ',') throw Error(ErrorKind::PARSE_ERROR, "bad table row");
        const double im = std::strtod(end + 1, &end);
        t.points[k] = {re, im};
    }
    t.diameter = table_diameter(t.points);
    return t;
}

std::string TableCache::path_for(cplx delta, int level) const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "table_%.15e_%.15e_%d.csv", delta.real(), delta.imag(), level);
    return (std::filesystem::path(dir_) / buf).string();
}

BoettcherTable TableCache::get(cplx delta, int level, double tol) const {
    if (dir_.empty()) return build_table(delta, level, tol);
    const std::string p = path_for(delta, level);
    if (std::filesystem::exists(p)) {
        BoettcherTable t = read_table(p);
        if (t.tol <= tol) return t;
    }
    BoettcherTable t = build_table(delta, level, tol);
    std::filesystem::create_directories(dir_);
    write_table(p, t);
    return t;
}

}  // namespace juliadim
