#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "juliadim/quad_family.hpp"

namespace juliadim {

struct DyadicAngle {
    std::uint64_t numerator = 0;
    int level = 0;

    // reduces to odd numerator (or 0 at level 0)
    static DyadicAngle make(std::uint64_t k, int level);
    double turns() const;
};

struct BoettcherTable {
    cplx delta;
    int level = 0;
    double tol = 0;
    double residual = 0;
    double diameter = 0;
    std::vector<cplx> points;

    std::size_t size() const { return points.size(); }
    // point with angle k / 2^n, n <= level
    cplx at(std::uint64_t k, int n) const { return points[(k << (level - n)) & (points.size() - 1)]; }
};

struct Cylinder {
    int index = 0;
    cplx outer, inner;  // z_n and z_{n+1}
    double size = 0;
};

BoettcherTable build_table(cplx delta, int level, double tol = 1e-10);

cplx landing_point(const BoettcherTable& table, DyadicAngle angle);
std::vector<Cylinder> cylinders(const BoettcherTable& table, int n_max);
std::vector<cplx> julia_cloud(const BoettcherTable& table);

double semiconjugacy_residual(const BoettcherTable& table);
double table_diameter(const std::vector<cplx>& pts);

// z_0 .. z_{n_max} on the positive side (angle 2^-(n+1)) or the conjugate
// side (angle 1 - 2^-(n+1)); entries deeper than the table are pulled back
// with the inverse branch fixing 0
std::vector<cplx> landing_chain(const BoettcherTable& table, int n_max, bool conjugate_side = false);
cplx pullback_toward_zero(cplx delta, cplx z);

void write_table(const std::string& path, const BoettcherTable& table);
BoettcherTable read_table(const std::string& path);

class TableCache {
public:
    explicit TableCache(std::string dir = {}) : dir_(std::move(dir)) {}
    BoettcherTable get(cplx delta, int level, double tol = 1e-10) const;
    std::string path_for(cplx delta, int level) const;

private:
    std::string dir_;
};

}  // namespace juliadim
