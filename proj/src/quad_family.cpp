#include "juliadim/quad_family.hpp"

#include <cmath>

#include "juliadim/error.hpp"

namespace juliadim {

Param Param::from_epsilon(cplx eps) {
    cplx d = 2.0 * std::sqrt(-eps);
    if (d.real() < 0 || (d.real() == 0 && d.imag() < 0)) d = -d;
    return {d};
}

cplx QuadMap::critical_point() const {
    if (family == Family::P_EPSILON) return 0.0;
    return -(1.0 + param.delta) / 2.0;
}

cplx QuadMap::critical_value() const { return eval(*this, critical_point()); }

cplx eval(const QuadMap& map, cplx z) {
    if (map.family == Family::P_EPSILON) return z * z + 0.25 + map.param.epsilon();
    return ((1.0 + map.param.delta) + z) * z;
}

cplx eval_deriv(const QuadMap& map, cplx z) {
    if (map.family == Family::P_EPSILON) return 2.0 * z;
    return (1.0 + map.param.delta) + 2.0 * z;
}

cplx conjugate_to_p(cplx z, cplx delta) { return z + (1.0 + delta) / 2.0; }
cplx conjugate_from_p(cplx z, cplx delta) { return z - (1.0 + delta) / 2.0; }

void preimages(const QuadMap& map, cplx z, cplx& w1, cplx& w2) {
    if (map.family == Family::P_EPSILON) {
        w1 = std::sqrt(z - 0.25 - map.param.epsilon());
        w2 = -w1;
        return;
    }
    // w^2 + b w - z = 0; the product of the roots is -z
    const cplx half = (1.0 + map.param.delta) / 2.0;
    const cplx r = std::sqrt(half * half + z);
    const cplx a = -half + r, b = -half - r;
    w1 = std::abs(a) >= std::abs(b) ? a : b;
    w2 = (w1 == 0.0) ? cplx(0.0) : -z / w1;
}

cplx inverse_branch(const QuadMap& map, cplx z, cplx hint) {
    cplx w1, w2;
    preimages(map, z, w1, w2);
    const double d1 = std::abs(w1 - hint), d2 = std::abs(w2 - hint);
    if (std::abs(d1 - d2) <= 1e-12 * std::max(d1, d2) && w1 != w2)
        throw Error(ErrorKind::AMBIGUOUS_BRANCH, "preimages equidistant from hint");
    return d1 < d2 ? w1 : w2;
}

cplx inverse_fixing_zero(cplx delta, cplx z) {
    const cplx half = (1.0 + delta) / 2.0;
    const cplx crit_val = -half * half;
    if (!(z.real() > crit_val.real()))
        throw Error(ErrorKind::WRONG_BRANCH, "point left of the critical value");
    const cplx r = std::sqrt(half * half + z);
    return z / (half + r);
}

bool in_mandelbrot(cplx delta, int max_iter, double escape_radius) {
    const cplx c = 0.25 - delta * delta / 4.0;
    cplx z = 0.0;
    for (int i = 0; i < max_iter; ++i) {
        z = z * z + c;
        if (std::abs(z) > escape_radius) return false;
    }
    return true;
}

bool in_main_disk(cplx delta) { return std::abs(delta - 1.0) < 1.0; }

}  // namespace juliadim
