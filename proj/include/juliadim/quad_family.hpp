#pragma once

#include <complex>

namespace juliadim {

using cplx = std::complex<double>;

struct Param {
    cplx delta;

    cplx epsilon() const { return -delta * delta / 4.0; }
    double t() const { return std::abs(delta); }
    double alpha() const { return std::arg(delta); }

    static Param from_ray(double t, double alpha) { return {std::polar(t, alpha)}; }
    // delta with Re >= 0 whose epsilon matches
    static Param from_epsilon(cplx eps);
};

enum class Family { F_DELTA, P_EPSILON };

struct QuadMap {
    Family family = Family::F_DELTA;
    Param param;

    static QuadMap f(cplx delta) { return {Family::F_DELTA, {delta}}; }
    static QuadMap p(cplx delta) { return {Family::P_EPSILON, {delta}}; }

    cplx critical_point() const;
    cplx critical_value() const;
};

cplx eval(const QuadMap& map, cplx z);
cplx eval_deriv(const QuadMap& map, cplx z);

// tau_delta(z) = z + (1+delta)/2
cplx conjugate_to_p(cplx z, cplx delta);
cplx conjugate_from_p(cplx z, cplx delta);

// both solutions of map(w) = z, larger-magnitude root first
void preimages(const QuadMap& map, cplx z, cplx& w1, cplx& w2);
cplx inverse_branch(const QuadMap& map, cplx z, cplx hint);
// branch of f_delta^{-1} fixing 0 and -delta, defined for Re z > Re f(c)
cplx inverse_fixing_zero(cplx delta, cplx z);

bool in_mandelbrot(cplx delta, int max_iter = 10000, double escape_radius = 4.0);
bool in_main_disk(cplx delta);

}  // namespace juliadim
