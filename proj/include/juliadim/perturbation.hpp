#pragma once

#include <vector>

#include "juliadim/boettcher.hpp"

namespace juliadim {

cplx g_fn(cplx z);

// stable evaluation; throws POLE within 1e-10 of 2 pi i k, k != 0
cplx gamma_fn(cplx z);
// 1 + 2 Gamma(z) = (sinh z - z)/(cosh z - 1), accurate near 0
cplx one_plus_two_gamma(cplx z);
cplx sinh_minus_z(cplx z);
// the three closed forms, evaluated literally (used for cross-checks)
cplx gamma_form_sinh(cplx z);
cplx gamma_form_g(cplx z);
cplx gamma_form_exp(cplx z);

bool sinh_z_minus_z_nonvanishing(double radius, int samples, double floor = 1e-3, double* min_seen = nullptr);

struct PhiDotSeries {
    cplx value;
    double truncation_error = 0;  // 0 when the orbit lands on the fixed point and the tail is exact
    int terms = 0;
    cplx deriv;                   // (f^m)' at phi(s)
};

// -1/2 + sum_{k=1}^m (delta/2)/(f^k)'; stops at |(f^m)'| > 1e6, at m = m_max,
// or when the orbit reaches angle 0, in which case the remainder (1/2)/(f^m)'
// is added exactly since phidot vanishes at the fixed point
PhiDotSeries phi_dot_series(const BoettcherTable& table, DyadicAngle s, int m_max = -1);

// phidot at every table angle via phidot(s) = (phidot(s^2) - phi(s)) / f'(phi(s))
std::vector<cplx> phi_dot_table(const BoettcherTable& table);
inline cplx phi_dot_step(cplx delta, cplx z, cplx phidot_image) {
    return (phidot_image - z) / ((1.0 + delta) + 2.0 * z);
}

struct PsiDot {
    cplx sum_form;    // -1/2 + sum (delta/2)/(f^k)'(z)
    cplx orbit_form;  // -sum f^{k-1}(z)/(f^k)'(z) - (1/2)/(f^n)'(z)
};

PsiDot psi_dot(cplx delta, int n, cplx z);

}  // namespace juliadim
