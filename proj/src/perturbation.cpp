#include "juliadim/perturbation.hpp"

#include <cmath>
#include <numbers>

#include "juliadim/error.hpp"

namespace juliadim {

namespace {

void check_pole(cplx z) {
    const double k = std::round(z.imag() / (2.0 * std::numbers::pi));
    if (k != 0 && std::abs(z - cplx(0.0, 2.0 * std::numbers::pi * k)) < 1e-10)
        throw Error(ErrorKind::POLE, "Gamma evaluated at a pole");
}

}  // namespace

cplx g_fn(cplx z) {
    if (std::abs(z) < 1e-4) return z * z * (0.5 - z * (1.0 / 6 - z * (1.0 / 24 - z / 120.0)));
    return std::exp(-z) - 1.0 + z;
}

cplx gamma_form_sinh(cplx z) { return 0.5 * (-1.0 + (std::sinh(z) - z) / (std::cosh(z) - 1.0)); }
cplx gamma_form_g(cplx z) { return 0.5 * (-g_fn(z) / (std::cosh(z) - 1.0)); }
cplx gamma_form_exp(cplx z) {
    const cplx e = std::exp(z);
    return (e - z * e - 1.0) / ((e - 1.0) * (e - 1.0));
}

cplx sinh_minus_z(cplx z) {
    if (std::abs(z) >= 1) return std::sinh(z) - z;
    // z^3/3! + z^5/5! + ...; 12 terms reach 1e-17 at |z| = 1
    const cplx z2 = z * z;
    cplx term = z * z2 / 6.0, sum = term;
    for (int k = 2; k <= 12; ++k) {
        term *= z2 / double((2 * k) * (2 * k + 1));
        sum += term;
    }
    return sum;
}

cplx one_plus_two_gamma(cplx z) {
    check_pole(z);
    if (z == 0.0) return 0.0;
    if (std::abs(z) < 1) {
        const cplx sh = std::sinh(0.5 * z);
        return sinh_minus_z(z) / (2.0 * sh * sh);
    }
    return 1.0 + 2.0 * gamma_fn(z);
}

cplx gamma_fn(cplx z) {
    check_pole(z);
    if (std::abs(z) < 1) return 0.5 * (one_plus_two_gamma(z) - 1.0);
    if (z.real() > 0) {
        const cplx e = std::exp(-z);
        const cplx d = 1.0 - e;
        return (e - z * e - e * e) / (d * d);
    }
    const cplx e = std::exp(z);
    const cplx d = e - 1.0;
    return (e - z * e - 1.0) / (d * d);
}

bool sinh_z_minus_z_nonvanishing(double radius, int samples, double floor, double* min_seen) {
    // polar grid over the punctured disk
    const int nr = std::max(1, int(std::sqrt(double(samples))));
    const int na = std::max(1, samples / nr);
    double m = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= nr; ++i) {
        const double r = radius * double(i) / nr;
        for (int j = 0; j < na; ++j) {
            const cplx z = std::polar(r, 2.0 * std::numbers::pi * (j + 0.5) / na);
            const cplx v = sinh_minus_z(z);
            m = std::min(m, std::abs(v) / (r * r * r));
        }
    }
    if (min_seen) *min_seen = m;
    return m > floor;
}

PhiDotSeries phi_dot_series(const BoettcherTable& table, DyadicAngle s, int m_max) {
    if (s.level > table.level) throw Error(ErrorKind::LEVEL_EXCEEDED, "angle finer than table");
    if (m_max < 0) m_max = table.level;
    const cplx delta = table.delta;
    const QuadMap f = QuadMap::f(delta);
    const std::size_t mask = table.size() - 1;
    std::size_t idx = (std::size_t(s.numerator) << (table.level - s.level)) & mask;

    PhiDotSeries out;
    out.value = -0.5;
    cplx deriv = 1.0;
    int m = 0;
    while (idx != 0 && m < m_max && std::abs(deriv) <= 1e6) {
        deriv *= eval_deriv(f, table.points[idx]);
        out.value += (delta / 2.0) / deriv;
        idx = (2 * idx) & mask;
        ++m;
    }
    out.terms = m;
    out.deriv = deriv;
    if (idx == 0) {
        out.value += 0.5 / deriv;
        out.truncation_error = 0;
    } else {
        out.truncation_error = std::abs(delta / 2.0 + 0.5) / std::abs(deriv);
    }
    return out;
}

std::vector<cplx> phi_dot_table(const BoettcherTable& table) {
    const std::size_t n = table.size(), mask = n - 1;
    std::vector<cplx> pd(n, cplx(0.0));
    for (int lev = 1; lev <= table.level; ++lev) {
        const std::size_t stride = std::size_t(1) << (table.level - lev);
        for (std::size_t k = stride; k < n; k += 2 * stride)
            pd[k] = phi_dot_step(table.delta, table.points[k], pd[(2 * k) & mask]);
    }
    return pd;
}

PsiDot psi_dot(cplx delta, int n, cplx z) {
    const QuadMap f = QuadMap::f(delta);
    PsiDot out{-0.5, 0.0};
    cplx deriv = 1.0, x = z;
    for (int k = 1; k <= n; ++k) {
        const cplx prev = x;
        deriv *= eval_deriv(f, x);
        x = eval(f, x);
        out.sum_form += (delta / 2.0) / deriv;
        out.orbit_form -= prev / deriv;
    }
    out.orbit_form -= 0.5 / deriv;
    return out;
}

}  // namespace juliadim
