#include "juliadim/fatou.hpp"

#include <cmath>
#include <numbers>

#include "juliadim/error.hpp"

namespace juliadim {

namespace {

void check_pole(cplx wd) {
    const double k = std::round(wd.imag() / (2.0 * std::numbers::pi));
    if (std::abs(wd - cplx(0.0, 2.0 * std::numbers::pi * k)) < 1e-12)
        throw Error(ErrorKind::POLE, "Fatou coordinate evaluated at a pole");
}

}  // namespace

cplx expm1c(cplx z) {
    const double x = z.real(), y = z.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

cplx log1pc(cplx z) {
    if (std::abs(z) >= 0.5) return std::log(1.0 + z);
    const double x = z.real(), y = z.imag();
    return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

cplx psi(cplx delta, cplx w) {
    if (delta == 0.0) {
        if (w == 0.0) throw Error(ErrorKind::POLE, "Psi_0 at w = 0");
        return -1.0 / w;
    }
    check_pole(w * delta);
    return delta / expm1c(-w * delta);
}

cplx phi_fatou(cplx delta, cplx z) {
    if (z == 0.0) throw Error(ErrorKind::BRANCH_CUT, "Phi at the fixed point");
    if (delta == 0.0) return -1.0 / z;
    const cplx q = z / (z + delta);
    if (q.real() <= 0 && std::abs(q.imag()) <= 1e-15 * std::abs(q))
        throw Error(ErrorKind::BRANCH_CUT, "logarithm argument on the negative axis");
    return -log1pc(delta / z) / delta;
}

PsiPrimeForms psi_prime_forms(cplx delta, cplx w) {
    const cplx u = w * delta;
    const cplx a = delta / (std::exp(-u) - 1.0), b = delta / (std::exp(u) - 1.0);
    const cplx c = (delta / 2.0) / std::sinh(u / 2.0);
    return {a * a * std::exp(-u), b * b * std::exp(u), c * c};
}

cplx psi_prime(cplx delta, cplx w) {
    if (delta == 0.0) {
        if (w == 0.0) throw Error(ErrorKind::POLE, "Psi_0' at w = 0");
        return 1.0 / (w * w);
    }
    check_pole(w * delta);
    const cplx u = w * delta / 2.0;
    // sinh(u) = u * (1 + u^2/6 + u^4/120 + ...)
    if (std::abs(u) < 1e-4) {
        const cplx s = w * (1.0 + u * u * (1.0 / 6 + u * u / 120.0));
        return 1.0 / (s * s);
    }
    const cplx c = (delta / 2.0) / std::sinh(u);
    return c * c;
}

cplx fatou_step(cplx delta, cplx w, Direction dir) {
    const cplx z = psi(delta, w);
    const cplx image = dir == Direction::FWD ? eval(QuadMap::f(delta), z) : inverse_fixing_zero(delta, z);
    return phi_fatou(delta, image);
}

bool sector_contains(const Sector& s, cplx z) {
    if (z == 0.0) return false;
    double a = std::arg(z);  // (-pi, pi]
    if (a < -0.5 * std::numbers::pi) a += 2.0 * std::numbers::pi;
    const double off = s.kind == Sector::PLUS ? std::abs(a) : std::abs(a - std::numbers::pi);
    if (!(off < s.theta) || !(std::abs(z) < s.r)) return false;
    if (s.R >= 0 && !(std::abs(z.real()) > s.R)) return false;
    return true;
}

bool w_region_contains(double alpha, cplx z) {
    const double a = std::abs(alpha);
    if (z == 0.0 || !(std::abs(std::arg(z)) < a)) return false;
    const double cut = a <= std::numbers::pi / 4 ? 0.25 : 0.25 / std::tan(a);
    return z.real() > cut;
}

}  // namespace juliadim
