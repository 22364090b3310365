#include "juliadim/quadrature.hpp"

#include <cmath>

#include "juliadim/error.hpp"
#include "juliadim/perturbation.hpp"

namespace juliadim {

namespace {

using cplx = std::complex<double>;

void check_dimension(double d) {
    if (!(d > 1.0 && d < 1.5)) throw Error(ErrorKind::INVALID_DIMENSION, "dimension must lie in (1, 3/2)");
}

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::TOLERANCE_NOT_MET, what);
}

// sum_{n>=2} (1 - 1/n)(1 - (-1)^n th^{2n}) x^{2n} / (2n-1)!
double step5_series(double x, double theta, int max_terms = 60) {
    const double x2 = x * x, t2 = theta * theta;
    double xp = x2, tp = t2, fact = 1.0;  // x^{2n}, th^{2n}, (2n-1)!
    double sum = 0;
    for (int n = 2; n <= max_terms; ++n) {
        xp *= x2;
        tp *= t2;
        fact *= double(2 * n - 2) * double(2 * n - 1);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        const double term = (1.0 - 1.0 / n) * (1.0 - sign * tp) * xp / fact;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && n > 4) break;
    }
    return sum;
}

// integral over (0, inf) of an integrand behaving like x^{2-2d} at 0 and
// decaying like x e^{-d x}
template <class F, class Env>
QuadratureResult singular_integral(F f, Env envelope, double d, const QuadratureSpec& spec) {
    const double p = 3.0 - 2.0 * d;
    auto stretched = [&](double u) {
        if (u <= 0) return 0.0;
        const double x = std::pow(u, 1.0 / p);
        return f(x) * x / (p * u);
    };
    bool ok1 = false, ok2 = false;
    const double tol = 0.5 * spec.abs_tol;
    QuadratureResult head =
        integrate(stretched, 0.0, std::pow(spec.x_split, p), tol, 0.0, spec.max_subdivisions, &ok1);
    double x_max = spec.x_split;
    while (x_max < spec.x_cap && envelope(x_max) / d > spec.abs_tol * 1e-3) x_max += 0.5;
    QuadratureResult tail = integrate(f, spec.x_split, x_max, tol, 0.0, spec.max_subdivisions, &ok2);
    QuadratureResult r;
    r.value = head.value + tail.value;
    r.err_estimate = head.err_estimate + tail.err_estimate + envelope(x_max) / d;
    r.evaluations = head.evaluations + tail.evaluations;
    require(ok1 && ok2 && r.err_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value)),
            "singular integral did not reach tolerance");
    return r;
}

// bound for |S(x)| / D(x) and D(x) >= cosh x - 1 beyond x_split
auto make_envelope(double theta, double power) {
    return [theta, power](double x) {
        const double c = std::cosh(x) - 1.0;
        return (x * std::sinh(x) + std::abs(theta) * x + 2.0 * (c + 2.0)) / std::pow(c, power);
    };
}

}  // namespace

double cosh_minus_cos(double x, double theta) {
    const double a = std::sinh(0.5 * x), b = std::sin(0.5 * theta * x);
    return 2.0 * (a * a + b * b);
}

double step5_numerator(double x, double theta) {
    if (std::abs(x) * std::max(1.0, std::abs(theta)) < 1.0) return step5_series(x, theta);
    return x * std::sinh(x) + theta * x * std::sin(theta * x) - 2.0 * cosh_minus_cos(x, theta);
}

bool step5_partial_sums_positive(double theta, double x, int terms) {
    const double x2 = x * x, t2 = theta * theta;
    double xp = x2, tp = t2, fact = 1.0, sum = 0;
    for (int n = 2; n < terms + 2; ++n) {
        xp *= x2;
        tp *= t2;
        fact *= double(2 * n - 2) * double(2 * n - 1);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        sum += (1.0 - 1.0 / n) * (1.0 - sign * tp) * xp / fact;
        if (sum < 0) return false;
    }
    return sum > 0;
}

QuadratureResult omega(double theta, double d0, const QuadratureSpec& spec) {
    check_dimension(d0);
    auto f = [&](double x) {
        const double D = cosh_minus_cos(x, theta);
        return -step5_numerator(x, theta) * std::exp(-(1.0 + d0) * std::log(D));
    };
    QuadratureResult r = singular_integral(f, make_envelope(theta, 1.0 + d0), d0, spec);
    const double s = std::sqrt(theta * theta + 1.0);
    r.value *= s;
    r.err_estimate *= s;
    return r;
}

double find_theta0(double d0, double lo, double hi, const QuadratureSpec& spec) {
    double flo = omega(lo, d0, spec).value, fhi = omega(hi, d0, spec).value;
    if (flo * fhi > 0) throw Error(ErrorKind::NO_SIGN_CHANGE, "omega keeps its sign on the bracket");
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        const double fm = omega(mid, d0, spec).value;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

QuadratureResult delta_alpha(double alpha, double D0, double H_mu, const QuadratureSpec& spec) {
    check_dimension(D0);
    const double theta = std::tan(alpha);
    auto f = [&](double x) {
        const double D = cosh_minus_cos(x, theta);
        const double ratio_minus_two = step5_numerator(x, theta) / D;
        return ratio_minus_two * std::exp(-D0 * std::log(2.0 * D));
    };
    QuadratureResult r = singular_integral(f, make_envelope(theta, 1.0 + D0), D0, spec);
    const double s = H_mu / std::cos(alpha);
    r.value *= s;
    r.err_estimate *= std::abs(s);
    return r;
}

double lambda_fn(double h, double eps, cplx z) {
    const double x = z.real(), y = z.imag();
    const double sy = std::sin(0.5 * y);
    if (x > 1.0) {
        // 4 (sinh^2(x/2) + sin^2(y/2)) = e^x ((1 - e^-x)^2 + 4 sin^2(y/2) e^-x)
        const double e = std::exp(-x);
        const double inner = (1.0 - e) * (1.0 - e) + 4.0 * sy * sy * e;
        return std::exp(-h * (x + std::log(inner)) + eps * x);
    }
    const double sx = std::sinh(0.5 * x);
    return std::exp(-h * std::log(4.0 * (sx * sx + sy * sy)) + eps * x);
}

QuadratureResult lambda_tail(double h, double eps, double alpha, double t_lower, const QuadratureSpec& spec) {
    if (!(eps - h < 0)) throw Error(ErrorKind::OUT_OF_DOMAIN, "tail integral diverges for eps >= h");
    if (!(t_lower > 0)) throw Error(ErrorKind::OUT_OF_DOMAIN, "tail integral needs t > 0");
    const cplx v = std::polar(1.0, alpha);
    const double rate = (h - eps) * std::cos(alpha);
    QuadratureResult r;
    bool ok = true, ok2 = true;
    const double rel = spec.rel_tol * 1e-2;
    double start = t_lower;
    if (t_lower < 1.0) {
        auto g = [&](double y) {
            const double s = std::exp(y);
            return lambda_fn(h, eps, v * s) * s;
        };
        r = integrate(g, std::log(t_lower), 0.0, 0.0, rel, spec.max_subdivisions, &ok);
        start = 1.0;
    }
    // Lambda(vs) <= 4^h e^{-rate s} / (1 - e^{-s cos a})^{2h} beyond s = 1
    const double c = std::cos(alpha);
    auto bound = [&](double s) {
        return std::pow(4.0, h) * std::exp(-rate * s) / std::pow(1.0 - std::exp(-s * c), 2.0 * h) / rate;
    };
    double s_max = start + 1.0;
    const double floor = std::max(r.value, lambda_fn(h, eps, v * start)) * rel * 1e-3;
    while (bound(s_max) > floor && s_max < start + 1e4) s_max += 1.0;
    auto g2 = [&](double s) { return lambda_fn(h, eps, v * s); };
    const QuadratureResult t = integrate(g2, start, s_max, 0.0, rel, spec.max_subdivisions, &ok2);
    r.value += t.value;
    r.err_estimate += t.err_estimate + bound(s_max);
    r.evaluations += t.evaluations;
    require(ok && ok2, "lambda tail did not reach tolerance");
    return r;
}

double q_fn(double h, double alpha, double t, double H_mu, const QuadratureSpec& spec) {
    const cplx v = std::polar(1.0, alpha);
    const double front = (v * one_plus_two_gamma(v * t)).real();
    return H_mu * front * lambda_tail(h, 0.0, alpha, t, spec).value;
}

QuadratureResult q_integral(double h, double alpha, double H_mu, const QuadratureSpec& spec) {
    check_dimension(h);
    const double p = 3.0 - 2.0 * h;
    auto stretched = [&](double u) {
        if (u <= 0) return 0.0;
        const double t = std::pow(u, 1.0 / p);
        return q_fn(h, alpha, t, 1.0, spec) * t / (p * u);
    };
    auto plain = [&](double t) { return q_fn(h, alpha, t, 1.0, spec); };
    bool ok1 = false, ok2 = false;
    const QuadratureResult head = integrate(stretched, 0.0, 1.0, 0.5 * spec.abs_tol, spec.rel_tol,
                                            spec.max_subdivisions, &ok1);
    // |1 + 2 Gamma| <= 3 and the tail integral is bounded by its own envelope
    const double c = std::cos(alpha);
    auto bound = [&](double t) {
        return 3.0 * std::pow(4.0, h) * std::exp(-h * c * t) / std::pow(1.0 - std::exp(-t * c), 2.0 * h) /
               (h * c * h * c);
    };
    double t_max = 2.0;
    while (bound(t_max) > spec.abs_tol * 1e-3 && t_max < 1e4) t_max += 1.0;
    const QuadratureResult tail =
        integrate(plain, 1.0, t_max, 0.5 * spec.abs_tol, spec.rel_tol, spec.max_subdivisions, &ok2);
    QuadratureResult r;
    r.value = H_mu * (head.value + tail.value);
    r.err_estimate = std::abs(H_mu) * (head.err_estimate + tail.err_estimate + bound(t_max));
    r.evaluations = head.evaluations + tail.evaluations;
    require(ok1 && ok2, "Q integral did not reach tolerance");
    return r;
}

QuadratureResult step3_lhs(double s, double alpha, const QuadratureSpec& spec) {
    const cplx v = std::polar(1.0, alpha);
    auto f = [&](double t) { return (v * one_plus_two_gamma(v * t)).real(); };
    bool ok = false;
    QuadratureResult r = integrate(f, 0.0, s, spec.abs_tol, spec.rel_tol, spec.max_subdivisions, &ok);
    require(ok, "step-3 quadrature did not reach tolerance");
    return r;
}

double step3_rhs(double s, double alpha) {
    const cplx z = std::polar(s, alpha);
    if (s < 1e-4) return (z * z / 6.0).real();  // z sinh z/(cosh z - 1) - 2 = z^2/6 + O(z^4)
    return (z * std::sinh(z) / (std::cosh(z) - 1.0)).real() - 2.0;
}

}  // namespace juliadim
