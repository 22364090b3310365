#pragma once

#include <cmath>
#include <queue>
#include <vector>

namespace juliadim {

struct QuadratureResult {
    double value = 0;
    double err_estimate = 0;
    long evaluations = 0;
};

namespace gk {

// 7-point Gauss / 15-point Kronrod
inline constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                 0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                 0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                 0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                 0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

template <class F>
Segment rule(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * wk[7], g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xk[j];
        const double s = f(c - dx) + f(c + dx);
        k += wk[j] * s;
        if (j % 2 == 1) g += wg[j / 2] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace gk

// adaptive bisection driven by the largest local error; ok is false when the
// subdivision budget runs out before the tolerance is met
template <class F>
QuadratureResult integrate(F f, double a, double b, double abs_tol, double rel_tol, int max_subdivisions,
                           bool* ok = nullptr) {
    QuadratureResult r;
    if (a == b) {
        if (ok) *ok = true;
        return r;
    }
    long evals = 0;
    auto counted = [&](double x) {
        ++evals;
        return f(x);
    };
    std::priority_queue<gk::Segment> q;
    q.push(gk::rule(counted, a, b));
    double value = q.top().value, err = q.top().err;
    int n = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(value)) && n < max_subdivisions) {
        const gk::Segment s = q.top();
        q.pop();
        const double m = 0.5 * (s.a + s.b);
        const gk::Segment l = gk::rule(counted, s.a, m), h = gk::rule(counted, m, s.b);
        value += l.value + h.value - s.value;
        err += l.err + h.err - s.err;
        q.push(l);
        q.push(h);
        ++n;
    }
    // re-sum to drop accumulated rounding in the running totals
    value = 0;
    err = 0;
    while (!q.empty()) {
        value += q.top().value;
        err += q.top().err;
        q.pop();
    }
    r.value = value;
    r.err_estimate = err;
    r.evaluations = evals;
    if (ok) *ok = err <= std::max(abs_tol, rel_tol * std::abs(value));
    return r;
}

}  // namespace juliadim
