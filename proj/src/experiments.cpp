#include "juliadim/experiments.hpp"

#include <cmath>
#include <limits>

#include "juliadim/error.hpp"
#include "juliadim/parallel.hpp"
#include "juliadim/quadrature.hpp"

namespace juliadim {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_tail(cplx delta, int level, int tail_end) {
    return tail_end < 0 ? default_tail_end(delta, level) : tail_end;
}
}  // namespace

BoettcherTable get_table(cplx delta, const RunOptions& opt) {
    if (opt.cache_dir.empty()) return build_table(delta, opt.level);
    return TableCache(opt.cache_dir).get(delta, opt.level);
}

double dimension_at(cplx delta, const RunOptions& opt, int tail_end) {
    const BoettcherTable table = get_table(delta, opt);
    TransferOperator op(make_graph(table, opt.level, resolve_tail(delta, opt.level, tail_end)));
    return bowen_root(op, opt.tol);
}

PointEval evaluate_point(cplx delta, cplx v, const RunOptions& opt, double fd_step, int tail_end) {
    if (fd_step > 0 && (!in_main_disk(delta + fd_step * v) || !in_main_disk(delta - fd_step * v)))
        throw Error(ErrorKind::OUT_OF_DOMAIN, "finite-difference stencil leaves the main disk");
    PointEval p;
    p.delta = delta;
    p.level = opt.level;
    p.tail_end = resolve_tail(delta, opt.level, tail_end);
    const BoettcherTable table = get_table(delta, opt);
    TransferOperator op(make_graph(table, opt.level, p.tail_end));
    p.dim = bowen_root(op, opt.tol, &p.pressure_residual);
    const EquilibriumWeights w = op.equilibrium(p.dim);
    p.chi = lyapunov_integral(w);
    p.deriv_formula = directional_derivative_formula(delta, v, w);
    p.deriv_fd = kNaN;
    if (fd_step > 0) {
        const cplx hi = delta + fd_step * v, lo = delta - fd_step * v;
        const double dh = dimension_at(hi, opt, p.tail_end);
        const double dl = dimension_at(lo, opt, p.tail_end);
        p.deriv_fd = (dh - dl) / (2 * fd_step);
    }
    return p;
}

std::vector<double> geometric_grid(double t_start, double t_end, int points) {
    if (points < 2) return {t_start};
    std::vector<double> t(points);
    const double q = std::pow(t_end / t_start, 1.0 / (points - 1));
    for (int i = 0; i < points; ++i) t[i] = t_start * std::pow(q, i);
    t.back() = t_end;
    return t;
}

std::vector<double> default_t_grid(double t_start, double t_end) {
    const int points = int(std::lround(2 * std::log2(t_start / t_end))) + 1;
    return geometric_grid(t_start, t_end, points);
}

std::vector<double> linear_grid(double a, double b, int points) {
    if (points < 2) return {a};
    std::vector<double> x(points);
    for (int i = 0; i < points; ++i) x[i] = a + (b - a) * i / (points - 1);
    x.back() = b;
    return x;
}

RayScan ray_scan(double alpha, const std::vector<double>& t_values, double d0, const RunOptions& opt,
                 int fit_points) {
    for (std::size_t i = 1; i < t_values.size(); ++i)
        if (!(t_values[i] < t_values[i - 1]))
            throw Error(ErrorKind::OUT_OF_DOMAIN, "t values must be strictly decreasing");
    if (!(std::abs(alpha) < M_PI / 2)) throw Error(ErrorKind::OUT_OF_DOMAIN, "alpha outside (-pi/2, pi/2)");

    RayScan s;
    s.alpha = alpha;
    s.level = opt.level;
    s.d0 = d0;
    s.omega_value = omega(std::tan(alpha), d0).value;
    const cplx v = std::polar(1.0, alpha);
    const double p = 2 * d0 - 2;

    RunOptions inner = opt;
    inner.threads = 1;
    s.rows = parallel_map<RayRow>(t_values.size(), opt.threads, [&](std::size_t i) {
        RayRow r;
        r.t = t_values[i];
        try {
            const cplx delta = r.t * v;
            if (!in_main_disk(delta)) throw Error(ErrorKind::OUT_OF_DOMAIN, "t v outside the main disk");
            r.point = evaluate_point(delta, v, inner, r.t / 100);
            r.ratio = r.point.deriv_formula / std::pow(r.t, p);
            r.ok = std::isfinite(r.ratio);
            if (!r.ok) r.flag = "nonfinite";
        } catch (const Error& e) {
            r.flag = to_string(e.kind());
        }
        return r;
    });

    std::vector<const RayRow*> good;
    for (const auto& r : s.rows)
        if (r.ok) good.push_back(&r);
    const std::size_t k = std::min<std::size_t>(std::size_t(std::max(fit_points, 1)), good.size());
    double num = 0, den = 0;
    for (std::size_t i = good.size() - k; i < good.size(); ++i) {
        num += good[i]->ratio * s.omega_value;
        den += s.omega_value * s.omega_value;
    }
    s.fit_points = int(k);
    s.fitted_A = den > 0 ? num / den : kNaN;
    s.chi_small = good.empty() ? kNaN : good.back()->point.chi;
    s.implied_H_mu = s.fitted_A * s.chi_small * std::pow(2.0, d0) / d0;
    s.A_big = std::pow(2.0, 2 * d0 - 2) * s.fitted_A;
    s.A_big_check = std::pow(2.0, 2 * d0 - 2) * std::pow(2.0, -d0) * s.implied_H_mu * d0 / s.chi_small;

    s.stabilization = kNaN;
    if (!good.empty()) {
        const RayRow* last = good.back();
        for (const RayRow* r : good)
            if (std::abs(r->t - 2 * last->t) <= 1e-9 * last->t) s.stabilization = std::abs(last->ratio / r->ratio - 1);
    }
    return s;
}

double richardson_pair(double t1, double D1, double t2, double D2, double p) {
    const double a = std::pow(t1, p), b = std::pow(t2, p);
    return (D2 * a - D1 * b) / (a - b);
}

namespace {
// pair estimate with self-consistent exponent p = 2 d0 - 1
double consistent_pair(double t1, double D1, double t2, double D2, double* p_out) {
    double d = D2, p = 2 * d - 1;
    for (int it = 0; it < 200; ++it) {
        const double dn = richardson_pair(t1, D1, t2, D2, p);
        const double pn = 2 * dn - 1;
        if (!(pn > 0)) throw Error(ErrorKind::NO_CONVERGENCE, "extrapolation exponent left (0, inf)");
        if (std::abs(dn - d) < 1e-14) {
            d = dn;
            p = pn;
            break;
        }
        d = dn;
        p = pn;
    }
    if (p_out) *p_out = p;
    return d;
}
}  // namespace

D0Estimate d0_estimate(const std::vector<double>& t_sequence, const RunOptions& opt) {
    if (t_sequence.size() < 2) throw Error(ErrorKind::OUT_OF_DOMAIN, "need at least two t values");
    for (std::size_t i = 1; i < t_sequence.size(); ++i)
        if (!(t_sequence[i] < t_sequence[i - 1]) || !(t_sequence[i] > 0))
            throw Error(ErrorKind::OUT_OF_DOMAIN, "t values must be positive and strictly decreasing");
    D0Estimate e;
    e.t = t_sequence;
    RunOptions inner = opt;
    inner.threads = 1;
    e.dims = parallel_map<double>(e.t.size(), opt.threads,
                                  [&](std::size_t i) { return dimension_at(cplx(e.t[i], 0), inner); });
    for (std::size_t i = 1; i < e.t.size(); ++i)
        e.pairwise.push_back(consistent_pair(e.t[i - 1], e.dims[i - 1], e.t[i], e.dims[i], &e.exponent));
    e.value = e.pairwise.back();
    e.halving_change = e.pairwise.size() >= 2 ? std::abs(e.pairwise.back() - e.pairwise[e.pairwise.size() - 2]) : kNaN;
    e.uncertainty = e.halving_change;
    e.in_bounds = e.value > 1 && e.value < 1.295;
    return e;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

EpsScan eps_scan(const std::vector<double>& eps_values, const RunOptions& opt) {
    if (eps_values.empty()) throw Error(ErrorKind::OUT_OF_DOMAIN, "empty eps grid");
    double delta_min = INFINITY;
    for (double e : eps_values) {
        if (!(e < 0)) throw Error(ErrorKind::OUT_OF_DOMAIN, "eps must be negative");
        delta_min = std::min(delta_min, 2 * std::sqrt(-e));
    }
    const int tail = default_tail_end(cplx(delta_min, 0), opt.level);
    RunOptions inner = opt;
    inner.threads = 1;
    EpsScan s;
    s.rows = parallel_map<EpsRow>(eps_values.size(), opt.threads, [&](std::size_t i) {
        EpsRow r;
        r.eps = eps_values[i];
        const double delta = 2 * std::sqrt(-r.eps);
        const PointEval p = evaluate_point(cplx(delta, 0), cplx(1, 0), inner, 0, tail);
        r.dim = p.dim;
        r.d_prime = -2 * p.deriv_formula / delta;
        r.d_second = kNaN;
        return r;
    });
    std::vector<double> lx, ly;
    for (const auto& r : s.rows) {
        lx.push_back(std::log(-r.eps));
        ly.push_back(std::log(std::abs(r.d_prime)));
    }
    s.slope = s.rows.size() >= 2 ? least_squares_slope(lx, ly) : kNaN;
    s.min_second = INFINITY;
    s.convex = s.rows.size() >= 3;
    for (std::size_t i = 1; i + 1 < s.rows.size(); ++i) {
        const double h1 = s.rows[i].eps - s.rows[i - 1].eps, h2 = s.rows[i + 1].eps - s.rows[i].eps;
        const double d2 = 2 * (h1 * s.rows[i + 1].dim - (h1 + h2) * s.rows[i].dim + h2 * s.rows[i - 1].dim) /
                          (h1 * h2 * (h1 + h2));
        s.rows[i].d_second = d2;
        s.rows[i].noisy = std::abs(d2) * h1 * h2 < 1e3 * opt.tol;
        s.min_second = std::min(s.min_second, d2);
        if (!(d2 > 0)) s.convex = false;
    }
    return s;
}

std::vector<MandelbrotCell> mandelbrot_grid(double re_min, double re_max, double im_min, double im_max, int nx,
                                            int ny, int max_iter, int threads) {
    const auto xs = linear_grid(re_min, re_max, nx), ys = linear_grid(im_min, im_max, ny);
    auto rows = parallel_map<std::vector<MandelbrotCell>>(ys.size(), threads, [&](std::size_t j) {
        std::vector<MandelbrotCell> row(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            MandelbrotCell& c = row[i];
            c.re = xs[i];
            c.im = ys[j];
            const cplx z(c.re, c.im);
            c.in_delta = in_mandelbrot(z, max_iter);
            c.in_eps = in_mandelbrot(Param::from_epsilon(z).delta, max_iter);
        }
        return row;
    });
    std::vector<MandelbrotCell> out;
    for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

}  // namespace juliadim
