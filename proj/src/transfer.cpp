#include "juliadim/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "juliadim/error.hpp"
#include "juliadim/perturbation.hpp"

namespace juliadim {

int default_tail_end(cplx delta, int level) {
    const double t = std::abs(delta);
    const double c = std::cos(std::arg(delta));
    constexpr int kCap = 1 << 14;
    if (t == 0 || c <= 0) return level + kCap;
    const double extra = std::ceil(40.0 / (t * c));
    return level + int(std::min<double>(extra, kCap));
}

std::vector<std::size_t> CylinderGraph::cylinder_nodes(int n) const {
    if (n < 0 || n >= tail_end) throw Error(ErrorKind::LEVEL_EXCEEDED, "cylinder beyond the partition");
    if (n + 1 >= level) return {p_node(n + 1), q_node(n + 1)};
    std::vector<std::size_t> out;
    const std::size_t H = words();
    const std::size_t a = std::size_t(1) << (level - n - 2), b = std::size_t(1) << (level - n - 1);
    for (std::size_t k = a; k < b; ++k) out.push_back(k);
    for (std::size_t k = H - b; k < H - a; ++k) out.push_back(k);
    return out;
}

std::shared_ptr<const CylinderGraph> make_graph(const BoettcherTable& table, int level, int tail_end) {
    if (level < 2 || level > table.level) throw Error(ErrorKind::LEVEL_EXCEEDED, "operator level exceeds table");
    if (tail_end < level - 1) tail_end = level - 1;
    auto g = std::make_shared<CylinderGraph>();
    g->delta = table.delta;
    g->level = level;
    g->tail_end = tail_end;
    const int N = level, M = tail_end;
    const std::size_t H = std::size_t(1) << N;
    const std::size_t chain = std::size_t(M - N + 1);
    const std::size_t n = H + 2 * chain;
    g->z.resize(n);
    g->z_right.resize(n);
    g->lo.resize(n);
    std::vector<cplx> pd_l(n), pd_r(n);

    const auto pos = landing_chain(table, M, false);
    const auto neg = landing_chain(table, M, true);
    const auto pd_table = phi_dot_table(table);
    const int shift = table.level - N;
    const std::size_t tmask = table.size() - 1;

    // phidot along both chains
    std::vector<cplx> pd_pos(M + 1), pd_neg(M + 1);
    for (int m = 0; m <= M; ++m) {
        if (m + 1 <= table.level) {
            const std::size_t k = std::size_t(1) << (table.level - m - 1);
            pd_pos[m] = pd_table[k];
            pd_neg[m] = pd_table[(tmask + 1 - k) & tmask];
        } else {
            pd_pos[m] = phi_dot_step(table.delta, pos[m], pd_pos[m - 1]);
            pd_neg[m] = phi_dot_step(table.delta, neg[m], pd_neg[m - 1]);
        }
    }

    auto set = [&](std::size_t i, double lo, cplx zl, cplx pl, cplx zr, cplx pr) {
        g->lo[i] = lo;
        g->z[i] = zl;
        g->z_right[i] = zr;
        pd_l[i] = pl;
        pd_r[i] = pr;
    };
    for (std::size_t k = 1; k + 1 < H; ++k) {
        const std::size_t a = k << shift, b = (k + 1) << shift;
        set(k, std::ldexp(double(k), -N), table.points[a], pd_table[a], table.points[b], pd_table[b]);
    }
    set(0, 0.0, 0.0, 0.0, pos[M], pd_pos[M]);
    set(H - 1, 1.0 - std::ldexp(1.0, -(M + 1)), neg[M], pd_neg[M], 0.0, 0.0);
    for (int m = N; m <= M; ++m) {
        set(g->p_node(m), std::ldexp(1.0, -(m + 1)), pos[m], pd_pos[m], pos[m - 1], pd_pos[m - 1]);
        set(g->q_node(m), 1.0 - std::ldexp(1.0, -m), neg[m - 1], pd_neg[m - 1], neg[m], pd_neg[m]);
    }

    // log|f'| and its parameter derivative, averaged over both endpoints
    const QuadMap f = QuadMap::f(table.delta);
    g->logd.resize(n);
    g->dcoef.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx fl = eval_deriv(f, g->z[i]), fr = eval_deriv(f, g->z_right[i]);
        g->logd[i] = 0.5 * (std::log(std::abs(fl)) + std::log(std::abs(fr)));
        g->dcoef[i] = 0.5 * ((1.0 + 2.0 * pd_l[i]) / fl + (1.0 + 2.0 * pd_r[i]) / fr);
    }

    // successors under angle doubling
    std::vector<std::vector<std::size_t>> succ(n);
    auto expand = [&](std::size_t w, std::vector<std::size_t>& out) {
        out.push_back(w);
        if (M < N) return;
        if (w == 0)
            for (int m = N; m <= M; ++m) out.push_back(g->p_node(m));
        else if (w == H - 1)
            for (int m = N; m <= M; ++m) out.push_back(g->q_node(m));
    };
    for (std::size_t k = 1; k + 1 < H; ++k) {
        expand((2 * k) & (H - 1), succ[k]);
        expand((2 * k + 1) & (H - 1), succ[k]);
    }
    if (M >= N) {
        succ[0] = {0, g->p_node(M)};
        succ[H - 1] = {H - 1, g->q_node(M)};
        for (int m = N; m <= M; ++m) {
            succ[g->p_node(m)] = {m > N ? g->p_node(m - 1) : std::size_t(1)};
            succ[g->q_node(m)] = {m > N ? g->q_node(m - 1) : H - 2};
        }
    } else {
        succ[0] = {0, 1};
        succ[H - 1] = {H - 2, H - 1};
    }

    g->succ_off.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g->succ_off[i + 1] = g->succ_off[i] + succ[i].size();
    g->succ.resize(g->succ_off[n]);
    std::vector<std::size_t> indeg(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(succ[i].begin(), succ[i].end(), g->succ.begin() + g->succ_off[i]);
        for (std::size_t j : succ[i]) ++indeg[j];
    }
    g->pred_off.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) g->pred_off[j + 1] = g->pred_off[j] + indeg[j];
    g->pred.resize(g->pred_off[n]);
    std::vector<std::size_t> fill(g->pred_off.begin(), g->pred_off.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : succ[i]) g->pred[fill[j]++] = i;
    return g;
}

TransferOperator::TransferOperator(std::shared_ptr<const CylinderGraph> g) : g_(std::move(g)) {}

std::vector<double> TransferOperator::weights(double tau) const {
    std::vector<double> w(g_->size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-tau * g_->logd[i]);
    return w;
}

double TransferOperator::iterate(const std::vector<double>& w, std::vector<double>& u, bool transpose,
                                 PowerStats* stats, bool sign_only) {
    const CylinderGraph& g = *g_;
    const std::size_t n = g.size();
    if (u.size() != n) u.assign(n, 1.0 / double(n));
    std::vector<double> y(n), wu(n);
    double lambda = 0;
    for (int it = 1; it <= max_iter; ++it) {
        if (!transpose) {
            for (std::size_t i = 0; i < n; ++i) wu[i] = w[i] * u[i];
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0;
                for (std::size_t p = g.pred_off[j]; p < g.pred_off[j + 1]; ++p) s += wu[g.pred[p]];
                y[j] = s;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0;
                for (std::size_t p = g.succ_off[i]; p < g.succ_off[i + 1]; ++p) s += u[g.succ[p]];
                y[i] = w[i] * s;
            }
        }
        // Collatz-Wielandt bracket of the Perron root
        double lo = std::numeric_limits<double>::infinity(), hi = 0, sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double r = y[j] / u[j];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            sum += y[j];
        }
        lambda = 0.5 * (lo + hi);
        for (std::size_t j = 0; j < n; ++j) u[j] = y[j] / sum;
        if (sign_only && (lo > 1 || hi < 1)) return lo > 1 ? lo : hi;
        if (hi - lo <= rel_tol * lambda) {
            if (stats) *stats = {it, (hi - lo) / lambda};
            return lambda;
        }
    }
    throw Error(ErrorKind::NO_CONVERGENCE, "power iteration exceeded its cap");
}

double TransferOperator::perron_root(double tau, PowerStats* stats) {
    return iterate(weights(tau), u_, false, stats);
}

int TransferOperator::pressure_sign(double tau) {
    std::vector<double> u = u_;
    const double l = iterate(weights(tau), u, false, nullptr, true);
    return l > 1 ? 1 : (l < 1 ? -1 : 0);
}

EquilibriumWeights TransferOperator::equilibrium(double tau) {
    const auto w = weights(tau);
    EquilibriumWeights out;
    out.graph = g_;
    out.level = g_->level;
    out.tau = tau;
    out.lambda = iterate(w, u_, false, nullptr);
    iterate(w, v_, true, nullptr);
    out.h = u_;
    out.omega = v_;
    double s = 0;
    for (double x : out.omega) s += x;
    for (double& x : out.omega) x /= s;
    double hw = 0;
    for (std::size_t i = 0; i < out.h.size(); ++i) hw += out.h[i] * out.omega[i];
    out.mu.resize(out.h.size());
    for (std::size_t i = 0; i < out.h.size(); ++i) {
        out.h[i] /= hw;
        out.mu[i] = out.h[i] * out.omega[i];
    }
    return out;
}

double bowen_root(TransferOperator& op, double tol, double* residual) {
    double a = 1.0;
    double fa = op.pressure(a);
    if (std::abs(fa) <= tol) {
        if (residual) *residual = std::abs(fa);
        return a;
    }
    if (fa < 0) {
        a = 0.5;
        fa = op.pressure(a);
        if (fa < 0) throw Error(ErrorKind::BRACKET_FAILURE, "pressure negative at the lower end of the bracket");
    }
    // walk up by sign only; full solves are slow where the fixed-point loop
    // weight is close to the Perron root, which happens only far above the root
    static constexpr double kSteps[] = {1.05, 1.1, 1.15, 1.2, 1.3, 1.4, 1.6, 1.8, 2.0, 2.5};
    double b = 0;
    for (double s : kSteps) {
        if (s <= a) continue;
        if (op.pressure_sign(s) < 0) {
            b = s;
            break;
        }
        a = s;
    }
    if (b == 0) throw Error(ErrorKind::BRACKET_FAILURE, "pressure has no sign change on the bracket");
    if (a != 1.0 && a != 0.5) fa = op.pressure(a);
    double fb = op.pressure(b);
    // Illinois variant of regula falsi
    for (int it = 0; it < 200; ++it) {
        double c = (a * fb - b * fa) / (fb - fa);
        if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
        const double fc = op.pressure(c);
        if (std::abs(fc) <= tol || std::abs(b - a) < 1e-15) {
            if (residual) *residual = std::abs(fc);
            return c;
        }
        if (fc * fb < 0) {
            a = b;
            fa = fb;
        } else {
            fa *= 0.5;
        }
        b = c;
        fb = fc;
    }
    throw Error(ErrorKind::NO_CONVERGENCE, "Bowen root iteration cap");
}

double pressure(cplx, double tau, const BoettcherTable& table, int level) {
    TransferOperator op(make_graph(table, level));
    return op.pressure(tau);
}

double pressure_oracle(cplx delta, double tau, const BoettcherTable& table, int depth) {
    const QuadMap f = QuadMap::f(delta);
    const cplx base = table.at(1, 1);
    double sum = 0;
    std::function<void(cplx, double, int)> walk = [&](cplx z, double logd, int d) {
        if (d == depth) {
            sum += std::exp(-tau * logd);
            return;
        }
        cplx w1, w2;
        preimages(f, z, w1, w2);
        walk(w1, logd + std::log(std::abs(eval_deriv(f, w1))), d + 1);
        walk(w2, logd + std::log(std::abs(eval_deriv(f, w2))), d + 1);
    };
    walk(base, 0.0, 0);
    return std::log(sum) / depth;
}

DimensionResult hausdorff_dim(const BoettcherTable& table, int level, double tol, int tail_end) {
    if (level < 4) throw Error(ErrorKind::LEVEL_EXCEEDED, "dimension needs level >= 4");
    if (tail_end < 0) tail_end = default_tail_end(table.delta, level);
    DimensionResult r;
    r.level = level;
    for (int lev = level - 2; lev <= level; ++lev) {
        TransferOperator op(make_graph(table, lev, tail_end));
        double res = 0;
        r.level_values.push_back(bowen_root(op, tol, &res));
        if (lev == level) r.pressure_residual = res;
    }
    const double x0 = r.level_values[0], x1 = r.level_values[1], x2 = r.level_values[2];
    r.tau0 = x2;
    r.error_bound = std::abs(x2 - x1);
    const double d1 = x1 - x0, d2 = x2 - x1;
    r.richardson_estimate = x2;
    if (d1 != 0) {
        const double ratio = d2 / d1;
        if (std::abs(ratio) < 0.9) r.richardson_estimate = x2 + d2 * ratio / (1 - ratio);
    }
    return r;
}

DimensionResult hausdorff_dim(cplx delta, int level, double tol) {
    return hausdorff_dim(build_table(delta, level), level, tol);
}

EquilibriumWeights equilibrium(cplx, double tau, const BoettcherTable& table, int level) {
    TransferOperator op(make_graph(table, level));
    return op.equilibrium(tau);
}

double cylinder_measure(const EquilibriumWeights& w, int n) {
    double s = 0;
    for (std::size_t i : w.graph->cylinder_nodes(n)) s += w.mu[i];
    return s;
}

double remainder_measure(const EquilibriumWeights& w) {
    double s = 0;
    for (std::size_t i : w.graph->remainder_nodes()) s += w.mu[i];
    return s;
}

double lyapunov_integral(const EquilibriumWeights& w) {
    double s = 0;
    for (std::size_t i = 0; i < w.mu.size(); ++i) s += w.mu[i] * w.graph->logd[i];
    return s;
}

double derivative_integral(const EquilibriumWeights& w, cplx v) {
    const CylinderGraph& g = *w.graph;
    double s = 0;
    for (std::size_t i = 0; i < w.mu.size(); ++i) s += w.mu[i] * (v * g.dcoef[i]).real();
    return s;
}

double directional_derivative_formula(cplx, cplx v, const EquilibriumWeights& w) {
    return -w.tau * derivative_integral(w, v) / lyapunov_integral(w);
}

ExpansionReport orbit_expansion_check(const BoettcherTable& table, int base, int k_max, int samples) {
    if (base + 2 > table.level) throw Error(ErrorKind::LEVEL_EXCEEDED, "base cylinder finer than table");
    const QuadMap f = QuadMap::f(table.delta);
    const std::size_t a = std::size_t(1) << (table.level - base - 2), b = 2 * a, H = table.size();
    std::vector<cplx> starts;
    const std::size_t step = std::max<std::size_t>(1, (b - a) / std::size_t(samples));
    for (std::size_t k = a; k <= b; k += step) {
        starts.push_back(table.points[k]);
        starts.push_back(table.points[(H - k) & (H - 1)]);
    }
    ExpansionReport rep;
    rep.base = base;
    rep.min_deriv.assign(k_max, std::numeric_limits<double>::infinity());
    rep.min_ratio.assign(k_max, std::numeric_limits<double>::infinity());
    for (int k = 1; k <= k_max; ++k) rep.k.push_back(k);
    for (cplx z : starts) {
        double logd = 0;
        for (int k = 1; k <= k_max; ++k) {
            z = pullback_toward_zero(table.delta, z);
            logd += std::log(std::abs(eval_deriv(f, z)));
            const double d = std::exp(logd);
            rep.min_deriv[k - 1] = std::min(rep.min_deriv[k - 1], d);
            rep.min_ratio[k - 1] = std::min(rep.min_ratio[k - 1], d / (double(k) * k));
        }
    }
    rep.min_deriv_overall = *std::min_element(rep.min_deriv.begin(), rep.min_deriv.end());
    rep.min_ratio_overall = *std::min_element(rep.min_ratio.begin(), rep.min_ratio.end());
    return rep;
}

}  // namespace juliadim
