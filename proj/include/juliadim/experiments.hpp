#pragma once

#include <optional>
#include <string>
#include <vector>

#include "juliadim/transfer.hpp"

namespace juliadim {

struct RunOptions {
    int level = 14;
    double tol = 1e-12;  // Bowen root tolerance on |pressure|
    int threads = 1;
    std::string cache_dir;  // empty: no table cache
};

// Dimension and derivative data at one parameter, all on one fixed partition.
struct PointEval {
    cplx delta;
    int level = 0;
    int tail_end = 0;
    double dim = 0;
    double pressure_residual = 0;
    double chi = 0;           // Lyapunov integral
    double deriv_formula = 0; // along v
    double deriv_fd = 0;      // central difference along v, NaN if not requested
};

BoettcherTable get_table(cplx delta, const RunOptions& opt);
// root at exactly opt.level on the partition with the given tail (-1: default)
double dimension_at(cplx delta, const RunOptions& opt, int tail_end = -1);
PointEval evaluate_point(cplx delta, cplx v, const RunOptions& opt, double fd_step = 0, int tail_end = -1);

struct RayRow {
    double t = 0;
    bool ok = false;
    std::string flag;
    PointEval point;
    double ratio = 0;  // deriv_formula / t^(2 d0 - 2)
};

struct RayScan {
    double alpha = 0;
    int level = 0;
    double d0 = 0;
    double omega_value = 0;  // Omega(tan alpha) at d0
    std::vector<RayRow> rows;
    int fit_points = 0;
    double fitted_A = 0;        // least squares r(t) ~ A Omega over the smallest t
    double chi_small = 0;       // chi at the smallest t
    double implied_H_mu = 0;    // from A = 2^-d0 H_mu d0 / chi
    double A_big = 0;           // 2^(2 d0 - 2) A
    double A_big_check = 0;     // same quantity rebuilt from implied H_mu
    double stabilization = 0;   // |r(t_min)/r(2 t_min) - 1|, NaN if 2 t_min is not on the grid
};

std::vector<double> default_t_grid(double t_start = 0.4, double t_end = 0.05);
std::vector<double> geometric_grid(double t_start, double t_end, int points);
RayScan ray_scan(double alpha, const std::vector<double>& t_values, double d0, const RunOptions& opt,
                 int fit_points = 3);

struct D0Estimate {
    double value = 0;
    double uncertainty = 0;   // change when the smallest t is dropped
    double halving_change = 0;
    double exponent = 0;      // 2 value - 1
    std::vector<double> t;
    std::vector<double> dims;
    std::vector<double> pairwise;  // Richardson value from each consecutive pair
    bool in_bounds = false;   // 1 < value < 1.295
};

// Richardson extrapolation of D(t) on the real ray, assuming
// D(t) = d0 - c t^(2 d0 - 1) + ...; the exponent is iterated to consistency.
D0Estimate d0_estimate(const std::vector<double>& t_sequence, const RunOptions& opt);
double richardson_pair(double t1, double D1, double t2, double D2, double p);

struct EpsRow {
    double eps = 0;
    double dim = 0;
    double d_prime = 0;   // dd/deps from the derivative formula
    double d_second = 0;  // second central difference, NaN at the ends
    bool noisy = false;
};

struct EpsScan {
    std::vector<EpsRow> rows;
    double slope = 0;         // log|d'| vs log(-eps) least squares
    double min_second = 0;
    bool convex = false;
};

// real ray in the p_eps family; all points share one partition so that the
// differences see a smooth function of eps
EpsScan eps_scan(const std::vector<double>& eps_values, const RunOptions& opt);
std::vector<double> linear_grid(double a, double b, int points);

struct MandelbrotCell {
    double re = 0, im = 0;
    bool in_delta = false;  // delta plane membership of f_delta
    bool in_eps = false;    // eps plane membership of p_eps, c = 1/4 + eps
};
std::vector<MandelbrotCell> mandelbrot_grid(double re_min, double re_max, double im_min, double im_max, int nx,
                                            int ny, int max_iter, int threads);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace juliadim
