#pragma once

#include <complex>

#include "juliadim/gauss_kronrod.hpp"

namespace juliadim {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    double x_split = 1.0;
    double x_cap = 200.0;
    int max_subdivisions = 4000;
};

// x sinh x + th x sin(th x) - 2 (cosh x - cos th x)
double step5_numerator(double x, double theta);
// cosh x - cos th x, written as 2 sinh^2(x/2) + 2 sin^2(th x/2)
double cosh_minus_cos(double x, double theta);
// partial sums of the power series of step5_numerator up to x^(2 terms)
bool step5_partial_sums_positive(double theta, double x, int terms);

QuadratureResult omega(double theta, double d0, const QuadratureSpec& spec = {});
double find_theta0(double d0, double lo = 1.0, double hi = 2.0, const QuadratureSpec& spec = {});
QuadratureResult delta_alpha(double alpha, double D0, double H_mu, const QuadratureSpec& spec = {});

double lambda_fn(double h, double eps, std::complex<double> z);
QuadratureResult lambda_tail(double h, double eps, double alpha, double t_lower, const QuadratureSpec& spec = {});
double q_fn(double h, double alpha, double t, double H_mu, const QuadratureSpec& spec = {});
QuadratureResult q_integral(double h, double alpha, double H_mu, const QuadratureSpec& spec = {});

// int_0^s Re(v (sinh(vt) - vt)/(cosh(vt) - 1)) dt and its closed form
QuadratureResult step3_lhs(double s, double alpha, const QuadratureSpec& spec = {});
double step3_rhs(double s, double alpha);

}  // namespace juliadim
