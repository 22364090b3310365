#pragma once

#include <limits>

#include "juliadim/quad_family.hpp"

namespace juliadim {

cplx expm1c(cplx z);
cplx log1pc(cplx z);

cplx psi(cplx delta, cplx w);
cplx phi_fatou(cplx delta, cplx z);
cplx psi_prime(cplx delta, cplx w);

struct PsiPrimeForms {
    cplx minus_exp, plus_exp, sinh_form;
};
PsiPrimeForms psi_prime_forms(cplx delta, cplx w);

enum class Direction { FWD, BWD };
cplx fatou_step(cplx delta, cplx w, Direction dir);

struct Sector {
    enum Kind { PLUS, MINUS } kind = PLUS;
    double theta = 0;
    double r = std::numeric_limits<double>::infinity();
    double R = -1;  // |Re z| > R when R >= 0
};

bool sector_contains(const Sector& s, cplx z);
bool w_region_contains(double alpha, cplx z);

}  // namespace juliadim
