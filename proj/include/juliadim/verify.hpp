#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "juliadim/quad_family.hpp"

namespace juliadim {

enum class Suite { APPENDIX, FATOU, CYLINDERS, TRANSFER, PERTURBATION, QUADRATURE, ALL };

Suite parse_suite(const std::string& name);  // throws PARSE_ERROR
std::string suite_name(Suite s);

struct Check {
    std::string suite;
    std::string name;
    bool pass = false;
    double value = 0;  // measured quantity
    double bound = 0;  // what it was compared against
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    int samples = 10000;
};

std::vector<Check> run_suite(Suite s, const VerifyOptions& opt = {});
bool all_pass(const std::vector<Check>& checks);

// Smallest K >= 1 such that, for all n,
//   n|delta| <= 1:  n^-p / K < v_n < K n^-p
//   n|delta| >  1:  |delta|^q e^{-K n|delta|} / K < v_n < K |delta|^q e^{-n|delta|/K}
// Returns the pair (K parabolic, K hyperbolic).
struct TwoRegimeK {
    double parabolic = 1;
    double hyperbolic = 1;
    int parabolic_count = 0;
    int hyperbolic_count = 0;
};
TwoRegimeK two_regime_constants(const std::vector<int>& n, const std::vector<double>& v, double t, double p, double q);

// Smallest N such that ok[n] holds for every sampled n > N (ok indexed like n).
int envelope_start(const std::vector<int>& n, const std::vector<bool>& ok);

}  // namespace juliadim
