#pragma once

#include <memory>
#include <vector>

#include "juliadim/boettcher.hpp"

namespace juliadim {

// Markov partition of the circle used by the discretized operator: the
// level-N dyadic words, with the two words touching angle 0 replaced by the
// cylinder chains [2^-(m+1), 2^-m) and their conjugates for m = N..tail_end,
// plus one remainder node at each side of the fixed point.
// tail_end = N - 1 gives the plain uniform level-N partition.
// Node potentials average log|f'| over the two endpoints of the node's arc,
// which keeps the scheme symmetric under complex conjugation.
struct CylinderGraph {
    cplx delta;
    int level = 0;
    int tail_end = 0;
    std::vector<cplx> z;        // left endpoint
    std::vector<cplx> z_right;
    std::vector<double> lo;     // left endpoint angle in turns
    std::vector<double> logd;   // mean of log|f'| at the endpoints
    std::vector<cplx> dcoef;    // d/dt logd along delta + t v is Re(v dcoef)
    std::vector<std::size_t> pred_off, pred;
    std::vector<std::size_t> succ_off, succ;

    std::size_t size() const { return z.size(); }
    std::size_t words() const { return std::size_t(1) << level; }
    std::size_t p_node(int m) const { return words() + std::size_t(m - level); }
    std::size_t q_node(int m) const { return words() + std::size_t(tail_end - level + 1) + std::size_t(m - level); }
    // nodes whose interval lies in C_n (both sides)
    std::vector<std::size_t> cylinder_nodes(int n) const;
    std::vector<std::size_t> remainder_nodes() const { return {0, words() - 1}; }
};

int default_tail_end(cplx delta, int level);

std::shared_ptr<const CylinderGraph> make_graph(const BoettcherTable& table, int level, int tail_end);
inline std::shared_ptr<const CylinderGraph> make_graph(const BoettcherTable& table, int level) {
    return make_graph(table, level, default_tail_end(table.delta, level));
}

struct EquilibriumWeights {
    std::shared_ptr<const CylinderGraph> graph;
    int level = 0;
    double tau = 0;
    double lambda = 0;
    std::vector<double> mu;     // sums to 1
    std::vector<double> omega;  // left eigenvector, sums to 1
    std::vector<double> h;      // right eigenvector, sum h*omega = 1
};

struct PowerStats {
    int iterations = 0;
    double bracket = 0;  // Collatz-Wielandt gap relative to lambda
};

class TransferOperator {
public:
    explicit TransferOperator(std::shared_ptr<const CylinderGraph> g);

    const CylinderGraph& graph() const { return *g_; }
    std::shared_ptr<const CylinderGraph> graph_ptr() const { return g_; }

    // Perron root, warm-started from the previous call
    double perron_root(double tau, PowerStats* stats = nullptr);
    double pressure(double tau) { return std::log(perron_root(tau)); }
    // sign of the pressure, stopping as soon as the eigenvalue bracket excludes 1
    int pressure_sign(double tau);
    EquilibriumWeights equilibrium(double tau);

    double rel_tol = 1e-12;
    int max_iter = 200000;

private:
    std::vector<double> weights(double tau) const;
    double iterate(const std::vector<double>& w, std::vector<double>& u, bool transpose, PowerStats* stats,
                   bool sign_only = false);

    std::shared_ptr<const CylinderGraph> g_;
    std::vector<double> u_, v_;
};

struct DimensionResult {
    double tau0 = 0;
    double pressure_residual = 0;
    int level = 0;
    double richardson_estimate = 0;
    double error_bound = 0;
    std::vector<double> level_values;  // roots at levels N-2, N-1, N
};

// Bowen root of tau -> pressure on the given graph
double bowen_root(TransferOperator& op, double tol, double* residual = nullptr);

double pressure(cplx delta, double tau, const BoettcherTable& table, int level);
double pressure_oracle(cplx delta, double tau, const BoettcherTable& table, int depth);
DimensionResult hausdorff_dim(const BoettcherTable& table, int level, double tol = 1e-10, int tail_end = -1);
DimensionResult hausdorff_dim(cplx delta, int level, double tol = 1e-10);
EquilibriumWeights equilibrium(cplx delta, double tau, const BoettcherTable& table, int level);

double cylinder_measure(const EquilibriumWeights& w, int n);
double remainder_measure(const EquilibriumWeights& w);
double lyapunov_integral(const EquilibriumWeights& w);
// sum mu * d/dt log|f'_{delta + t v}(phi)|
double derivative_integral(const EquilibriumWeights& w, cplx v);
double directional_derivative_formula(cplx delta, cplx v, const EquilibriumWeights& w);

struct ExpansionReport {
    int base = 0;
    std::vector<int> k;
    std::vector<double> min_deriv;        // min |(f^k)'(z)| over samples in C_{base+k}
    std::vector<double> min_ratio;        // min |(f^k)'(z)| / k^2
    double min_ratio_overall = 0;
    double min_deriv_overall = 0;
};

ExpansionReport orbit_expansion_check(const BoettcherTable& table, int base, int k_max, int samples = 16);

}  // namespace juliadim
