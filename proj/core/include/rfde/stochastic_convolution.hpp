#pragma once

#include "rfde/fundamental_solution.hpp"

#include <cstdint>
#include <vector>

namespace rfde {

// Truncated trace-class noise: Q-eigenvalues q_j and the diagonal entries
// b_j of B, aligned with the modes of A.
struct NoiseModel {
    std::vector<double> q_eigenvalues; // lambda^Q_j > 0
    std::vector<double> b_diagonal;    // entries of B, same length
    double q_tail = 0.0;               // analytic bound on the neglected sum_{j>J} q_j

    // q_j = scale * j^{-exponent}, b_j = b, J modes. The neglected tail is
    // bounded by the integral remainder scale * J^{1-exponent}/(exponent-1).
    static NoiseModel power(int modes, double exponent, double scale, double b);
    static NoiseModel custom(std::vector<double> q, std::vector<double> b);

    int mode_count() const { return static_cast<int>(q_eigenvalues.size()); }
    double trace() const;        // sum of q_j (retained part of Tr Q)
    double hs_norm_sq() const;   // sum q_j b_j^2  (||B||^2 in L2(K_Q, H))
    void validate(int solution_modes) const;
};

// Euler (left-point) paths of the stochastic convolution W_G on the grid.
struct PathEnsemble {
    std::uint64_t seed = 0;
    StepGrid grid;
    std::vector<double> eigenvalues;        // operator eigenvalues of retained noise modes
    int paths = 0;
    int modes = 0;
    std::vector<double> values;             // [path][mode][node], flattened

    double w(int path, int mode, int node) const {
        return values[(static_cast<std::size_t>(path) * modes + mode) * grid.node_count() + node];
    }
    double h_norm(int path, int node) const;
    double gamma_norm(int path, int node, double gamma) const;
};

// W_j(t_i) = sum_{l<i} g_j(t_i - t_l) b_j dW_l with dW_l ~ N(0, q_j h),
// left-point evaluation (Ito convention). Bit-identical for a fixed seed
// regardless of worker count.
PathEnsemble simulate_paths(const FundamentalSolution& fs, const NoiseModel& noise,
                            std::uint64_t seed, int paths, int workers = 1);

// Deterministic second moment E||(-A)^gamma (W_G(t) - W_G(s))||^2 via the
// Ito-isometry split
//   sum_j q_j b_j^2 lambda_j^{2 gamma} [ int_s^t g_j(t-u)^2 du
//                                      + int_0^s (g_j(t-u) - g_j(s-u))^2 du ],
// trapezoid on grid nodes. gamma = 0 gives the H-norm case.
double second_moment(const FundamentalSolution& fs, const NoiseModel& noise,
                     double gamma, int s_node, int t_node);

struct McMomentStat {
    double mean = 0.0;
    double stderr_ = 0.0;
    int paths = 0;
};

// Monte Carlo mean and standard error of ||(-A)^gamma (W(t)-W(s))||^2 over
// `paths` Euler paths, computed without storing trajectories.
std::vector<McMomentStat> mc_increment_moments(
    const FundamentalSolution& fs, const NoiseModel& noise, double gamma,
    const NodeLattice& pairs, std::uint64_t seed, int paths, int workers = 1);

// Euler samples of the single coordinate W_j at one node, one per path.
std::vector<double> euler_terminal_samples(const FundamentalSolution& fs,
                                           const NoiseModel& noise, int mode, int node,
                                           std::uint64_t seed, int paths);

// One exact draw of (W_j(t_{a_1}), ..., W_j(t_{a_n})) per mode from the true
// Gaussian law, via symmetric eigen-factorization of the covariance
//   Cov(W_j(t_a), W_j(t_b)) = q_j b_j^2 int_0^{min} g_j(t_a-u) g_j(t_b-u) du.
// Throws SolverError if a covariance block is indefinite beyond tolerance.
std::vector<std::vector<double>> exact_gaussian_sample(
    const FundamentalSolution& fs, const NoiseModel& noise,
    const std::vector<int>& nodes, std::uint64_t seed, std::uint64_t path_index = 0);

// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b);

// Critical value c(alpha) * sqrt((n+m)/(n m)); c(0.01) = 1.628.
double ks_critical(double alpha, int n, int m);

} // namespace rfde
