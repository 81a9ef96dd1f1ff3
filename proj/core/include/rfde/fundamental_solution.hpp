#pragma once

#include "rfde/fit_report.hpp"
#include "rfde/grid.hpp"
#include "rfde/spectral_model.hpp"

#include <stdexcept>
#include <vector>

namespace rfde {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid samples of the scalar fundamental solution g_lambda(t) for one mode,
// with the conventions g(0) = 1 and g(t) = 0 for t < 0.
struct ModeFundamental {
    double lambda = 0.0;
    std::vector<double> values; // g at grid nodes, values[0] == 1
};

struct FundamentalSolution {
    SpectralModel model;
    StepGrid grid;
    std::vector<ModeFundamental> modes; // one per retained eigenvalue

    const ModeFundamental& mode(int k) const { return modes.at(k); }
    double g(int k, int node) const { return modes[k].values[node]; }
};

// Solves the per-mode Volterra integral equation
//   g(t) = e^{-lambda t}
//        + int_0^t e^{-lambda(t-s)} [c1 lambda^mu g(s-r)
//              + c2 lambda^nu int_{-r}^0 a(theta) g(s+theta) dtheta] ds
// by composite trapezoid on the aligned grid, interval by interval. The
// kernel e^{-lambda(t-s)} is carried exactly through a one-step recurrence,
// and integrand jumps at delay multiples are handled with one-sided values,
// so delay-interval joins cost no accuracy.
ModeFundamental solve_mode(double lambda, const SpectralModel& model, const StepGrid& grid);

// solve_mode over all retained eigenvalues; deterministic and independent of
// worker count. Per-mode failures are reported with the mode index attached.
FundamentalSolution solve_all(const SpectralModel& model, const StepGrid& grid, int workers = 1);

// sup_k lambda_k^gamma |g_k(t)| at a grid node, the operator norm of
// (-A)^gamma G(t) in the diagonal setting.
double gamma_norm(const FundamentalSolution& fs, double gamma, int node);

// sup_k lambda_k^gamma |int_s^t g_k(u) du| for nodes inside one delay
// interval (nr <= s < t <= (n+1)r); trapezoid on the grid.
double gamma_integral_norm(const FundamentalSolution& fs, double gamma, int s_node, int t_node);

// sup_k lambda_k^gamma |g_k(t) - g_k(s)| for nodes strictly inside one
// delay interval.
double gamma_increment_norm(const FundamentalSolution& fs, double gamma, int s_node, int t_node);

// gamma = 0 case of the above, used for the Hoelder-kernel continuity fit.
double operator_increment_norm(const FundamentalSolution& fs, int s_node, int t_node);

// Gamma(t) = sup_k int_0^t lambda_k^gamma e^{-lambda_k (t-s)} a(-s) ds for
// t in [0, r] (a grid node); trapezoid quadrature.
double gamma_kernel(const SpectralModel& model, const StepGrid& grid, double gamma, int t_node);

// Uniform bound |a|_inf (gamma/e)^gamma t^{1-gamma} / (1-gamma) for Gamma(t).
double gamma_kernel_bound(const SpectralModel& model, double gamma, double t);

enum class EstimateName { FracPowerNorm, FracPowerIntegral, FracPowerIncrement, OperatorIncrement, KernelHolder };

const char* estimate_label(EstimateName name);

struct FitParams {
    int n = 0;
    double gamma = 0.0;
    double beta = 0.0;
    double kappa = 0.0;
};

// Node-index lattice. Single-point estimates (FracPowerNorm) read only .second.
using NodeLattice = std::vector<std::pair<int, int>>;

// t-nodes of interval n, excluding the first `skip` nodes after the join
// (the bound blows up like (t - nr)^{-gamma} there).
NodeLattice interval_point_lattice(const StepGrid& grid, int n, int count, int skip = 1);

// (s, t) pairs strictly inside interval n, s < t, about `per_side` values per
// coordinate.
NodeLattice interval_pair_lattice(const StepGrid& grid, int n, int per_side);

// Smallest constant C such that the named inequality holds at every lattice
// point, with its arg-max point and the constant's relative change under one
// grid refinement (m -> 2m) and one truncation doubling (K -> 2K).
FitReport fit_estimate(EstimateName name, const FundamentalSolution& fs,
                       const FitParams& params, const NodeLattice& lattice,
                       bool refinement_study = true, int workers = 1);

// Same, but with the refinement solutions supplied by the caller (nullptr
// skips the corresponding study): `fine` must use the same model on an
// m -> 2m grid, `extended` the K -> 2K model on the same grid.
FitReport fit_estimate(EstimateName name, const FundamentalSolution& fs,
                       const FundamentalSolution* fine, const FundamentalSolution* extended,
                       const FitParams& params, const NodeLattice& lattice);

} // namespace rfde
