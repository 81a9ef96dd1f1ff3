#pragma once

#include "rfde/stochastic_convolution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rfde {

// Deterministic increment moments E||(-A)^gamma (W(t)-W(s))||^2 on a lattice
// of grid-node pairs, optionally with Monte Carlo companions.
struct MomentCurve {
    double gamma = 0.0;
    double h = 0.0;                 // grid step, for increments in time units
    NodeLattice pairs;              // (s_node, t_node)
    std::vector<double> quadrature; // second_moment at each pair
    std::vector<McMomentStat> mc;   // empty when no MC run was attached
};

MomentCurve moment_curve(const FundamentalSolution& fs, const NoiseModel& noise,
                         double gamma, const NodeLattice& pairs);

// Least-squares slope of log E||increment||^2 against log(t-s), restricted to
// increments in [delta_min, delta_max]. The slope estimates 2*beta of the
// moment bound E||d||^2 <= M d^{2 beta}. Needs at least 8 usable points.
FitReport fit_moment_exponent(const MomentCurve& curve, double delta_min, double delta_max);

enum class PathNorm { H, Gamma };

// Per-path regression of log2(max dyadic increment norm at level l) against l;
// reports the median slope magnitude across paths (constant = median,
// ci_low/ci_high = interquartile range). `levels` are dyadic levels l with
// 2^l increments over the whole grid; the grid length must be divisible.
FitReport estimate_path_holder(const PathEnsemble& ensemble, PathNorm norm, double gamma,
                               const std::vector<int>& levels);

// One verification cell: a fitted report judged against a pinned threshold.
struct CellResult {
    FitReport report;
    bool in_range = true; // parameters inside the estimate's stated range
    bool pass = false;
    std::string check; // human-readable statement of the threshold applied
};

struct DashboardResult {
    std::vector<CellResult> cells;
    bool all_pass() const; // over in-range cells only
};

struct VerifyOptions {
    std::uint64_t seed = 2026;
    int workers = 1;
    int paths = 200;           // path count for the Hoelder estimator
    int mc_paths = 2000;       // path count for the Ito-isometry check
    double inject_scale = 1.0; // negative-control hook: scales bound-type statistics
    std::vector<double> gammas = {0.5, 0.75};
    std::vector<double> betas = {0.2, 0.4};
    std::vector<double> kappas = {0.25, 0.4};
    std::vector<int> intervals = {0, 1, 2};
};

// Runs every estimate verifier on the given model and aggregates pass/fail
// against the thresholds frozen in the implementation. `model` must use the
// square spectrum (truncation doubling needs an extensible spectrum).
DashboardResult verify_dashboard(const SpectralModel& model, const StepGrid& grid,
                                 const NoiseModel& noise, const VerifyOptions& opts);

} // namespace rfde
