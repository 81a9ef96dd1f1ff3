#pragma once

#include "rfde/fundamental_solution.hpp"

#include <vector>

namespace rfde {

// Initial datum phi = (phi0, phi1): per-mode initial value and per-mode
// history samples on the theta grid [-r, 0] (m+1 samples per mode).
struct InitialDatum {
    std::vector<double> phi0;               // K entries
    std::vector<std::vector<double>> phi1;  // K x (m+1)

    static InitialDatum zero(int modes, int m);
    void validate(int modes, int m) const;
};

// Per-mode forcing samples on the time grid; empty means f == 0.
using Forcing = std::vector<std::vector<double>>; // K x node_count

struct Trajectory {
    StepGrid grid;
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> values; // [mode][node]

    double h_norm(int node) const;
    double gamma_norm(int node, double gamma) const;
};

// The structural kernel of the variation-of-constants formula,
//   U_t(theta) = g_k(t - theta - r) c1 lambda^mu
//              + c2 lambda^nu int_{-r}^theta g_k(t - theta + tau) a(tau) dtau,
// at grid node t and theta node p (theta = -r + p h).
double structural_kernel(const FundamentalSolution& fs, int t_node, int theta_node, int k);

// Mild solution by the variation-of-constants formula:
//   y_k(t) = g_k(t) phi0_k + int_{-r}^0 U_t(theta) phi1_k(theta) dtheta
//          + int_0^t g_k(t-s) f_k(s) ds
// with trapezoid quadrature on the shared grid.
Trajectory mild_solve(const FundamentalSolution& fs, const InitialDatum& datum,
                      const Forcing& forcing = {}, int workers = 1);

// Residual of the integrated equation: per mode
//   R_k = max_i | y_k(t_i) - phi0_k - int_0^{t_i} [ -lambda_k y_k(s)
//         + c1 lambda^mu y_k(s-r) + c2 lambda^nu int a(theta) y_k(s+theta) dtheta
//         + f_k(s) ] ds |,
// history extended by phi1; returns the max over modes. Decays as O(h^2)
// under grid refinement for smooth data.
double residual_check(const Trajectory& traj, const SpectralModel& model,
                      const InitialDatum& datum, const Forcing& forcing = {});

} // namespace rfde
