#include "rfde/mild_solution.hpp"

#include "rfde/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfde {

InitialDatum InitialDatum::zero(int modes, int m) {
    InitialDatum d;
    d.phi0.assign(static_cast<std::size_t>(modes), 0.0);
    d.phi1.assign(static_cast<std::size_t>(modes),
                  std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
    return d;
}

void InitialDatum::validate(int modes, int m) const {
    if (static_cast<int>(phi0.size()) != modes)
        throw std::invalid_argument("InitialDatum: phi0 mode count mismatch");
    if (static_cast<int>(phi1.size()) != modes)
        throw std::invalid_argument("InitialDatum: phi1 mode count mismatch");
    for (const auto& hist : phi1) {
        if (static_cast<int>(hist.size()) != m + 1)
            throw std::invalid_argument("InitialDatum: phi1 needs m+1 samples per mode");
        for (double v : hist)
            if (!std::isfinite(v)) throw std::invalid_argument("InitialDatum: non-finite history");
    }
    for (double v : phi0)
        if (!std::isfinite(v)) throw std::invalid_argument("InitialDatum: non-finite phi0");
}

double Trajectory::h_norm(int node) const {
    double acc = 0.0;
    for (const auto& mode : values) acc += mode[node] * mode[node];
    return std::sqrt(acc);
}

double Trajectory::gamma_norm(int node, double gamma) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double w = std::pow(eigenvalues[k], gamma);
        acc += w * w * values[k][node] * values[k][node];
    }
    return std::sqrt(acc);
}

namespace {

// g_k at time t = j*h with the convention g(t) = 0 for t < 0.
inline double g_at(const ModeFundamental& mf, int j) {
    return j >= 0 ? mf.values[static_cast<std::size_t>(j)] : 0.0;
}

} // namespace

double structural_kernel(const FundamentalSolution& fs, int t_node, int theta_node, int k) {
    const StepGrid& grid = fs.grid;
    if (t_node < 0 || t_node >= grid.node_count())
        throw std::invalid_argument("structural_kernel: t outside grid");
    if (theta_node < 0 || theta_node > grid.m)
        throw std::invalid_argument("structural_kernel: theta outside [-r, 0]");
    const auto& mf = fs.modes.at(k);
    // theta = -r + theta_node*h, so t - theta - r has index t_node - theta_node... :
    // t - theta - r = t_node*h - (-r + p*h) - r = (t_node - p)*h
    const int p = theta_node;
    double out = fs.model.a1_entry(k) * g_at(mf, t_node - p);
    const double A2 = fs.model.a2_entry(k);
    if (A2 != 0.0 && !fs.model.kernel.is_zero() && p > 0) {
        // int_{-r}^{theta} g(t - theta + tau) a(tau) dtau, tau = -r + q*h,
        // q = 0..p; argument t - theta + tau = (t_node - p + q)*h.
        // g vanishes at negative arguments and jumps at 0, so the node where
        // the argument hits 0 gets a half weight (right-side value only).
        double acc = 0.0;
        const double h = grid.h;
        for (int q = 0; q <= p; ++q) {
            const int j = t_node - p + q;
            if (j < 0) continue;
            double w = (q == 0 || q == p) ? 0.5 * h : h;
            if (j == 0 && q != 0 && q != p) w = 0.5 * h;
            acc += w * fs.model.kernel.eval(-grid.r + q * h, grid) * mf.values[j];
        }
        out += A2 * acc;
    }
    return out;
}

Trajectory mild_solve(const FundamentalSolution& fs, const InitialDatum& datum,
                      const Forcing& forcing, int workers) {
    const StepGrid& grid = fs.grid;
    const int K = static_cast<int>(fs.modes.size());
    const int n = grid.node_count() - 1;
    datum.validate(K, grid.m);
    if (!forcing.empty()) {
        if (static_cast<int>(forcing.size()) != K)
            throw std::invalid_argument("mild_solve: forcing mode count mismatch");
        for (const auto& f : forcing)
            if (static_cast<int>(f.size()) != n + 1)
                throw std::invalid_argument("mild_solve: forcing grid mismatch");
    }

    Trajectory traj;
    traj.grid = grid;
    traj.eigenvalues = fs.model.eigenvalues;
    traj.values.assign(static_cast<std::size_t>(K),
                       std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));

    const double h = grid.h;
    parallel_for(K, workers, [&](int k) {
        const auto& mf = fs.modes[k];
        auto& y = traj.values[k];
        const bool hist = std::any_of(datum.phi1[k].begin(), datum.phi1[k].end(),
                                      [](double v) { return v != 0.0; });
        for (int i = 0; i <= n; ++i) {
            double v = mf.values[i] * datum.phi0[k];
            if (hist) {
                // int_{-r}^0 U_t(theta) phi1(theta) dtheta, trapezoid in theta
                double acc = 0.0;
                for (int p = 0; p <= grid.m; ++p) {
                    const double w = (p == 0 || p == grid.m) ? 0.5 * h : h;
                    acc += w * structural_kernel(fs, i, p, k) * datum.phi1[k][p];
                }
                v += acc;
            }
            if (!forcing.empty() && i > 0) {
                // int_0^t g(t-s) f(s) ds; g(t-s) at s = t has index 0 (value 1)
                double acc = 0.0;
                for (int l = 0; l <= i; ++l) {
                    const double w = (l == 0 || l == i) ? 0.5 * h : h;
                    acc += w * mf.values[i - l] * forcing[k][l];
                }
                v += acc;
            }
            y[i] = v;
        }
    });
    return traj;
}

double residual_check(const Trajectory& traj, const SpectralModel& model,
                      const InitialDatum& datum, const Forcing& forcing) {
    const StepGrid& grid = traj.grid;
    const int K = static_cast<int>(traj.values.size());
    const int n = grid.node_count() - 1;
    const int m = grid.m;
    const double h = grid.h;
    datum.validate(K, m);
    const bool has_kernel = !model.kernel.is_zero();
    std::vector<double> a_vals;
    if (has_kernel) a_vals = model.kernel.values_on(grid);

    double worst = 0.0;
    for (int k = 0; k < K; ++k) {
        const auto& y = traj.values[k];
        const double lam = model.eigenvalues[k];
        const double A1 = model.a1_entry(k);
        const double A2 = model.a2_entry(k);

        // The extended solution (phi1 on [-r,0), y on [0,Nr]) may jump at 0
        // when phi1(0) != phi0; every quadrature below uses one-sided values
        // across that jump, mirroring the solver's treatment.
        const double y_left0 = datum.phi1[k][m]; // limit from the history side
        const double y_right0 = y[0];
        auto yx = [&](int j) { return j >= 0 ? y[j] : datum.phi1[k][j + m]; };

        // inner theta-integral at time node l, jump split at theta = -t_l
        auto inner = [&](int l) {
            double acc = 0.0;
            for (int p = 0; p <= m; ++p) {
                const int j = l + p - m;
                double val = yx(j);
                if (j == 0) {
                    if (p == m) val = y_left0;       // l == 0: approach theta=0 from inside
                    else if (p != 0) val = 0.5 * (y_left0 + y_right0);
                }
                const double w = (p == 0 || p == m) ? 0.5 * h : h;
                acc += w * a_vals[p] * val;
            }
            return acc;
        };

        // integrand of the integrated equation at node l; the delayed term
        // y(s - r) is one-sided at s = r
        auto F = [&](int l, bool minus_side) {
            double d = (l == m) ? (minus_side ? y_left0 : y_right0) : yx(l - m);
            double v = -lam * y[l] + A1 * d;
            if (!forcing.empty()) v += forcing[k][l];
            if (has_kernel && A2 != 0.0) v += A2 * inner(l);
            return v;
        };

        double integral = 0.0;
        double f_prev = F(0, false);
        double res = std::abs(y[0] - datum.phi0[k]);
        for (int i = 1; i <= n; ++i) {
            integral += 0.5 * h * (f_prev + F(i, true));
            f_prev = F(i, false);
            res = std::max(res, std::abs(y[i] - datum.phi0[k] - integral));
        }
        worst = std::max(worst, res);
    }
    return worst;
}

} // namespace rfde
