#include "rfde/fundamental_solution.hpp"

#include "rfde/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rfde {

ModeFundamental solve_mode(double lambda, const SpectralModel& model, const StepGrid& grid) {
    if (std::abs(grid.h * grid.m - grid.r) > 1e-12 * grid.r)
        throw SolverError("solve_mode: grid step does not divide the delay");
    model.validate();

    const int m = grid.m;
    const int n = grid.intervals * m;
    const double h = grid.h;
    const double E = std::exp(-lambda * h);
    const double A1 = model.c1 * std::pow(lambda, model.mu);
    const double A2 = model.c2 * std::pow(lambda, model.nu);
    const bool has_kernel = !model.kernel.is_zero() && A2 != 0.0;
    std::vector<double> a_vals;
    if (has_kernel) a_vals = model.kernel.values_on(grid);

    ModeFundamental out;
    out.lambda = lambda;
    out.values.assign(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double>& g = out.values;
    g[0] = 1.0;

    // inner(i) over known nodes only (excludes p=m, whose g value is g_i) and
    // the coefficient of g_i at the theta=0 endpoint
    auto inner_known = [&](int i, double& coeff_end) -> double {
        coeff_end = 0.0;
        if (!has_kernel || i == 0) return 0.0;
        const int lo = std::max(0, m - i);
        if (lo == m) return 0.0;
        double acc = 0.5 * h * a_vals[lo] * g[lo + i - m];
        for (int p = lo + 1; p < m; ++p) acc += h * a_vals[p] * g[p + i - m];
        coeff_end = 0.5 * h * a_vals[m];
        return acc;
    };

    // g((t_i - r)^-) and g((t_i - r)^+): differ only at t_i = r, where the
    // right limit is g(0) = 1 and the left limit is 0
    auto hist_minus = [&](int i) { return i - m > 0 ? g[i - m] : 0.0; };
    auto hist_plus = [&](int i) {
        if (i - m > 0) return g[i - m];
        return i == m ? 1.0 : 0.0;
    };

    // F(0^+) = A1 g(-r) + A2 * (empty integral) = 0
    double Fp_prev = 0.0;

    for (int i = 1; i <= n; ++i) {
        double coeff_end = 0.0;
        const double Ik = inner_known(i, coeff_end);
        const double Fm_known = A1 * hist_minus(i) + A2 * Ik;
        // g_i = E g_{i-1} + (h/2)(E Fp_{i-1} + Fm_i) with
        // Fm_i = Fm_known + A2 * coeff_end * g_i, solved for g_i
        const double rhs = E * g[i - 1] + 0.5 * h * (E * Fp_prev + Fm_known);
        const double denom = 1.0 - 0.5 * h * A2 * coeff_end;
        if (denom == 0.0 || !std::isfinite(rhs))
            throw SolverError("solve_mode: numerical failure (lambda*h too large?) at lambda=" +
                              std::to_string(lambda));
        const double gi = rhs / denom;
        if (!std::isfinite(gi))
            throw SolverError("solve_mode: non-finite value at lambda=" + std::to_string(lambda));
        g[i] = gi;
        Fp_prev = A1 * hist_plus(i) + A2 * (Ik + coeff_end * gi);
    }
    return out;
}

FundamentalSolution solve_all(const SpectralModel& model, const StepGrid& grid, int workers) {
    FundamentalSolution fs;
    fs.model = model;
    fs.grid = grid;
    fs.modes.resize(model.eigenvalues.size());
    parallel_for(model.mode_count(), workers, [&](int k) {
        try {
            fs.modes[k] = solve_mode(model.eigenvalues[k], model, grid);
        } catch (const SolverError& e) {
            throw SolverError("mode " + std::to_string(k) + ": " + e.what());
        }
    });
    return fs;
}

double gamma_norm(const FundamentalSolution& fs, double gamma, int node) {
    double best = 0.0;
    for (const auto& mf : fs.modes)
        best = std::max(best, std::pow(mf.lambda, gamma) * std::abs(mf.values[node]));
    return best;
}

double gamma_integral_norm(const FundamentalSolution& fs, double gamma, int s_node, int t_node) {
    if (s_node > t_node) throw std::invalid_argument("gamma_integral_norm: need s <= t");
    if (s_node == t_node) return 0.0;
    const double h = fs.grid.h;
    double best = 0.0;
    for (const auto& mf : fs.modes) {
        double acc = 0.5 * (mf.values[s_node] + mf.values[t_node]);
        for (int i = s_node + 1; i < t_node; ++i) acc += mf.values[i];
        best = std::max(best, std::pow(mf.lambda, gamma) * std::abs(acc * h));
    }
    return best;
}

double gamma_increment_norm(const FundamentalSolution& fs, double gamma, int s_node, int t_node) {
    if (s_node > t_node) throw std::invalid_argument("gamma_increment_norm: need s <= t");
    if (s_node == t_node) return 0.0;
    if (s_node < ((t_node - 1) / fs.grid.m) * fs.grid.m)
        throw std::invalid_argument("gamma_increment_norm: nodes straddle an interval join");
    double best = 0.0;
    for (const auto& mf : fs.modes)
        best = std::max(best, std::pow(mf.lambda, gamma) *
                                  std::abs(mf.values[t_node] - mf.values[s_node]));
    return best;
}

double operator_increment_norm(const FundamentalSolution& fs, int s_node, int t_node) {
    return gamma_increment_norm(fs, 0.0, s_node, t_node);
}

double gamma_kernel(const SpectralModel& model, const StepGrid& grid, double gamma, int t_node) {
    if (t_node < 0 || t_node > grid.m)
        throw std::invalid_argument("gamma_kernel: t outside [0, r]");
    if (t_node == 0) return 0.0;
    const double h = grid.h;
    double best = 0.0;
    for (double lam : model.eigenvalues) {
        const double lg = std::pow(lam, gamma);
        double acc = 0.0;
        for (int p = 0; p <= t_node; ++p) {
            // a(-s) at s = p*h, i.e. theta = -p*h
            const double ap = model.kernel.eval(-p * h, grid);
            double w = (p == 0 || p == t_node) ? 0.5 * h : h;
            acc += w * lg * std::exp(-lam * (t_node - p) * h) * ap;
        }
        best = std::max(best, std::abs(acc));
    }
    return best;
}

double gamma_kernel_bound(const SpectralModel& model, double gamma, double t) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma_kernel_bound: gamma must lie in (0,1)");
    return model.kernel.sup_norm(model.delay) *
           std::pow(gamma / 2.718281828459045235, gamma) * std::pow(t, 1.0 - gamma) /
           (1.0 - gamma);
}

const char* estimate_label(EstimateName name) {
    switch (name) {
        case EstimateName::FracPowerNorm: return "frac_power_norm_bound";
        case EstimateName::FracPowerIntegral: return "frac_power_integral_bound";
        case EstimateName::FracPowerIncrement: return "frac_power_increment_bound";
        case EstimateName::OperatorIncrement: return "operator_increment_bound";
        case EstimateName::KernelHolder: return "kernel_convolution_holder";
    }
    return "?";
}

NodeLattice interval_point_lattice(const StepGrid& grid, int n, int count, int skip) {
    if (n < 0 || n >= grid.intervals)
        throw std::invalid_argument("interval_point_lattice: interval out of range");
    if (count < 1 || skip < 1) throw std::invalid_argument("interval_point_lattice: bad shape");
    const int first = n * grid.m + skip;
    const int last = (n + 1) * grid.m;
    NodeLattice out;
    const int span = last - first;
    const int steps = std::min(count - 1, span);
    for (int j = 0; j <= steps; ++j) {
        const int node = first + (steps == 0 ? 0 : (span * j) / steps);
        if (out.empty() || out.back().second != node) out.push_back({node, node});
    }
    return out;
}

NodeLattice interval_pair_lattice(const StepGrid& grid, int n, int per_side) {
    if (n < 0 || n >= grid.intervals)
        throw std::invalid_argument("interval_pair_lattice: interval out of range");
    if (per_side < 2) throw std::invalid_argument("interval_pair_lattice: need per_side >= 2");
    const int first = n * grid.m + 1;
    const int last = (n + 1) * grid.m - 1;
    const int span = last - first;
    const int steps = std::min(per_side - 1, span);
    std::vector<int> nodes;
    for (int j = 0; j <= steps; ++j) {
        const int node = first + (steps == 0 ? 0 : (span * j) / steps);
        if (nodes.empty() || nodes.back() != node) nodes.push_back(node);
    }
    NodeLattice out;
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b) out.push_back({nodes[a], nodes[b]});
    return out;
}

namespace {

// Per-mode cumulative trapezoid of g from node 0 (pure integral, no jump
// handling needed: g is continuous on [0, Nr]).
std::vector<std::vector<double>> prefix_integrals(const FundamentalSolution& fs) {
    std::vector<std::vector<double>> P(fs.modes.size());
    const double h = fs.grid.h;
    for (std::size_t k = 0; k < fs.modes.size(); ++k) {
        const auto& g = fs.modes[k].values;
        P[k].resize(g.size());
        P[k][0] = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i)
            P[k][i] = P[k][i - 1] + 0.5 * h * (g[i - 1] + g[i]);
    }
    return P;
}

// Best constant of one estimate on one lattice against one solution; the
// lattice is given in base-grid indices and `scale` maps them to this
// solution's grid (2 for an m -> 2m refinement).
struct BestFit {
    double constant = 0.0;
    double argmax_s = 0.0;
    double argmax_t = 0.0;
};

BestFit best_constant(EstimateName name, const FundamentalSolution& fs, const FitParams& p,
                      const NodeLattice& lattice, int scale) {
    BestFit best;
    const StepGrid& grid = fs.grid;
    const double nr = p.n * grid.r;

    std::vector<std::vector<double>> prefix;
    if (name == EstimateName::FracPowerIntegral) prefix = prefix_integrals(fs);

    std::vector<double> kernel_values; // KernelHolder: Gamma at needed nodes, indexed by node
    if (name == EstimateName::KernelHolder) {
        kernel_values.assign(static_cast<std::size_t>(grid.m) + 1,
                             std::numeric_limits<double>::quiet_NaN());
        for (auto [a, b] : lattice)
            for (int node : {a * scale, b * scale})
                if (std::isnan(kernel_values[node]))
                    kernel_values[node] = gamma_kernel(fs.model, grid, p.gamma, node);
    }

    for (auto [a, b] : lattice) {
        const int s_node = a * scale;
        const int t_node = b * scale;
        const double s = grid.node(s_node);
        const double t = grid.node(t_node);
        double lhs = 0.0, rhs = 1.0;
        switch (name) {
            case EstimateName::FracPowerNorm:
                lhs = gamma_norm(fs, p.gamma, t_node);
                rhs = std::pow(t - nr, -p.gamma);
                break;
            case EstimateName::FracPowerIntegral: {
                double sup = 0.0;
                for (std::size_t k = 0; k < fs.modes.size(); ++k)
                    sup = std::max(sup, std::pow(fs.modes[k].lambda, p.gamma) *
                                            std::abs(prefix[k][t_node] - prefix[k][s_node]));
                lhs = sup;
                rhs = 1.0;
                break;
            }
            case EstimateName::FracPowerIncrement:
                lhs = gamma_increment_norm(fs, p.gamma, s_node, t_node);
                rhs = std::pow(t - s, p.beta) * std::pow(s - nr, -p.beta - p.gamma);
                break;
            case EstimateName::OperatorIncrement:
                lhs = operator_increment_norm(fs, s_node, t_node);
                rhs = std::pow((t - s) / (s - nr), p.kappa);
                break;
            case EstimateName::KernelHolder:
                lhs = std::abs(kernel_values[t_node] - kernel_values[s_node]);
                rhs = std::pow(t - s, p.beta);
                break;
        }
        const double cand = lhs / rhs;
        if (cand > best.constant || !std::isfinite(cand)) {
            best.constant = cand;
            best.argmax_s = s;
            best.argmax_t = t;
            if (!std::isfinite(cand)) break;
        }
    }
    return best;
}

} // namespace

FitReport fit_estimate(EstimateName name, const FundamentalSolution& fs,
                       const FundamentalSolution* fine, const FundamentalSolution* extended,
                       const FitParams& params, const NodeLattice& lattice) {
    if (lattice.empty()) throw std::invalid_argument("fit_estimate: empty lattice");

    FitReport rep;
    rep.estimate = estimate_label(name);
    rep.n = params.n;
    rep.gamma = params.gamma;
    rep.beta = params.beta;
    rep.kappa = params.kappa;

    const BestFit base = best_constant(name, fs, params, lattice, 1);
    rep.constant = base.constant;
    rep.argmax_s = base.argmax_s;
    rep.argmax_t = base.argmax_t;

    if ((name == EstimateName::FracPowerNorm || name == EstimateName::FracPowerIntegral ||
         name == EstimateName::FracPowerIncrement) &&
        params.gamma < fs.model.nu)
        rep.note = "outside-estimate-range";

    if (base.constant > 0.0 && std::isfinite(base.constant)) {
        if (fine)
            rep.refine_ratio = best_constant(name, *fine, params, lattice, 2).constant / base.constant;
        if (extended)
            rep.trunc_ratio =
                best_constant(name, *extended, params, lattice, 1).constant / base.constant;
    }

    rep.diverged = !std::isfinite(rep.constant) || rep.refine_ratio > 1.5;
    return rep;
}

FitReport fit_estimate(EstimateName name, const FundamentalSolution& fs, const FitParams& params,
                       const NodeLattice& lattice, bool refinement_study, int workers) {
    if (!refinement_study) return fit_estimate(name, fs, nullptr, nullptr, params, lattice);

    StepGrid fine_grid(fs.grid.r, 2 * fs.grid.m, fs.grid.intervals);
    const FundamentalSolution fs_fine = solve_all(fs.model, fine_grid, workers);
    if (fs.model.square_spectrum) {
        const FundamentalSolution fs_ext =
            solve_all(fs.model.extended(2 * fs.model.mode_count()), fs.grid, workers);
        return fit_estimate(name, fs, &fs_fine, &fs_ext, params, lattice);
    }
    return fit_estimate(name, fs, &fs_fine, nullptr, params, lattice);
}

} // namespace rfde
