#include "rfde/regularity_lab.hpp"

#include "rfde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace rfde {

namespace {

NoiseModel truncated(const NoiseModel& noise, int modes) {
    const int J = std::min(modes, noise.mode_count());
    return NoiseModel::custom(
        std::vector<double>(noise.q_eigenvalues.begin(), noise.q_eigenvalues.begin() + J),
        std::vector<double>(noise.b_diagonal.begin(), noise.b_diagonal.begin() + J));
}

// log-spaced increment pairs starting at s0_node
NodeLattice log_spaced_pairs(const StepGrid& grid, int s0_node, double d_min, double d_max,
                             int count) {
    NodeLattice pairs;
    for (int j = 0; j < count; ++j) {
        const double d =
            d_min * std::pow(d_max / d_min, count == 1 ? 0.0 : double(j) / (count - 1));
        const int di = std::max(1, static_cast<int>(std::lround(d / grid.h)));
        if (s0_node + di >= grid.node_count()) break;
        if (!pairs.empty() && pairs.back().second == s0_node + di) continue;
        pairs.push_back({s0_node, s0_node + di});
    }
    return pairs;
}

} // namespace

DashboardResult verify_dashboard(const SpectralModel& model, const StepGrid& grid,
                                 const NoiseModel& noise, const VerifyOptions& opts) {
    DashboardResult out;
    const double inj = opts.inject_scale;
    auto add = [&](FitReport rep, bool in_range, bool pass, std::string check) {
        out.cells.push_back({std::move(rep), in_range, pass, std::move(check)});
    };

    const FundamentalSolution fs = solve_all(model, grid, opts.workers);
    const StepGrid fine_grid(grid.r, 2 * grid.m, grid.intervals);
    const FundamentalSolution fs_fine = solve_all(model, fine_grid, opts.workers);
    std::unique_ptr<FundamentalSolution> fs_ext;
    if (model.square_spectrum)
        fs_ext = std::make_unique<FundamentalSolution>(
            solve_all(model.extended(2 * model.mode_count()), grid, opts.workers));

    // --- fractional-power norm and integral bounds, per interval and gamma ---
    for (int n : opts.intervals) {
        if (n >= grid.intervals) continue;
        for (double gamma : opts.gammas) {
            FitParams p{n, gamma, 0.0, 0.0};
            FitReport rep = fit_estimate(EstimateName::FracPowerNorm, fs, &fs_fine, fs_ext.get(), p,
                                         interval_point_lattice(grid, n, 64, 1));
            const bool stable = std::abs(rep.refine_ratio - 1.0) <= 0.05 &&
                                (!fs_ext || std::abs(rep.trunc_ratio - 1.0) <= 0.02);
            add(rep, rep.note.empty(), !rep.diverged && std::isfinite(rep.constant) && stable,
                "finite constant, <=5% under m->2m, <=2% under K->2K");

            FitReport ri = fit_estimate(EstimateName::FracPowerIntegral, fs, &fs_fine, fs_ext.get(), p,
                                        interval_pair_lattice(grid, n, 50));
            const bool stable_i = std::abs(ri.refine_ratio - 1.0) <= 0.05 &&
                                  (!fs_ext || std::abs(ri.trunc_ratio - 1.0) <= 0.02);
            add(ri, ri.note.empty(), !ri.diverged && std::isfinite(ri.constant) && stable_i,
                "finite constant, <=5% under m->2m, <=2% under K->2K");
        }
    }

    // --- fractional-power increment bound ---
    for (int n : opts.intervals) {
        if (n >= grid.intervals) continue;
        for (double gamma : opts.gammas)
            for (double beta : opts.betas) {
                if (beta >= 1.0 - gamma) continue;
                FitParams p{n, gamma, beta, 0.0};
                FitReport rep = fit_estimate(EstimateName::FracPowerIncrement, fs, &fs_fine, fs_ext.get(), p,
                                             interval_pair_lattice(grid, n, 50));
                add(rep, rep.note.empty(), !rep.diverged && std::isfinite(rep.constant),
                    "finite constant on 50x50 lattice, diverged=false");
            }
    }

    // --- operator increment bound (Hoelder kernel) ---
    for (int n : opts.intervals) {
        if (n >= grid.intervals) continue;
        for (double kappa : opts.kappas) {
            FitParams p{n, 0.0, 0.0, kappa};
            FitReport rep = fit_estimate(EstimateName::OperatorIncrement, fs, &fs_fine, fs_ext.get(), p,
                                         interval_pair_lattice(grid, n, 50));
            const bool in_range =
                model.kernel.holder.has_value() && kappa < model.kernel.holder->rho;
            if (!in_range) rep.note = "outside-estimate-range";
            add(rep, in_range, !rep.diverged && std::isfinite(rep.constant),
                "finite constant for kappa < rho");
        }
    }

    // --- kernel convolution: uniform bound and Hoelder continuity ---
    {
        const double gamma = 0.5;
        FitReport rep;
        rep.estimate = "kernel_convolution_uniform";
        rep.gamma = gamma;
        const double bound = gamma_kernel_bound(model, gamma, grid.r);
        double worst = 0.0;
        for (int t = 0; t <= grid.m; t += std::max(1, grid.m / 32))
            worst = std::max(worst, gamma_kernel(model, grid, gamma, t));
        rep.constant = worst;
        add(rep, true, inj * worst <= bound + 1e-12,
            "sup_t Gamma(t) <= |a|_inf (gamma/e)^gamma r^(1-gamma)/(1-gamma)");

        for (double beta : opts.betas) {
            if (beta >= 1.0 - gamma) continue;
            FitParams p{0, gamma, beta, 0.0};
            NodeLattice pairs = interval_pair_lattice(grid, 0, 24);
            FitReport rh = fit_estimate(EstimateName::KernelHolder, fs, &fs_fine, fs_ext.get(), p, pairs);
            add(rh, true, !rh.diverged && std::isfinite(rh.constant),
                "finite Hoelder constant for beta < 1-gamma");
        }
    }

    // --- moment exponent in H (slope ~ 1) ---
    {
        const int s0 = static_cast<int>(std::lround(1.5 * grid.r / grid.h));
        const NodeLattice pairs =
            log_spaced_pairs(grid, std::min(s0, grid.node_count() - grid.m / 4 - 1), 4.0 * grid.h,
                             grid.r / 8.0, 12);
        FitReport rep = fit_moment_exponent(moment_curve(fs, noise, 0.0, pairs), 4.0 * grid.h,
                                            grid.r / 8.0);
        rep.estimate = "moment_exponent_h";
        add(rep, true, !rep.degenerate && rep.constant >= 0.9, "log-log slope >= 0.9");
    }

    // --- moment exponent in the gamma-norm, designated probe noise ---
    {
        const double gamma = 0.25;
        const NoiseModel probe = NoiseModel::power(model.mode_count(), 1.2, 1.0, 1.0);
        const int s0 = static_cast<int>(std::lround(1.5 * grid.r / grid.h));
        const NodeLattice pairs =
            log_spaced_pairs(grid, std::min(s0, grid.node_count() - grid.m / 4 - 1), 4.0 * grid.h,
                             grid.r / 8.0, 12);
        FitReport rep = fit_moment_exponent(moment_curve(fs, probe, gamma, pairs), 4.0 * grid.h,
                                            grid.r / 8.0);
        rep.estimate = "moment_exponent_gamma";
        rep.gamma = gamma;
        add(rep, true, !rep.degenerate && std::abs(rep.constant - 0.5) <= 0.1,
            "log-log slope within 0.5 +- 0.1 (= 1 - 2 gamma)");
    }

    // --- pathwise Hoelder exponents ---
    {
        const StepGrid path_grid(grid.r, 512, 2);
        const FundamentalSolution pfs = solve_all(model, path_grid, opts.workers);

        const NoiseModel noise32 = truncated(noise, 32);
        const PathEnsemble ens_h = simulate_paths(pfs, noise32, opts.seed, opts.paths, opts.workers);
        FitReport rep = estimate_path_holder(ens_h, PathNorm::H, 0.0, {5, 6, 7, 8, 9});
        add(rep, true, !rep.degenerate && rep.constant >= 0.35,
            "median path exponent >= 0.35 (theory: any beta < 1/2)");

        const NoiseModel probe32 = NoiseModel::power(32, 1.2, 1.0, 1.0);
        const PathEnsemble ens_g =
            simulate_paths(pfs, probe32, opts.seed + 1, opts.paths, opts.workers);
        FitReport rg = estimate_path_holder(ens_g, PathNorm::Gamma, 0.25, {4, 5, 6, 7, 8});
        add(rg, true, !rg.degenerate && rg.constant >= 0.13 && rg.constant <= 0.35,
            "median path exponent in [0.13, 0.35] (theory: beta < 1/2 - gamma = 0.25)");
    }

    // --- Ito-isometry Monte Carlo consistency ---
    {
        const StepGrid mc_grid(grid.r, 128, 2);
        const FundamentalSolution mfs = solve_all(model, mc_grid, opts.workers);
        NodeLattice pairs;
        const int s0 = 96;
        for (int j = 1; j <= 10; ++j) pairs.push_back({s0, s0 + 8 * j});
        const auto mc =
            mc_increment_moments(mfs, noise, 0.0, pairs, opts.seed, opts.mc_paths, opts.workers);
        int hits = 0;
        double worst_z = 0.0;
        for (std::size_t c = 0; c < pairs.size(); ++c) {
            const double quad = second_moment(mfs, noise, 0.0, pairs[c].first, pairs[c].second);
            const double z = inj * std::abs(mc[c].mean - quad) / mc[c].stderr_;
            worst_z = std::max(worst_z, z);
            if (z <= 3.0) ++hits;
        }
        FitReport rep;
        rep.estimate = "ito_isometry_mc";
        rep.constant = worst_z;
        add(rep, true, hits * 100 >= 95 * static_cast<int>(pairs.size()),
            "MC mean within 3 standard errors at >= 95% of lattice points");

        // distributional check of the Euler scheme at t = 2r, leading mode
        const NoiseModel n1 = truncated(noise, 1);
        const int node = mc_grid.node_count() - 1;
        auto euler = euler_terminal_samples(mfs, n1, 0, node, opts.seed + 2, 2000);
        std::vector<double> exact(2000);
        for (int p = 0; p < 2000; ++p)
            exact[p] = exact_gaussian_sample(mfs, n1, {node}, opts.seed + 3,
                                             static_cast<std::uint64_t>(p))[0][0];
        const double d = inj * ks_distance(euler, exact);
        FitReport rk;
        rk.estimate = "euler_vs_exact_ks";
        rk.constant = d;
        add(rk, true, d < ks_critical(0.01, 2000, 2000),
            "two-sample KS distance below the 1% critical value");
    }

    // --- scalar inequality suite ---
    {
        const std::uint64_t tag = opts.seed ^ 0x51b9ac2a43c95c17ull;
        int bad_power = 0, bad_log = 0, bad_semi = 0;
        for (int i = 0; i < 10000; ++i) {
            const double u1 = rng::uniform01(rng::key(tag, 0, 0, i));
            const double u2 = rng::uniform01(rng::key(tag, 1, 0, i));
            const double u3 = rng::uniform01(rng::key(tag, 2, 0, i));
            const double u4 = rng::uniform01(rng::key(tag, 3, 0, i));

            // a^d - b^d <= (a-b)^d for a >= b >= 0, d in (0,1]
            const double a = 10.0 * u1, b = a * u2, d = u3;
            if (std::pow(a, d) - std::pow(b, d) > std::pow(a - b, d) + 1e-12) ++bad_power;

            // log(1+x) <= x^al / al for x > 0, al in (0,1]
            const double x = 20.0 * u1, al = u4;
            if (std::log1p(x) > std::pow(x, al) / al + 1e-12) ++bad_log;

            // sup_k |e^{-lam t} - e^{-lam s}| <= (1/al)(t-s)^al s^{-al}, 0 < s < t
            const double s = 0.05 + 3.0 * u2, t = s + 3.0 * u3;
            double lhs = 0.0;
            for (double lam : model.eigenvalues)
                lhs = std::max(lhs, std::abs(std::exp(-lam * t) - std::exp(-lam * s)));
            if (inj * lhs > (1.0 / al) * std::pow(t - s, al) * std::pow(s, -al) + 1e-12) ++bad_semi;
        }
        FitReport rep;
        rep.estimate = "scalar_inequalities";
        rep.constant = double(bad_power + bad_log + bad_semi);
        add(rep, true, bad_power + bad_log + bad_semi == 0,
            "zero violations over 3 x 10^4 random instances");
    }

    // --- semigroup difference constants ---
    {
        std::vector<std::pair<double, double>> st;
        for (int i = 1; i <= 20; ++i)
            for (int j = i + 1; j <= 21; ++j)
                st.push_back({0.1 * i, 0.1 * j});
        const auto fit = semigroup_difference_constant(model, 0.5, 0.2, st);
        add(fit.power_bound, true, !fit.power_bound.diverged,
            "finite constant against s^-gamma - t^-gamma");
        add(fit.holder_bound, true, !fit.holder_bound.diverged,
            "finite constant against (t-s)^beta s^(-beta-gamma)");
    }

    return out;
}

} // namespace rfde
