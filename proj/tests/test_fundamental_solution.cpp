#include "rfde/fundamental_solution.hpp"

#include <doctest.h>

#include <cmath>

using namespace rfde;

namespace {

SpectralModel pure_semigroup(std::vector<double> lams) {
    return SpectralModel::custom(std::move(lams), 0.0, 0.5, 0.0, 0.5, 1.0, DelayKernel::zero());
}

SpectralModel delay_only(double c1, double mu) {
    return SpectralModel::custom({1.0, 4.0, 16.0}, c1, mu, 0.0, 0.5, 1.0, DelayKernel::zero());
}

// two-interval closed form for c2 = 0: g = e^{-lam t}(1 + c1 lam^mu e^{lam r}(t - r))
double closed_form(double lam, double c1, double mu, double r, double t) {
    double v = std::exp(-lam * t);
    if (t >= r) v *= 1.0 + c1 * std::pow(lam, mu) * std::exp(lam * r) * (t - r);
    return v;
}

} // namespace

TEST_CASE("pure exponential when both delay terms vanish") {
    const StepGrid grid(1.0, 512, 2);
    const auto mf = solve_mode(1.0, pure_semigroup({1.0}), grid);
    CHECK(mf.values[0] == 1.0);
    CHECK(std::abs(mf.values[512] - std::exp(-1.0)) < 1e-8);
    CHECK(std::abs(mf.values[1024] - std::exp(-2.0)) < 1e-8);
}

TEST_CASE("restriction to [0,r] is the semigroup for c2 = 0") {
    const StepGrid grid(1.0, 256, 2);
    const auto mf = solve_mode(4.0, delay_only(1.0, 0.5), grid);
    for (int i = 0; i <= 256; ++i)
        CHECK(std::abs(mf.values[i] - std::exp(-4.0 * grid.node(i))) < 1e-12);
}

TEST_CASE("two-interval closed form") {
    const StepGrid grid(1.0, 512, 2);
    const auto model = delay_only(1.0, 0.5);
    const auto mf = solve_mode(1.0, model, grid);
    CHECK(mf.values[768] == doctest::Approx(0.5263954900047465).epsilon(1e-10)); // t = 1.5
    for (double lam : model.eigenvalues) {
        const auto g = solve_mode(lam, model, grid);
        double err = 0.0;
        for (int i = 512; i <= 1024; ++i)
            err = std::max(err, std::abs(g.values[i] - closed_form(lam, 1.0, 0.5, 1.0, grid.node(i))));
        CHECK(err < 1e-6);
    }
}

TEST_CASE("distributed kernel converges at second order to a refined reference") {
    const auto model =
        SpectralModel::custom({1.0}, 0.0, 0.5, 1.0, 0.5, 1.0, DelayKernel::constant(1.0));
    const auto ref = solve_mode(1.0, model, StepGrid(1.0, 4096, 2));
    double err_coarse = 0.0, err_mid = 0.0;
    const auto coarse = solve_mode(1.0, model, StepGrid(1.0, 512, 2));
    for (int i = 0; i <= 1024; ++i)
        err_coarse = std::max(err_coarse, std::abs(coarse.values[i] - ref.values[8 * i]));
    const auto mid = solve_mode(1.0, model, StepGrid(1.0, 1024, 2));
    for (int i = 0; i <= 2048; ++i)
        err_mid = std::max(err_mid, std::abs(mid.values[i] - ref.values[4 * i]));
    CHECK(err_coarse / err_mid > 3.4);
    CHECK(err_coarse / err_mid < 4.6);
}

TEST_CASE("causality: longer grids leave earlier nodes bit-identical") {
    const auto model =
        SpectralModel::heat(4, 0.5, 0.5, 0.25, 0.5, 1.0, DelayKernel::constant(1.0));
    const auto short_run = solve_all(model, StepGrid(1.0, 128, 2));
    const auto long_run = solve_all(model, StepGrid(1.0, 128, 3));
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i <= 256; ++i)
            CHECK(short_run.modes[k].values[i] == long_run.modes[k].values[i]);
}

TEST_CASE("solve_all is independent of worker count and truncation") {
    const auto model =
        SpectralModel::heat(8, 0.5, 0.5, 0.25, 0.5, 1.0, DelayKernel::constant(1.0));
    const StepGrid grid(1.0, 128, 2);
    const auto seq = solve_all(model, grid, 1);
    const auto par = solve_all(model, grid, 4);
    const auto wide = solve_all(model.extended(16), grid, 4);
    for (int k = 0; k < 8; ++k)
        for (int i = 0; i < grid.node_count(); ++i) {
            CHECK(seq.modes[k].values[i] == par.modes[k].values[i]);
            CHECK(seq.modes[k].values[i] == wide.modes[k].values[i]);
        }
}

TEST_CASE("gamma_norm reduces to the semigroup norm without delay terms") {
    const auto model = pure_semigroup({1.0, 4.0, 9.0, 16.0});
    const StepGrid grid(1.0, 64, 1);
    const auto fs = solve_all(model, grid);
    for (int i = 1; i <= 64; i += 7)
        CHECK(gamma_norm(fs, 0.5, i) ==
              doctest::Approx(frac_power_semigroup_norm(model, 0.5, grid.node(i))).epsilon(1e-8));
}

TEST_CASE("gamma_integral_norm closed form and degenerate case") {
    const auto model = pure_semigroup({1.0, 4.0});
    const StepGrid grid(1.0, 256, 1);
    const auto fs = solve_all(model, grid);
    CHECK(gamma_integral_norm(fs, 0.5, 10, 10) == 0.0);
    // gamma = 0: sup_k (e^{-lam s} - e^{-lam t})/lam, dominated by lam = 1
    const double s = grid.node(32), t = grid.node(200);
    const double expect = (std::exp(-s) - std::exp(-t)) / 1.0;
    CHECK(gamma_integral_norm(fs, 0.0, 32, 200) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("gamma_increment_norm") {
    const auto model = pure_semigroup({2.0});
    const StepGrid grid(1.0, 128, 2);
    const auto fs = solve_all(model, grid);
    CHECK(gamma_increment_norm(fs, 0.5, 40, 40) == 0.0);
    const double expect = std::pow(2.0, 0.5) * (std::exp(-2.0 * grid.node(20)) -
                                                std::exp(-2.0 * grid.node(90)));
    CHECK(gamma_increment_norm(fs, 0.5, 20, 90) == doctest::Approx(expect).epsilon(1e-7));
    CHECK_THROWS(gamma_increment_norm(fs, 0.5, 20, 200)); // straddles the join
}

TEST_CASE("gamma_kernel") {
    const StepGrid grid(1.0, 256, 1);
    const auto none = pure_semigroup({1.0, 4.0});
    for (int i = 0; i <= 256; i += 64) CHECK(gamma_kernel(none, grid, 0.5, i) == 0.0);

    const auto one =
        SpectralModel::custom({3.0}, 0.0, 0.5, 1.0, 0.5, 1.0, DelayKernel::constant(1.0));
    const double gamma = 0.4, lam = 3.0;
    for (int i : {16, 128, 256}) {
        const double t = grid.node(i);
        const double expect = std::pow(lam, gamma - 1.0) * (1.0 - std::exp(-lam * t));
        CHECK(gamma_kernel(one, grid, gamma, i) == doctest::Approx(expect).epsilon(1e-5));
        CHECK(gamma_kernel(one, grid, gamma, i) <= gamma_kernel_bound(one, gamma, t) + 1e-12);
    }
}

TEST_CASE("fit_estimate reduces to the semigroup bound without delay terms") {
    auto model = SpectralModel::heat(32, 0.0, 0.5, 0.0, 0.5, 1.0, DelayKernel::zero());
    model.c1 = 0.0;
    model.c2 = 0.0;
    const StepGrid grid(1.0, 128, 1);
    const auto fs = solve_all(model, grid);
    const auto rep = fit_estimate(EstimateName::FracPowerNorm, fs, FitParams{0, 0.5, 0.0, 0.0},
                                  interval_point_lattice(grid, 0, 32, 1), false);
    CHECK(rep.constant <= 0.4289);
    CHECK_FALSE(rep.diverged);
    CHECK_THROWS(fit_estimate(EstimateName::FracPowerNorm, fs, FitParams{0, 0.5, 0.0, 0.0}, {}, false));
}

TEST_CASE("fit_estimate finds a finite operator-increment constant") {
    const auto model =
        SpectralModel::heat(16, 0.5, 0.5, 0.25, 0.5, 1.0, DelayKernel::constant(1.0));
    const StepGrid grid(1.0, 128, 2);
    const auto fs = solve_all(model, grid);
    const auto rep = fit_estimate(EstimateName::OperatorIncrement, fs, FitParams{0, 0.0, 0.0, 0.4},
                                  interval_pair_lattice(grid, 0, 20), true, 2);
    CHECK(std::isfinite(rep.constant));
    CHECK(rep.constant > 0.0);
    CHECK_FALSE(rep.diverged);
}

TEST_CASE("lattice builders") {
    const StepGrid grid(1.0, 64, 2);
    const auto pts = interval_point_lattice(grid, 1, 16, 1);
    CHECK(pts.front().second == 65);
    CHECK(pts.back().second == 128);
    for (auto [a, b] : pts) CHECK(a == b);

    const auto pairs = interval_pair_lattice(grid, 0, 8);
    for (auto [a, b] : pairs) {
        CHECK(a < b);
        CHECK(a >= 1);
        CHECK(b <= 63);
    }
    CHECK_THROWS(interval_point_lattice(grid, 5, 4, 1));
}

TEST_CASE("misaligned or invalid grids are rejected") {
    CHECK_THROWS_AS(StepGrid(1.0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(StepGrid(-1.0, 8, 1), std::invalid_argument);
    CHECK_THROWS_AS(StepGrid(1.0, 8, 0), std::invalid_argument);
}

TEST_CASE("numerical blow-up raises a solver error") {
    const auto model =
        SpectralModel::custom({1.0}, 1e300, 0.5, 0.0, 0.5, 1.0, DelayKernel::zero());
    CHECK_THROWS_AS(solve_mode(1.0, model, StepGrid(1.0, 16, 3)), SolverError);
}
