#include "rfde/stochastic_convolution.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace rfde;

namespace {

FundamentalSolution ou_solution(double lam, int m, int intervals) {
    const auto model =
        SpectralModel::custom({lam}, 0.0, 0.5, 0.0, 0.5, 1.0, DelayKernel::zero());
    return solve_all(model, StepGrid(1.0, m, intervals));
}

double ou_variance(double q, double b, double lam, double t) {
    return q * b * b * (1.0 - std::exp(-2.0 * lam * t)) / (2.0 * lam);
}

} // namespace

TEST_CASE("noise model bookkeeping") {
    const auto n = NoiseModel::power(64, 2.0, 6.0 / (M_PI * M_PI), 1.0);
    CHECK(n.trace() == doctest::Approx(1.0).epsilon(0.02)); // partial sum of 6/pi^2 k^-2
    CHECK(n.trace() < 1.0);
    CHECK(n.hs_norm_sq() == doctest::Approx(n.trace()));
    CHECK(n.q_tail > 0.0);
    CHECK(n.trace() + n.q_tail >= 1.0);
    CHECK_THROWS(NoiseModel::power(8, 0.9, 1.0, 1.0)); // not trace class
    CHECK_THROWS(NoiseModel::custom({1.0, -1.0}, {1.0, 1.0}));
    CHECK_THROWS(n.validate(32)); // more noise modes than solution modes
}

TEST_CASE("zero diffusion gives identically zero paths") {
    const auto fs = ou_solution(1.0, 64, 2);
    const auto noise = NoiseModel::custom({1.0}, {0.0});
    const auto ens = simulate_paths(fs, noise, 99, 5);
    for (double v : ens.values) CHECK(v == 0.0);
}

TEST_CASE("Euler sample variance matches the OU closed form") {
    const double lam = 1.0, q = 0.7, b = 1.3;
    const auto fs = ou_solution(lam, 128, 2);
    const auto noise = NoiseModel::custom({q}, {b});
    const int P = 2000;
    const auto ens = simulate_paths(fs, noise, 31415, P, 4);
    const int node = 256; // t = 2
    double mean = 0.0, m2 = 0.0;
    for (int p = 0; p < P; ++p) mean += ens.w(p, 0, node);
    mean /= P;
    for (int p = 0; p < P; ++p) {
        const double d = ens.w(p, 0, node) - mean;
        m2 += d * d;
    }
    const double var = m2 / (P - 1);
    const double expect = ou_variance(q, b, lam, 2.0);
    const double se = expect * std::sqrt(2.0 / (P - 1)); // SE of a chi^2 variance estimate
    CHECK(std::abs(var - expect) < 3.0 * se);
}

TEST_CASE("ensembles are bit-identical across worker counts") {
    const auto fs = ou_solution(2.0, 64, 2);
    const auto noise = NoiseModel::power(1, 2.0, 1.0, 1.0);
    const auto a = simulate_paths(fs, noise, 777, 6, 1);
    const auto b = simulate_paths(fs, noise, 777, 6, 8);
    CHECK(a.values == b.values);
    const auto c = simulate_paths(fs, noise, 778, 6, 1);
    CHECK(a.values != c.values);
}

TEST_CASE("second_moment") {
    const double lam = 3.0, q = 0.5, b = 2.0;
    const auto fs = ou_solution(lam, 256, 2);
    const auto noise = NoiseModel::custom({q}, {b});
    CHECK(second_moment(fs, noise, 0.0, 40, 40) == 0.0);
    for (int node : {32, 128, 400}) {
        const double t = fs.grid.node(node);
        CHECK(second_moment(fs, noise, 0.0, 0, node) ==
              doctest::Approx(ou_variance(q, b, lam, t)).epsilon(1e-4));
    }
    // linear in each q-eigenvalue
    const auto scaled = NoiseModel::custom({3.0 * q}, {b});
    CHECK(second_moment(fs, scaled, 0.0, 0, 128) ==
          doctest::Approx(3.0 * second_moment(fs, noise, 0.0, 0, 128)).epsilon(1e-12));
    // gamma-weighting is a lambda^{2 gamma} multiplier for a single mode
    CHECK(second_moment(fs, noise, 0.5, 0, 128) ==
          doctest::Approx(lam * second_moment(fs, noise, 0.0, 0, 128)).epsilon(1e-12));
}

TEST_CASE("second_moment grows with added noise modes") {
    const auto model = SpectralModel::heat(8, 0.5, 0.5, 0.25, 0.5, 1.0, DelayKernel::constant(1.0));
    const auto fs = solve_all(model, StepGrid(1.0, 64, 2));
    double prev = 0.0;
    for (int J : {2, 4, 8}) {
        std::vector<double> q, b;
        for (int j = 1; j <= J; ++j) {
            q.push_back(1.0 / (j * j));
            b.push_back(1.0);
        }
        const double v = second_moment(fs, NoiseModel::custom(q, b), 0.0, 32, 96);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("mc moments agree with the scheme-exact expectation and the quadrature") {
    const auto model = SpectralModel::heat(8, 0.5, 0.5, 0.25, 0.5, 1.0, DelayKernel::constant(1.0));
    const auto fs = solve_all(model, StepGrid(1.0, 128, 2));
    const auto noise = NoiseModel::power(8, 2.0, 0.6, 1.0);
    NodeLattice pairs = {{96, 112}, {96, 128}, {96, 144}, {96, 160}};
    const auto mc = mc_increment_moments(fs, noise, 0.0, pairs, 1, 1500, 4);

    // expectation of the Euler statistic itself, exact up to sampling noise
    auto discrete = [&](int s, int t) {
        double total = 0.0;
        for (int j = 0; j < noise.mode_count(); ++j) {
            const auto& g = fs.modes[j].values;
            double acc = 0.0;
            for (int l = 0; l < s; ++l) {
                const double d = g[t - l] - g[s - l];
                acc += d * d;
            }
            for (int l = s; l < t; ++l) acc += g[t - l] * g[t - l];
            total += noise.q_eigenvalues[j] * noise.b_diagonal[j] * noise.b_diagonal[j] *
                     fs.grid.h * acc;
        }
        return total;
    };
    for (std::size_t c = 0; c < pairs.size(); ++c) {
        const double disc = discrete(pairs[c].first, pairs[c].second);
        const double quad = second_moment(fs, noise, 0.0, pairs[c].first, pairs[c].second);
        CHECK(std::abs(mc[c].mean - disc) < 3.0 * mc[c].stderr_);
        // left-point Riemann sums vs trapezoid: O(h) gap, small at m = 128
        CHECK(quad == doctest::Approx(disc).epsilon(0.03));
        CHECK(mc[c].stderr_ > 0.0);
        CHECK(mc[c].paths == 1500);
    }
}

TEST_CASE("exact sampler matches the closed-form marginal and the Euler law") {
    const double lam = 1.0;
    const auto fs = ou_solution(lam, 128, 2);
    const auto noise = NoiseModel::custom({1.0}, {1.0});
    const int node = 256;
    const int P = 2000;
    std::vector<double> exact(P);
    for (int p = 0; p < P; ++p)
        exact[p] = exact_gaussian_sample(fs, noise, {node}, 5150, p)[0][0];
    double m2 = 0.0, mean = std::accumulate(exact.begin(), exact.end(), 0.0) / P;
    for (double v : exact) m2 += (v - mean) * (v - mean);
    const double var = m2 / (P - 1);
    const double expect = ou_variance(1.0, 1.0, lam, 2.0);
    CHECK(std::abs(var - expect) < 3.0 * expect * std::sqrt(2.0 / (P - 1)));

    const auto euler = euler_terminal_samples(fs, noise, 0, node, 5151, P);
    CHECK(ks_distance(euler, exact) < ks_critical(0.01, P, P));
}

TEST_CASE("exact sampler degenerates to zero for zero diffusion") {
    const auto fs = ou_solution(1.0, 64, 1);
    const auto noise = NoiseModel::custom({1.0}, {0.0});
    const auto s = exact_gaussian_sample(fs, noise, {16, 32, 64}, 1, 0);
    for (double v : s[0]) CHECK(v == 0.0);
}

TEST_CASE("joint exact samples have the right increment variance") {
    // over two time points the covariance factorization must reproduce
    // Var(W(t2) - W(t1)) = second_moment(s, t)
    const auto fs = ou_solution(2.0, 64, 2);
    const auto noise = NoiseModel::custom({1.0}, {1.0});
    const int a = 64, b = 96;
    const int P = 4000;
    double mean = 0.0, m2 = 0.0;
    std::vector<double> inc(P);
    for (int p = 0; p < P; ++p) {
        const auto s = exact_gaussian_sample(fs, noise, {a, b}, 808, p);
        inc[p] = s[0][1] - s[0][0];
        mean += inc[p];
    }
    mean /= P;
    for (double v : inc) m2 += (v - mean) * (v - mean);
    const double var = m2 / (P - 1);
    const double expect = second_moment(fs, noise, 0.0, a, b);
    CHECK(std::abs(var - expect) < 4.0 * expect * std::sqrt(2.0 / (P - 1)));
}

TEST_CASE("kurtosis of the ensemble marginal is Gaussian within tolerance") {
    const auto fs = ou_solution(1.0, 64, 2);
    const auto noise = NoiseModel::custom({1.0}, {1.0});
    const int P = 2000;
    const auto ens = simulate_paths(fs, noise, 4242, P, 4);
    const int node = 128;
    double mean = 0.0;
    for (int p = 0; p < P; ++p) mean += ens.w(p, 0, node);
    mean /= P;
    double m2 = 0.0, m4 = 0.0;
    for (int p = 0; p < P; ++p) {
        const double d = ens.w(p, 0, node) - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= P;
    m4 /= P;
    const double kurt = m4 / (m2 * m2);
    CHECK(std::abs(kurt - 3.0) < 4.0 * std::sqrt(24.0 / P));
}

TEST_CASE("ks helpers") {
    std::vector<double> a, b;
    for (int i = 0; i < 500; ++i) {
        a.push_back(std::sin(i * 12.9898) * 43758.5453 - std::floor(std::sin(i * 12.9898) * 43758.5453));
        b.push_back(a.back() + 2.0);
    }
    CHECK(ks_distance(a, a) == 0.0);
    CHECK(ks_distance(a, b) == doctest::Approx(1.0));
    CHECK(ks_critical(0.01, 2000, 2000) == doctest::Approx(1.628 * std::sqrt(2.0 / 2000.0)).epsilon(1e-3));
    CHECK_THROWS(ks_distance({}, a));
}
