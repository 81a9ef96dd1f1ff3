#include "rfde/rng.hpp"
#include "rfde/spectral_model.hpp"

#include <doctest.h>

#include <cmath>

using namespace rfde;

namespace {
SpectralModel default_heat() {
    return SpectralModel::heat(64, 0.5, 0.5, 0.25, 0.5, 1.0, DelayKernel::constant(1.0));
}
} // namespace

TEST_CASE("semigroup_factor basics") {
    CHECK(semigroup_factor(1.0, 0.0) == 1.0);
    CHECK(semigroup_factor(4.0, 0.5) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    // monotone decay toward 0 as lambda grows
    double prev = 1.0;
    for (double lam : {1.0, 10.0, 100.0, 1000.0}) {
        const double v = semigroup_factor(lam, 0.5);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-100);
    CHECK_THROWS_AS(semigroup_factor(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(semigroup_factor(1.0, -1.0), std::domain_error);
}

TEST_CASE("semigroup law holds to machine precision") {
    for (int i = 0; i < 1000; ++i) {
        const double lam = 0.1 + 20.0 * rng::uniform01(rng::key(7, 0, 0, i));
        const double t = 3.0 * rng::uniform01(rng::key(7, 1, 0, i));
        const double s = 3.0 * rng::uniform01(rng::key(7, 2, 0, i));
        const double lhs = semigroup_factor(lam, t + s);
        const double rhs = semigroup_factor(lam, t) * semigroup_factor(lam, s);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
}

TEST_CASE("frac_power_semigroup_norm") {
    const auto single = SpectralModel::custom({1.0}, 0.0, 0.5, 0.0, 0.5, 1.0, DelayKernel::zero());
    CHECK(frac_power_semigroup_norm(single, 0.3, 2.0) == doctest::Approx(std::exp(-2.0)));

    const auto heat = default_heat();
    // lambda^{1/2} e^{-lambda/4} over lambda = k^2: max at k=1 or 2
    CHECK(frac_power_semigroup_norm(heat, 0.5, 0.25) ==
          doctest::Approx(0.7788007830714049).epsilon(1e-12));
    CHECK_THROWS_AS(frac_power_semigroup_norm(heat, 0.5, 0.0), std::domain_error);

    // t^gamma-scaled norm stays below the continuous-spectrum maximum
    const double gamma = 0.5;
    for (double t = 0.01; t < 10.0; t *= 1.5) {
        const double v = frac_power_semigroup_norm(heat, gamma, t) * std::pow(t, gamma);
        CHECK(v <= std::pow(gamma / std::exp(1.0), gamma) + 1e-12);
    }
    CHECK(frac_power_semigroup_bound(0.5, 1.0) == doctest::Approx(0.4288819424803534));
}

TEST_CASE("semigroup_difference_constant single pair oracle") {
    const auto single = SpectralModel::custom({1.0}, 0.0, 0.5, 0.0, 0.5, 1.0, DelayKernel::zero());
    const auto fit = semigroup_difference_constant(single, 0.5, 0.2, {{1.0, 2.0}});
    // (e^-1 - e^-2) / (1 - 2^{-1/2})
    CHECK(fit.power_bound.constant == doctest::Approx(0.7939554178717264).epsilon(1e-12));
    CHECK_FALSE(fit.power_bound.diverged);
    CHECK_FALSE(fit.holder_bound.diverged);
    CHECK(fit.power_bound.argmax_s == 1.0);

    CHECK_THROWS(semigroup_difference_constant(single, 0.5, 0.2, {}));
    CHECK_THROWS(semigroup_difference_constant(single, 0.5, 0.2, {{1.0, 1.0}}));
}

TEST_CASE("semigroup_difference_constant stable under truncation doubling") {
    std::vector<std::pair<double, double>> st;
    for (int i = 1; i <= 15; ++i)
        for (int j = i + 1; j <= 16; ++j) st.push_back({0.05 * i, 0.05 * j});
    const auto heat = default_heat();
    const auto wide = heat.extended(128);
    for (double gamma : {0.3, 0.5, 0.75}) {
        const auto a = semigroup_difference_constant(heat, gamma, 0.2, st);
        const auto b = semigroup_difference_constant(wide, gamma, 0.2, st);
        CHECK(std::abs(b.power_bound.constant / a.power_bound.constant - 1.0) < 0.05);
        CHECK(std::abs(b.holder_bound.constant / a.holder_bound.constant - 1.0) < 0.05);
    }
}

TEST_CASE("scalar inequality properties") {
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const double u1 = rng::uniform01(rng::key(11, 0, 0, i));
        const double u2 = rng::uniform01(rng::key(11, 1, 0, i));
        const double u3 = rng::uniform01(rng::key(11, 2, 0, i));
        const double a = 50.0 * u1, b = a * u2, d = u3;
        if (std::pow(a, d) - std::pow(b, d) > std::pow(a - b, d) + 1e-12) ++bad;
        const double x = 30.0 * u1, al = u3;
        if (std::log1p(x) > std::pow(x, al) / al + 1e-12) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("semigroup difference against 1/alpha bound") {
    const auto heat = default_heat();
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const double al = rng::uniform01(rng::key(13, 0, 0, i));
        const double s = 0.02 + 3.0 * rng::uniform01(rng::key(13, 1, 0, i));
        const double t = s + 3.0 * rng::uniform01(rng::key(13, 2, 0, i));
        double lhs = 0.0;
        for (double lam : heat.eigenvalues)
            lhs = std::max(lhs, std::abs(std::exp(-lam * t) - std::exp(-lam * s)));
        if (lhs > (1.0 / al) * std::pow(t - s, al) * std::pow(s, -al) + 1e-12) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("DelayKernel forms") {
    const StepGrid grid(1.0, 8, 1);
    CHECK(DelayKernel::zero().sup_norm(1.0) == 0.0);
    CHECK(DelayKernel::constant(-2.0).sup_norm(1.0) == 2.0);
    const auto lin = DelayKernel::linear(1.0, 3.0); // 1 + 3 theta on [-1, 0]
    CHECK(lin.sup_norm(1.0) == 2.0);                // |1 - 3| at theta = -1
    CHECK(lin.eval(-0.5, grid) == doctest::Approx(-0.5));
    REQUIRE(lin.holder.has_value());
    // |a(x) - a(y)| <= C |x - y|^rho on a lattice
    for (int i = 0; i <= 8; ++i)
        for (int j = i + 1; j <= 8; ++j) {
            const double x = -1.0 + i / 8.0, y = -1.0 + j / 8.0;
            CHECK(std::abs(lin.eval(x, grid) - lin.eval(y, grid)) <=
                  lin.holder->constant * std::pow(std::abs(x - y), lin.holder->rho) + 1e-12);
        }

    auto samp = DelayKernel::sampled({1.0, 2.0, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0});
    CHECK(samp.sup_norm(1.0) == 3.0);
    CHECK(samp.eval(-1.0 + 2.0 / 8.0, grid) == 0.5);
    CHECK_THROWS(samp.eval(-0.55, grid)); // not a node
}

TEST_CASE("SpectralModel validation") {
    CHECK_THROWS(SpectralModel::custom({}, 0.0, 0.5, 0.0, 0.5, 1.0, DelayKernel::zero()));
    CHECK_THROWS(SpectralModel::custom({-1.0}, 0.0, 0.5, 0.0, 0.5, 1.0, DelayKernel::zero()));
    CHECK_THROWS(SpectralModel::custom({2.0, 1.0}, 0.0, 0.5, 0.0, 0.5, 1.0, DelayKernel::zero()));
    CHECK_THROWS(SpectralModel::heat(4, 0.5, 1.5, 0.25, 0.5, 1.0, DelayKernel::zero()));
    CHECK_THROWS(SpectralModel::heat(4, 0.5, 0.5, 0.25, 0.5, -1.0, DelayKernel::zero()));

    const auto heat = default_heat();
    CHECK(heat.eigenvalues[3] == 16.0);
    CHECK(heat.a1_entry(3) == doctest::Approx(0.5 * 4.0));
    CHECK(heat.a2_entry(0) == doctest::Approx(0.25));
    CHECK(heat.extended(128).mode_count() == 128);
    const auto custom = SpectralModel::custom({1.0, 2.0}, 0.0, 0.5, 0.0, 0.5, 1.0,
                                              DelayKernel::zero());
    CHECK_THROWS(custom.extended(4));
}
