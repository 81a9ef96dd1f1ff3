#include "rfde/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfde {

DelayKernel DelayKernel::constant(double a0) {
    DelayKernel k;
    k.form = Form::Constant;
    k.a0 = a0;
    k.holder = Holder{1.0, 0.0};
    return k;
}

DelayKernel DelayKernel::linear(double a0, double a1) {
    DelayKernel k;
    k.form = Form::Linear;
    k.a0 = a0;
    k.a1 = a1;
    k.holder = Holder{1.0, std::abs(a1)};
    return k;
}

DelayKernel DelayKernel::sampled(std::vector<double> values) {
    if (values.size() < 2) throw std::invalid_argument("DelayKernel: need >= 2 samples");
    DelayKernel k;
    k.form = Form::Sampled;
    k.samples = std::move(values);
    return k;
}

bool DelayKernel::is_zero() const {
    switch (form) {
        case Form::Zero: return true;
        case Form::Constant: return a0 == 0.0;
        case Form::Linear: return a0 == 0.0 && a1 == 0.0;
        case Form::Sampled:
            return std::all_of(samples.begin(), samples.end(), [](double v) { return v == 0.0; });
    }
    return false;
}

double DelayKernel::eval(double theta, const StepGrid& grid) const {
    if (theta < -grid.r - 1e-12 * grid.r || theta > 1e-12 * grid.r)
        throw std::invalid_argument("DelayKernel::eval: theta outside [-r, 0]");
    switch (form) {
        case Form::Zero: return 0.0;
        case Form::Constant: return a0;
        case Form::Linear: return a0 + a1 * theta;
        case Form::Sampled: {
            if (static_cast<int>(samples.size()) != grid.m + 1)
                throw std::invalid_argument("DelayKernel::eval: sample count does not match grid");
            const double p = (theta + grid.r) / grid.h;
            const int ip = static_cast<int>(std::lround(p));
            if (std::abs(p - ip) > 1e-9)
                throw std::invalid_argument("DelayKernel::eval: theta is not a grid node");
            return samples[static_cast<std::size_t>(std::clamp(ip, 0, grid.m))];
        }
    }
    return 0.0;
}

double DelayKernel::sup_norm(double r) const {
    switch (form) {
        case Form::Zero: return 0.0;
        case Form::Constant: return std::abs(a0);
        case Form::Linear: return std::max(std::abs(a0), std::abs(a0 - a1 * r));
        case Form::Sampled: {
            double s = 0.0;
            for (double v : samples) s = std::max(s, std::abs(v));
            return s;
        }
    }
    return 0.0;
}

std::vector<double> DelayKernel::values_on(const StepGrid& grid) const {
    std::vector<double> v(static_cast<std::size_t>(grid.m) + 1);
    for (int p = 0; p <= grid.m; ++p) v[p] = eval(-grid.r + p * grid.h, grid);
    return v;
}

SpectralModel SpectralModel::heat(int modes, double c1, double mu, double c2, double nu,
                                  double delay, DelayKernel kernel) {
    SpectralModel m;
    m.eigenvalues.resize(static_cast<std::size_t>(modes));
    for (int k = 0; k < modes; ++k) m.eigenvalues[k] = double(k + 1) * double(k + 1);
    m.square_spectrum = true;
    m.c1 = c1;
    m.mu = mu;
    m.c2 = c2;
    m.nu = nu;
    m.delay = delay;
    m.kernel = std::move(kernel);
    m.validate();
    return m;
}

SpectralModel SpectralModel::custom(std::vector<double> eigenvalues, double c1, double mu,
                                    double c2, double nu, double delay, DelayKernel kernel) {
    SpectralModel m;
    m.eigenvalues = std::move(eigenvalues);
    m.c1 = c1;
    m.mu = mu;
    m.c2 = c2;
    m.nu = nu;
    m.delay = delay;
    m.kernel = std::move(kernel);
    m.validate();
    return m;
}

double SpectralModel::a1_entry(int k) const { return c1 * std::pow(eigenvalues.at(k), mu); }
double SpectralModel::a2_entry(int k) const { return c2 * std::pow(eigenvalues.at(k), nu); }

SpectralModel SpectralModel::extended(int modes) const {
    if (!square_spectrum)
        throw std::invalid_argument("SpectralModel::extended: spectrum is not extensible");
    if (modes < mode_count())
        throw std::invalid_argument("SpectralModel::extended: cannot shrink");
    return heat(modes, c1, mu, c2, nu, delay, kernel);
}

void SpectralModel::validate() const {
    if (eigenvalues.empty()) throw std::invalid_argument("SpectralModel: no eigenvalues");
    double prev = 0.0;
    for (double lam : eigenvalues) {
        if (!(lam > 0.0)) throw std::invalid_argument("SpectralModel: eigenvalues must be positive");
        if (lam < prev) throw std::invalid_argument("SpectralModel: eigenvalues must be nondecreasing");
        prev = lam;
    }
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("SpectralModel: mu must lie in (0,1)");
    if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("SpectralModel: nu must lie in (0,1)");
    if (!(delay > 0.0)) throw std::invalid_argument("SpectralModel: delay must be positive");
}

double semigroup_factor(double lambda, double t) {
    if (!(lambda > 0.0)) throw std::domain_error("semigroup_factor: lambda must be positive");
    if (t < 0.0) throw std::domain_error("semigroup_factor: t must be nonnegative");
    return std::exp(-lambda * t);
}

double frac_power_semigroup_norm(const SpectralModel& model, double gamma, double t) {
    if (!(t > 0.0)) throw std::domain_error("frac_power_semigroup_norm: t must be positive");
    double best = 0.0;
    for (double lam : model.eigenvalues)
        best = std::max(best, std::pow(lam, gamma) * std::exp(-lam * t));
    return best;
}

double frac_power_semigroup_bound(double gamma, double t) {
    if (!(t > 0.0)) throw std::domain_error("frac_power_semigroup_bound: t must be positive");
    if (gamma == 0.0) return 1.0;
    return std::pow(gamma / 2.718281828459045235, gamma) * std::pow(t, -gamma);
}

SemigroupDifferenceFit semigroup_difference_constant(
    const SpectralModel& model, double gamma, double beta,
    const std::vector<std::pair<double, double>>& st_pairs) {
    if (st_pairs.empty())
        throw std::invalid_argument("semigroup_difference_constant: empty lattice");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("semigroup_difference_constant: gamma must lie in (0,1)");
    if (!(beta > 0.0))
        throw std::invalid_argument("semigroup_difference_constant: beta must be positive");

    SemigroupDifferenceFit fit;
    fit.power_bound.estimate = "semigroup_difference_power_bound";
    fit.holder_bound.estimate = "semigroup_difference_holder_bound";
    fit.power_bound.gamma = fit.holder_bound.gamma = gamma;
    fit.holder_bound.beta = beta;

    for (auto [s, t] : st_pairs) {
        if (!(0.0 < s && s < t))
            throw std::invalid_argument("semigroup_difference_constant: need 0 < s < t");
        double lhs = 0.0;
        for (double lam : model.eigenvalues)
            lhs = std::max(lhs, std::pow(lam, gamma) *
                                    std::abs(std::exp(-lam * t) - std::exp(-lam * s)));
        const double denom_m = std::pow(s, -gamma) - std::pow(t, -gamma);
        const double denom_c = std::pow(t - s, beta) * std::pow(s, -beta - gamma);
        const double cand_m = lhs / denom_m;
        const double cand_c = lhs / denom_c;
        if (cand_m > fit.power_bound.constant) {
            fit.power_bound.constant = cand_m;
            fit.power_bound.argmax_s = s;
            fit.power_bound.argmax_t = t;
        }
        if (cand_c > fit.holder_bound.constant) {
            fit.holder_bound.constant = cand_c;
            fit.holder_bound.argmax_s = s;
            fit.holder_bound.argmax_t = t;
        }
    }
    fit.power_bound.diverged = !std::isfinite(fit.power_bound.constant);
    fit.holder_bound.diverged = !std::isfinite(fit.holder_bound.constant);
    return fit;
}

} // namespace rfde
