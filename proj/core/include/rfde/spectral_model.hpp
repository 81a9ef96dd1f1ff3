#pragma once

#include "rfde/fit_report.hpp"
#include "rfde/grid.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace rfde {

// Memory kernel a(.) on [-r, 0].
struct DelayKernel {
    enum class Form { Zero, Constant, Linear, Sampled };

    struct Holder {
        double rho;      // Hoelder order in (0, 1]
        double constant; // Hoelder constant
    };

    Form form = Form::Zero;
    double a0 = 0.0;                 // Constant: a(theta) = a0; Linear: a0 + a1*theta
    double a1 = 0.0;
    std::vector<double> samples;     // Sampled: values on the theta grid, m+1 entries
    std::optional<Holder> holder;

    static DelayKernel zero() { return {}; }
    static DelayKernel constant(double a0);
    static DelayKernel linear(double a0, double a1);
    static DelayKernel sampled(std::vector<double> values);

    bool is_zero() const;

    // a(theta) for theta in [-r, 0]. Sampled kernels require theta to be a
    // node of the given grid.
    double eval(double theta, const StepGrid& grid) const;

    // |a|_inf on [-r, 0]; exact for the closed forms.
    double sup_norm(double r) const;

    // Kernel values on the theta grid theta_p = -r + p*h, p = 0..m.
    std::vector<double> values_on(const StepGrid& grid) const;
};

// Diagonalized operator setting: A has diagonal -lambda_k, A1 diagonal
// c1*lambda_k^mu, A2 diagonal c2*lambda_k^nu, delay r, memory kernel a.
struct SpectralModel {
    std::vector<double> eigenvalues; // lambda_1 <= lambda_2 <= ..., all > 0
    bool square_spectrum = false;    // true when lambda_k = k^2 (extensible)
    double c1 = 0.0;
    double mu = 0.5;
    double c2 = 0.0;
    double nu = 0.5;
    double delay = 1.0;
    DelayKernel kernel;

    // lambda_k = k^2 spectrum (Dirichlet Laplacian on (0, pi)), K modes.
    static SpectralModel heat(int modes, double c1, double mu, double c2, double nu,
                              double delay, DelayKernel kernel);
    static SpectralModel custom(std::vector<double> eigenvalues, double c1, double mu,
                                double c2, double nu, double delay, DelayKernel kernel);

    int mode_count() const { return static_cast<int>(eigenvalues.size()); }
    double a1_entry(int k) const; // c1 * lambda_k^mu
    double a2_entry(int k) const; // c2 * lambda_k^nu

    // Same model with the spectrum extended to `modes` modes. Only possible
    // for the square spectrum; throws otherwise.
    SpectralModel extended(int modes) const;

    void validate() const; // throws std::invalid_argument on violation
};

// e^{-lambda t}; domain error if lambda <= 0 or t < 0.
double semigroup_factor(double lambda, double t);

// sup_k lambda_k^gamma e^{-lambda_k t}; bounded by (gamma/e)^gamma t^{-gamma}.
double frac_power_semigroup_norm(const SpectralModel& model, double gamma, double t);

// Continuous-spectrum bound (gamma/e)^gamma t^{-gamma} for the above.
double frac_power_semigroup_bound(double gamma, double t);

struct SemigroupDifferenceFit {
    FitReport power_bound;     // M: lhs <= M (s^-gamma - t^-gamma)
    FitReport holder_bound; // C: lhs <= C (t-s)^beta s^{-beta-gamma}
};

// Smallest constants so that sup_k lambda_k^gamma |e^{-lambda_k t} - e^{-lambda_k s}|
// is bounded by the two right-hand sides on the given (s, t) lattice.
SemigroupDifferenceFit semigroup_difference_constant(
    const SpectralModel& model, double gamma, double beta,
    const std::vector<std::pair<double, double>>& st_pairs);

} // namespace rfde
