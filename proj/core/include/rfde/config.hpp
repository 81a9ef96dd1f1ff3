#pragma once

#include "rfde/grid.hpp"
#include "rfde/spectral_model.hpp"
#include "rfde/stochastic_convolution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rfde {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat dotted-key run configuration. File grammar: one `key = value` per
// line, `#` starts a comment, blank lines ignored; list values are
// whitespace-separated numbers. Unknown keys are rejected.
struct RunConfig {
    // model
    std::string eigenvalues_kind = "square"; // square | custom-list
    std::vector<double> eigenvalues_list;    // custom-list only
    int modes = 64;
    double a1_c = 0.5;
    double a1_mu = 0.5;
    double a2_c = 0.25;
    double a2_nu = 0.5;
    double delay_r = 1.0;
    std::string kernel_form = "constant"; // zero | constant | linear | sampled
    std::vector<double> kernel_params;    // constant: {a0}; linear: {a0, a1}; sampled: m+1 values

    // grid
    int grid_m = 512;
    int grid_intervals = 3;

    // noise
    std::string noise_kind = "power"; // power | custom
    double noise_exponent = 2.0;
    double noise_scale = 0.6079271018540267; // 6/pi^2, so Tr(Q) -> 1
    double noise_b = 1.0;
    int noise_modes = 64;
    std::vector<double> noise_q_list; // custom only
    std::vector<double> noise_b_list;

    // run
    std::uint64_t seed = 2026;
    int paths = 2000;
    std::vector<double> gammas = {0.5, 0.75};
    std::vector<double> betas = {0.2, 0.4};
    std::vector<double> kappas = {0.25, 0.4};
    std::vector<int> intervals = {0, 1, 2};

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);
    std::string serialize() const; // parse(serialize(c)) == c

    // Range-checked builders; throw ConfigError on violation.
    SpectralModel model() const;
    StepGrid grid() const;
    NoiseModel noise() const;
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

} // namespace rfde
