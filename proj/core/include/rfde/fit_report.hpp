#pragma once

#include <string>

namespace rfde {

// Result of fitting the best constant (or exponent) of a named estimate on a
// finite lattice, with refinement-stability diagnostics.
struct FitReport {
    std::string estimate;      // which inequality / quantity was fitted
    int n = 0;                 // delay-interval index, where applicable
    double gamma = 0.0;
    double beta = 0.0;
    double kappa = 0.0;
    double constant = 0.0;     // fitted constant, or fitted exponent for slope fits
    double ci_low = 0.0;       // 95% interval (exponent fits) / IQR (path fits)
    double ci_high = 0.0;
    double argmax_s = 0.0;     // lattice point where the constant is attained
    double argmax_t = 0.0;
    double refine_ratio = 1.0; // constant at m->2m over constant at m
    double trunc_ratio = 1.0;  // constant at K->2K over constant at K
    bool diverged = false;
    bool degenerate = false;
    std::string note;          // e.g. "outside-estimate-range"
};

} // namespace rfde
