#pragma once

#include <stdexcept>

namespace rfde {

// Uniform grid on [0, N*r] whose step h = r/m divides the delay r exactly,
// so every delay shift is a whole number of indices and no history
// interpolation is ever needed.
struct StepGrid {
    double r = 1.0;      // delay
    int m = 512;         // steps per delay interval
    int intervals = 3;   // number of delay intervals covered
    double h = 0.0;      // r / m

    StepGrid() : h(r / m) {}
    StepGrid(double delay, int steps_per_interval, int n_intervals)
        : r(delay), m(steps_per_interval), intervals(n_intervals), h(delay / steps_per_interval) {
        if (r <= 0.0) throw std::invalid_argument("StepGrid: delay must be positive");
        if (m < 2) throw std::invalid_argument("StepGrid: need at least 2 steps per interval");
        if (intervals < 1) throw std::invalid_argument("StepGrid: need at least one interval");
    }

    int node_count() const { return intervals * m + 1; }
    double node(int i) const { return i * h; }

    // Index of the delay interval [n*r, (n+1)*r) containing node i.
    int interval_of(int i) const { return i / m; }
};

} // namespace rfde
