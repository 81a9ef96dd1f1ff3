#include "rfde/regularity_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfde {

MomentCurve moment_curve(const FundamentalSolution& fs, const NoiseModel& noise, double gamma,
                         const NodeLattice& pairs) {
    MomentCurve c;
    c.gamma = gamma;
    c.h = fs.grid.h;
    c.pairs = pairs;
    c.quadrature.reserve(pairs.size());
    for (auto [s, t] : pairs) c.quadrature.push_back(second_moment(fs, noise, gamma, s, t));
    return c;
}

FitReport fit_moment_exponent(const MomentCurve& curve, double delta_min, double delta_max) {
    if (!(delta_min > 0.0 && delta_max > delta_min))
        throw std::invalid_argument("fit_moment_exponent: degenerate window");

    FitReport rep;
    rep.estimate = "moment_exponent";
    rep.gamma = curve.gamma;

    std::vector<double> x, y;
    for (std::size_t i = 0; i < curve.pairs.size(); ++i) {
        const double delta = (curve.pairs[i].second - curve.pairs[i].first) * curve.h;
        if (delta < delta_min || delta > delta_max) continue;
        if (!(curve.quadrature[i] > 0.0)) {
            rep.degenerate = true;
            rep.diverged = true;
            rep.note = "nonpositive moment value";
            return rep;
        }
        x.push_back(std::log(delta));
        y.push_back(std::log(curve.quadrature[i]));
    }
    if (x.size() < 8) throw std::invalid_argument("fit_moment_exponent: fewer than 8 points in window");

    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - intercept - slope * x[i];
        rss += e * e;
    }
    const double se = std::sqrt(rss / double(n - 2) / sxx);
    rep.constant = slope; // fitted exponent = slope of the log-log fit ~ 2*beta
    rep.ci_low = slope - 1.96 * se;
    rep.ci_high = slope + 1.96 * se;
    return rep;
}

FitReport estimate_path_holder(const PathEnsemble& ensemble, PathNorm norm, double gamma,
                               const std::vector<int>& levels) {
    if (ensemble.paths < 1) throw std::invalid_argument("estimate_path_holder: empty ensemble");
    if (levels.size() < 4) throw std::invalid_argument("estimate_path_holder: need >= 4 levels");
    const int steps = ensemble.grid.node_count() - 1;
    for (int l : levels) {
        const int count = 1 << l;
        if (count < 2 || steps % count != 0)
            throw std::invalid_argument("estimate_path_holder: grid does not support level " +
                                        std::to_string(l));
    }

    FitReport rep;
    rep.estimate = norm == PathNorm::H ? "path_holder_h" : "path_holder_gamma";
    rep.gamma = norm == PathNorm::H ? 0.0 : gamma;
    const double g = rep.gamma;

    std::vector<double> betas;
    betas.reserve(static_cast<std::size_t>(ensemble.paths));
    const double n_levels = double(levels.size());
    for (int p = 0; p < ensemble.paths; ++p) {
        double mx = 0.0, my = 0.0;
        std::vector<double> xs, ys;
        for (int l : levels) {
            const int stride = steps / (1 << l);
            double worst = 0.0;
            for (int i = 0; i + stride <= steps; i += stride) {
                double acc = 0.0;
                for (int j = 0; j < ensemble.modes; ++j) {
                    const double d = std::pow(ensemble.eigenvalues[j], g) *
                                     (ensemble.w(p, j, i + stride) - ensemble.w(p, j, i));
                    acc += d * d;
                }
                worst = std::max(worst, acc);
            }
            if (worst == 0.0) {
                rep.degenerate = true;
                rep.note = "zero increments";
                return rep;
            }
            xs.push_back(double(l));
            ys.push_back(0.5 * std::log2(worst));
            mx += xs.back();
            my += ys.back();
        }
        mx /= n_levels;
        my /= n_levels;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        betas.push_back(-sxy / sxx);
    }
    std::sort(betas.begin(), betas.end());
    auto quantile = [&](double q) {
        const double pos = q * (betas.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, betas.size() - 1);
        return betas[lo] + (pos - lo) * (betas[hi] - betas[lo]);
    };
    rep.constant = quantile(0.5);
    rep.ci_low = quantile(0.25);
    rep.ci_high = quantile(0.75);
    return rep;
}

bool DashboardResult::all_pass() const {
    for (const auto& c : cells)
        if (c.in_range && !c.pass) return false;
    return true;
}

} // namespace rfde
