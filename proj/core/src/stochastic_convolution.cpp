#include "rfde/stochastic_convolution.hpp"

#include "rfde/parallel.hpp"
#include "rfde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rfde {

NoiseModel NoiseModel::power(int modes, double exponent, double scale, double b) {
    if (modes < 1) throw std::invalid_argument("NoiseModel: need at least one mode");
    if (!(exponent > 1.0)) throw std::invalid_argument("NoiseModel: exponent must exceed 1 (trace class)");
    if (!(scale > 0.0)) throw std::invalid_argument("NoiseModel: scale must be positive");
    NoiseModel n;
    n.q_eigenvalues.resize(static_cast<std::size_t>(modes));
    n.b_diagonal.assign(static_cast<std::size_t>(modes), b);
    for (int j = 0; j < modes; ++j)
        n.q_eigenvalues[j] = scale * std::pow(double(j + 1), -exponent);
    n.q_tail = scale * std::pow(double(modes), 1.0 - exponent) / (exponent - 1.0);
    return n;
}

NoiseModel NoiseModel::custom(std::vector<double> q, std::vector<double> b) {
    if (q.empty() || q.size() != b.size())
        throw std::invalid_argument("NoiseModel: q and b must be nonempty and aligned");
    for (double v : q)
        if (!(v > 0.0)) throw std::invalid_argument("NoiseModel: q-eigenvalues must be positive");
    NoiseModel n;
    n.q_eigenvalues = std::move(q);
    n.b_diagonal = std::move(b);
    return n;
}

double NoiseModel::trace() const {
    return std::accumulate(q_eigenvalues.begin(), q_eigenvalues.end(), 0.0);
}

double NoiseModel::hs_norm_sq() const {
    double s = 0.0;
    for (std::size_t j = 0; j < q_eigenvalues.size(); ++j)
        s += q_eigenvalues[j] * b_diagonal[j] * b_diagonal[j];
    return s;
}

void NoiseModel::validate(int solution_modes) const {
    if (mode_count() > solution_modes)
        throw std::invalid_argument("NoiseModel: more noise modes than solution modes");
    for (double v : q_eigenvalues)
        if (!(v > 0.0)) throw std::invalid_argument("NoiseModel: q-eigenvalues must be positive");
}

double PathEnsemble::h_norm(int path, int node) const {
    double acc = 0.0;
    for (int j = 0; j < modes; ++j) {
        const double v = w(path, j, node);
        acc += v * v;
    }
    return std::sqrt(acc);
}

double PathEnsemble::gamma_norm(int path, int node, double gamma) const {
    double acc = 0.0;
    for (int j = 0; j < modes; ++j) {
        const double v = std::pow(eigenvalues[j], gamma) * w(path, j, node);
        acc += v * v;
    }
    return std::sqrt(acc);
}

PathEnsemble simulate_paths(const FundamentalSolution& fs, const NoiseModel& noise,
                            std::uint64_t seed, int paths, int workers) {
    noise.validate(static_cast<int>(fs.modes.size()));
    if (paths < 1) throw std::invalid_argument("simulate_paths: need paths >= 1");
    const int J = noise.mode_count();
    const int nodes = fs.grid.node_count();
    const int steps = nodes - 1;
    const double h = fs.grid.h;

    PathEnsemble ens;
    ens.seed = seed;
    ens.grid = fs.grid;
    ens.paths = paths;
    ens.modes = J;
    ens.eigenvalues.resize(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) ens.eigenvalues[j] = fs.modes[j].lambda;
    ens.values.assign(static_cast<std::size_t>(paths) * J * nodes, 0.0);

    parallel_for(paths, workers, [&](int p) {
        std::vector<double> dw(static_cast<std::size_t>(steps));
        for (int j = 0; j < J; ++j) {
            const double sd = noise.b_diagonal[j] * std::sqrt(noise.q_eigenvalues[j] * h);
            for (int l = 0; l < steps; ++l)
                dw[l] = sd * rng::normal(seed, static_cast<std::uint64_t>(p),
                                         static_cast<std::uint64_t>(j),
                                         static_cast<std::uint64_t>(l));
            const auto& g = fs.modes[j].values;
            double* out = &ens.values[(static_cast<std::size_t>(p) * J + j) * nodes];
            out[0] = 0.0;
            for (int i = 1; i < nodes; ++i) {
                double acc = 0.0;
                for (int l = 0; l < i; ++l) acc += g[i - l] * dw[l];
                out[i] = acc;
            }
        }
    });
    return ens;
}

double second_moment(const FundamentalSolution& fs, const NoiseModel& noise, double gamma,
                     int s_node, int t_node) {
    noise.validate(static_cast<int>(fs.modes.size()));
    if (s_node < 0 || t_node >= fs.grid.node_count() || s_node > t_node)
        throw std::invalid_argument("second_moment: need 0 <= s <= t on the grid");
    if (s_node == t_node) return 0.0;
    const double h = fs.grid.h;
    double total = 0.0;
    for (int j = 0; j < noise.mode_count(); ++j) {
        const auto& g = fs.modes[j].values;
        const double weight = noise.q_eigenvalues[j] * noise.b_diagonal[j] * noise.b_diagonal[j] *
                              std::pow(fs.modes[j].lambda, 2.0 * gamma);
        // I1 = int_s^t g(t-u)^2 du = int_0^{t-s} g(v)^2 dv
        double i1 = 0.0;
        for (int v = 0; v <= t_node - s_node; ++v) {
            const double w = (v == 0 || v == t_node - s_node) ? 0.5 * h : h;
            i1 += w * g[v] * g[v];
        }
        // I2 = int_0^s (g(t-u) - g(s-u))^2 du; empty for s = 0
        double i2 = 0.0;
        for (int u = 0; s_node > 0 && u <= s_node; ++u) {
            const double w = (u == 0 || u == s_node) ? 0.5 * h : h;
            const double d = g[t_node - u] - g[s_node - u];
            i2 += w * d * d;
        }
        total += weight * (i1 + i2);
    }
    return total;
}

std::vector<McMomentStat> mc_increment_moments(const FundamentalSolution& fs,
                                               const NoiseModel& noise, double gamma,
                                               const NodeLattice& pairs, std::uint64_t seed,
                                               int paths, int workers) {
    noise.validate(static_cast<int>(fs.modes.size()));
    if (paths < 2) throw std::invalid_argument("mc_increment_moments: need paths >= 2");
    const int J = noise.mode_count();
    const int steps = fs.grid.node_count() - 1;
    const double h = fs.grid.h;

    // distinct nodes actually needed
    std::vector<int> need;
    for (auto [a, b] : pairs) {
        need.push_back(a);
        need.push_back(b);
    }
    std::sort(need.begin(), need.end());
    need.erase(std::unique(need.begin(), need.end()), need.end());
    std::vector<int> slot(static_cast<std::size_t>(steps) + 1, -1);
    for (std::size_t i = 0; i < need.size(); ++i) slot[need[i]] = static_cast<int>(i);

    // per-path squared increment norms, then moments per pair
    std::vector<std::vector<double>> sq(pairs.size(),
                                        std::vector<double>(static_cast<std::size_t>(paths)));
    parallel_for(paths, workers, [&](int p) {
        std::vector<double> dw(static_cast<std::size_t>(steps));
        std::vector<double> wval(need.size() * J);
        for (int j = 0; j < J; ++j) {
            const double sd = noise.b_diagonal[j] * std::sqrt(noise.q_eigenvalues[j] * h);
            for (int l = 0; l < steps; ++l)
                dw[l] = sd * rng::normal(seed, static_cast<std::uint64_t>(p),
                                         static_cast<std::uint64_t>(j),
                                         static_cast<std::uint64_t>(l));
            const auto& g = fs.modes[j].values;
            for (std::size_t q = 0; q < need.size(); ++q) {
                const int i = need[q];
                double acc = 0.0;
                for (int l = 0; l < i; ++l) acc += g[i - l] * dw[l];
                wval[q * J + j] = acc;
            }
        }
        for (std::size_t c = 0; c < pairs.size(); ++c) {
            const int qa = slot[pairs[c].first];
            const int qb = slot[pairs[c].second];
            double acc = 0.0;
            for (int j = 0; j < J; ++j) {
                const double d = std::pow(fs.modes[j].lambda, gamma) *
                                 (wval[static_cast<std::size_t>(qb) * J + j] -
                                  wval[static_cast<std::size_t>(qa) * J + j]);
                acc += d * d;
            }
            sq[c][p] = acc;
        }
    });

    std::vector<McMomentStat> out(pairs.size());
    for (std::size_t c = 0; c < pairs.size(); ++c) {
        double mean = std::accumulate(sq[c].begin(), sq[c].end(), 0.0) / paths;
        double var = 0.0;
        for (double v : sq[c]) var += (v - mean) * (v - mean);
        var /= (paths - 1);
        out[c] = {mean, std::sqrt(var / paths), paths};
    }
    return out;
}

std::vector<double> euler_terminal_samples(const FundamentalSolution& fs, const NoiseModel& noise,
                                           int mode, int node, std::uint64_t seed, int paths) {
    noise.validate(static_cast<int>(fs.modes.size()));
    if (mode < 0 || mode >= noise.mode_count())
        throw std::invalid_argument("euler_terminal_samples: mode out of range");
    const double h = fs.grid.h;
    const double sd = noise.b_diagonal[mode] * std::sqrt(noise.q_eigenvalues[mode] * h);
    const auto& g = fs.modes[mode].values;
    std::vector<double> out(static_cast<std::size_t>(paths));
    for (int p = 0; p < paths; ++p) {
        double acc = 0.0;
        for (int l = 0; l < node; ++l)
            acc += g[node - l] * sd *
                   rng::normal(seed, static_cast<std::uint64_t>(p),
                               static_cast<std::uint64_t>(mode), static_cast<std::uint64_t>(l));
        out[p] = acc;
    }
    return out;
}

namespace {

// Jacobi eigenvalue iteration for a symmetric matrix stored row-major.
void jacobi_eigen(std::vector<double>& a, int n, std::vector<double>& eigvals,
                  std::vector<double>& eigvecs) {
    eigvecs.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) eigvecs[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto at = [&](std::vector<double>& mat, int i, int j) -> double& {
        return mat[static_cast<std::size_t>(i) * n + j];
    };
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(a, i, j) * at(a, i, j);
        if (off < 1e-28) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(a, p, q);
                if (apq == 0.0) continue;
                const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = at(a, i, p), aiq = at(a, i, q);
                    at(a, i, p) = c * aip - s * aiq;
                    at(a, i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = at(a, p, i), aqi = at(a, q, i);
                    at(a, p, i) = c * api - s * aqi;
                    at(a, q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = at(eigvecs, i, p), viq = at(eigvecs, i, q);
                    at(eigvecs, i, p) = c * vip - s * viq;
                    at(eigvecs, i, q) = s * vip + c * viq;
                }
            }
    }
    eigvals.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eigvals[i] = at(a, i, i);
}

} // namespace

std::vector<std::vector<double>> exact_gaussian_sample(const FundamentalSolution& fs,
                                                       const NoiseModel& noise,
                                                       const std::vector<int>& nodes,
                                                       std::uint64_t seed,
                                                       std::uint64_t path_index) {
    noise.validate(static_cast<int>(fs.modes.size()));
    const int n = static_cast<int>(nodes.size());
    if (n < 1 || n > 128)
        throw std::invalid_argument("exact_gaussian_sample: need 1..128 nodes");
    const double h = fs.grid.h;
    // decorrelated from the Euler streams under the same master seed
    const std::uint64_t tag = seed ^ 0xe7037ed1a0b428dbull;

    std::vector<std::vector<double>> out(static_cast<std::size_t>(noise.mode_count()));
    for (int j = 0; j < noise.mode_count(); ++j) {
        const auto& g = fs.modes[j].values;
        const double weight = noise.q_eigenvalues[j] * noise.b_diagonal[j] * noise.b_diagonal[j];
        std::vector<double> cov(static_cast<std::size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                const int lo = std::min(nodes[a], nodes[b]);
                double acc = 0.0;
                for (int u = 0; u <= lo; ++u) {
                    const double w = (u == 0 || u == lo) ? 0.5 * h : h;
                    acc += w * g[nodes[a] - u] * g[nodes[b] - u];
                }
                cov[static_cast<std::size_t>(a) * n + b] = weight * acc;
                cov[static_cast<std::size_t>(b) * n + a] = weight * acc;
            }
        double scale = 0.0;
        for (int i = 0; i < n; ++i)
            scale = std::max(scale, cov[static_cast<std::size_t>(i) * n + i]);

        std::vector<double> eigvals, eigvecs;
        jacobi_eigen(cov, n, eigvals, eigvecs);
        for (double ev : eigvals)
            if (ev < -1e-8 * std::max(scale, 1e-300))
                throw SolverError("exact_gaussian_sample: covariance indefinite");

        std::vector<double> z(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            z[i] = rng::normal(tag, path_index, static_cast<std::uint64_t>(j),
                               static_cast<std::uint64_t>(i));
        out[j].assign(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            const double sd = std::sqrt(std::max(eigvals[i], 0.0));
            for (int a = 0; a < n; ++a)
                out[j][a] += eigvecs[static_cast<std::size_t>(a) * n + i] * sd * z[i];
        }
    }
    return out;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

double ks_critical(double alpha, int n, int m) {
    // c(alpha) = sqrt(-ln(alpha/2)/2) from the asymptotic Kolmogorov law
    const double coeff = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return coeff * std::sqrt(double(n + m) / (double(n) * double(m)));
}

} // namespace rfde
