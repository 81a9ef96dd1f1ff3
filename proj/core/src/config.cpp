#include "rfde/config.hpp"

#include "rfde/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rfde {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_num(const std::string& v, const std::string& key) {
    double out{};
    const char* begin = v.data();
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || p != end)
        throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
    return out;
}

long long parse_int(const std::string& v, const std::string& key) {
    long long out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
    return out;
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::istringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(parse_num(tok, key));
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += format_double(v[i]);
    }
    return s;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(v[i]);
    }
    return s;
}

} // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

RunConfig RunConfig::parse_text(const std::string& text) {
    RunConfig c;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) throw ConfigError("config: empty value for " + key);

        if (key == "eigenvalues.kind") c.eigenvalues_kind = val;
        else if (key == "eigenvalues.list") c.eigenvalues_list = parse_list(val, key);
        else if (key == "modes") c.modes = static_cast<int>(parse_int(val, key));
        else if (key == "a1.c") c.a1_c = parse_num(val, key);
        else if (key == "a1.mu") c.a1_mu = parse_num(val, key);
        else if (key == "a2.c") c.a2_c = parse_num(val, key);
        else if (key == "a2.nu") c.a2_nu = parse_num(val, key);
        else if (key == "delay.r") c.delay_r = parse_num(val, key);
        else if (key == "kernel.form") c.kernel_form = val;
        else if (key == "kernel.params") c.kernel_params = parse_list(val, key);
        else if (key == "grid.m") c.grid_m = static_cast<int>(parse_int(val, key));
        else if (key == "grid.N") c.grid_intervals = static_cast<int>(parse_int(val, key));
        else if (key == "noise.kind") c.noise_kind = val;
        else if (key == "noise.exponent") c.noise_exponent = parse_num(val, key);
        else if (key == "noise.scale") c.noise_scale = parse_num(val, key);
        else if (key == "noise.b") c.noise_b = parse_num(val, key);
        else if (key == "noise.modes") c.noise_modes = static_cast<int>(parse_int(val, key));
        else if (key == "noise.q_list") c.noise_q_list = parse_list(val, key);
        else if (key == "noise.b_list") c.noise_b_list = parse_list(val, key);
        else if (key == "run.seed") c.seed = static_cast<std::uint64_t>(parse_int(val, key));
        else if (key == "run.paths") c.paths = static_cast<int>(parse_int(val, key));
        else if (key == "run.gammas") c.gammas = parse_list(val, key);
        else if (key == "run.betas") c.betas = parse_list(val, key);
        else if (key == "run.kappas") c.kappas = parse_list(val, key);
        else if (key == "run.intervals") {
            c.intervals.clear();
            for (double v : parse_list(val, key)) c.intervals.push_back(static_cast<int>(v));
        } else
            throw ConfigError("config: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

std::string RunConfig::serialize() const {
    std::string s;
    s += "eigenvalues.kind = " + eigenvalues_kind + "\n";
    if (!eigenvalues_list.empty()) s += "eigenvalues.list = " + join(eigenvalues_list) + "\n";
    s += "modes = " + std::to_string(modes) + "\n";
    s += "a1.c = " + format_double(a1_c) + "\n";
    s += "a1.mu = " + format_double(a1_mu) + "\n";
    s += "a2.c = " + format_double(a2_c) + "\n";
    s += "a2.nu = " + format_double(a2_nu) + "\n";
    s += "delay.r = " + format_double(delay_r) + "\n";
    s += "kernel.form = " + kernel_form + "\n";
    if (!kernel_params.empty()) s += "kernel.params = " + join(kernel_params) + "\n";
    s += "grid.m = " + std::to_string(grid_m) + "\n";
    s += "grid.N = " + std::to_string(grid_intervals) + "\n";
    s += "noise.kind = " + noise_kind + "\n";
    s += "noise.exponent = " + format_double(noise_exponent) + "\n";
    s += "noise.scale = " + format_double(noise_scale) + "\n";
    s += "noise.b = " + format_double(noise_b) + "\n";
    s += "noise.modes = " + std::to_string(noise_modes) + "\n";
    if (!noise_q_list.empty()) s += "noise.q_list = " + join(noise_q_list) + "\n";
    if (!noise_b_list.empty()) s += "noise.b_list = " + join(noise_b_list) + "\n";
    s += "run.seed = " + std::to_string(seed) + "\n";
    s += "run.paths = " + std::to_string(paths) + "\n";
    s += "run.gammas = " + join(gammas) + "\n";
    s += "run.betas = " + join(betas) + "\n";
    s += "run.kappas = " + join(kappas) + "\n";
    s += "run.intervals = " + join(intervals) + "\n";
    return s;
}

SpectralModel RunConfig::model() const {
    validate();
    DelayKernel kernel;
    if (kernel_form == "zero") kernel = DelayKernel::zero();
    else if (kernel_form == "constant")
        kernel = DelayKernel::constant(kernel_params.empty() ? 1.0 : kernel_params[0]);
    else if (kernel_form == "linear") {
        if (kernel_params.size() != 2)
            throw ConfigError("config: kernel.form=linear needs kernel.params with 2 entries");
        kernel = DelayKernel::linear(kernel_params[0], kernel_params[1]);
    } else if (kernel_form == "sampled") {
        if (static_cast<int>(kernel_params.size()) != grid_m + 1)
            throw ConfigError("config: kernel.form=sampled needs grid.m + 1 samples");
        kernel = DelayKernel::sampled(kernel_params);
    } else
        throw ConfigError("config: unknown kernel.form '" + kernel_form + "'");

    try {
        if (eigenvalues_kind == "square")
            return SpectralModel::heat(modes, a1_c, a1_mu, a2_c, a2_nu, delay_r, kernel);
        if (eigenvalues_kind == "custom-list") {
            if (eigenvalues_list.empty())
                throw ConfigError("config: eigenvalues.kind=custom-list needs eigenvalues.list");
            return SpectralModel::custom(eigenvalues_list, a1_c, a1_mu, a2_c, a2_nu, delay_r,
                                         kernel);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    throw ConfigError("config: unknown eigenvalues.kind '" + eigenvalues_kind + "'");
}

StepGrid RunConfig::grid() const {
    try {
        return StepGrid(delay_r, grid_m, grid_intervals);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

NoiseModel RunConfig::noise() const {
    try {
        if (noise_kind == "power")
            return NoiseModel::power(noise_modes, noise_exponent, noise_scale, noise_b);
        if (noise_kind == "custom") {
            if (noise_q_list.empty())
                throw ConfigError("config: noise.kind=custom needs noise.q_list and noise.b_list");
            return NoiseModel::custom(noise_q_list, noise_b_list);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    throw ConfigError("config: unknown noise.kind '" + noise_kind + "'");
}

void RunConfig::validate() const {
    if (modes < 1) throw ConfigError("config: modes must be >= 1");
    if (!(delay_r > 0.0)) throw ConfigError("config: delay.r must be positive");
    if (!(a1_mu > 0.0 && a1_mu < 1.0)) throw ConfigError("config: a1.mu must lie in (0,1)");
    if (!(a2_nu > 0.0 && a2_nu < 1.0)) throw ConfigError("config: a2.nu must lie in (0,1)");
    if (grid_m < 2) throw ConfigError("config: grid.m must be >= 2");
    if (grid_intervals < 1) throw ConfigError("config: grid.N must be >= 1");
    if (paths < 1) throw ConfigError("config: run.paths must be >= 1");
    if (noise_modes < 1 || noise_modes > modes)
        throw ConfigError("config: noise.modes must lie in [1, modes]");
    for (double g : gammas)
        if (!(g > 0.0 && g < 1.0)) throw ConfigError("config: run.gammas entries must lie in (0,1)");
    for (double b : betas)
        if (!(b > 0.0 && b < 1.0)) throw ConfigError("config: run.betas entries must lie in (0,1)");
    for (double k : kappas)
        if (!(k > 0.0 && k < 1.0)) throw ConfigError("config: run.kappas entries must lie in (0,1)");
    for (int n : intervals)
        if (n < 0 || n >= grid_intervals)
            throw ConfigError("config: run.intervals entries must lie in [0, grid.N)");
}

} // namespace rfde
