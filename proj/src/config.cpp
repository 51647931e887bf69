#include "config.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace nlskt {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(to_double(key, item));
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ",";
        out += fmt(v[i]);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"domain.dim", [](RunConfig& c, const std::string& k, const std::string& v) { c.dim = to_int(k, v); }},
        {"domain.lo_x", [](RunConfig& c, const std::string& k, const std::string& v) { c.lo_x = to_double(k, v); }},
        {"domain.hi_x", [](RunConfig& c, const std::string& k, const std::string& v) { c.hi_x = to_double(k, v); }},
        {"domain.lo_y", [](RunConfig& c, const std::string& k, const std::string& v) { c.lo_y = to_double(k, v); }},
        {"domain.hi_y", [](RunConfig& c, const std::string& k, const std::string& v) { c.hi_y = to_double(k, v); }},
        {"domain.cells_x", [](RunConfig& c, const std::string& k, const std::string& v) { c.cells_x = to_int(k, v); }},
        {"domain.cells_y", [](RunConfig& c, const std::string& k, const std::string& v) { c.cells_y = to_int(k, v); }},
        {"kernel.family", [](RunConfig& c, const std::string&, const std::string& v) { c.kernel_family = v; }},
        {"kernel.rho", [](RunConfig& c, const std::string& k, const std::string& v) { c.rho = to_double(k, v); }},
        {"kernel.width", [](RunConfig& c, const std::string& k, const std::string& v) { c.width = to_double(k, v); }},
        {"kernel.amplitude", [](RunConfig& c, const std::string& k, const std::string& v) { c.amplitude = to_double(k, v); }},
        {"kernel.delta", [](RunConfig& c, const std::string& k, const std::string& v) { c.delta = to_double(k, v); }},
        {"kernel.calibrate", [](RunConfig& c, const std::string& k, const std::string& v) { c.calibrate = to_bool(k, v); }},
        {"coeffs.c1", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.c1 = to_double(k, v); }},
        {"coeffs.c2", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.c2 = to_double(k, v); }},
        {"coeffs.a1", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.a1 = to_double(k, v); }},
        {"coeffs.a2", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.a2 = to_double(k, v); }},
        {"coeffs.alpha1", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.alpha1 = to_double(k, v); }},
        {"coeffs.alpha2", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.alpha2 = to_double(k, v); }},
        {"coeffs.beta11", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.beta11 = to_double(k, v); }},
        {"coeffs.beta12", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.beta12 = to_double(k, v); }},
        {"coeffs.beta21", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.beta21 = to_double(k, v); }},
        {"coeffs.beta22", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.beta22 = to_double(k, v); }},
        {"coeffs.epsilon", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs.epsilon = to_double(k, v); }},
        {"coeffs.theorem_mode", [](RunConfig& c, const std::string& k, const std::string& v) { c.theorem_mode = to_bool(k, v); }},
        {"stepper.t_final", [](RunConfig& c, const std::string& k, const std::string& v) { c.t_final = to_double(k, v); }},
        {"stepper.tau", [](RunConfig& c, const std::string& k, const std::string& v) { c.tau = to_double(k, v); }},
        {"stepper.theta", [](RunConfig& c, const std::string& k, const std::string& v) { c.theta = to_double(k, v); }},
        {"stepper.picard_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.picard_tol = to_double(k, v); }},
        {"stepper.picard_max_iters", [](RunConfig& c, const std::string& k, const std::string& v) { c.picard_max_iters = to_int(k, v); }},
        {"stepper.snapshot_stride", [](RunConfig& c, const std::string& k, const std::string& v) { c.snapshot_stride = to_int(k, v); }},
        {"init.profile1", [](RunConfig& c, const std::string&, const std::string& v) { c.profile1 = v; }},
        {"init.profile2", [](RunConfig& c, const std::string&, const std::string& v) { c.profile2 = v; }},
        {"init.amp1", [](RunConfig& c, const std::string& k, const std::string& v) { c.amp1 = to_double(k, v); }},
        {"init.amp2", [](RunConfig& c, const std::string& k, const std::string& v) { c.amp2 = to_double(k, v); }},
        {"init.csv1", [](RunConfig& c, const std::string&, const std::string& v) { c.init_csv1 = v; }},
        {"init.csv2", [](RunConfig& c, const std::string&, const std::string& v) { c.init_csv2 = v; }},
        {"filter.input", [](RunConfig& c, const std::string&, const std::string& v) { c.filter_input = v; }},
        {"filter.rho", [](RunConfig& c, const std::string& k, const std::string& v) { c.filter_rho = to_double(k, v); }},
        {"filter.range_h", [](RunConfig& c, const std::string& k, const std::string& v) { c.filter_range_h = to_double(k, v); }},
        {"filter.tau", [](RunConfig& c, const std::string& k, const std::string& v) { c.filter_tau = to_double(k, v); }},
        {"filter.t_final", [](RunConfig& c, const std::string& k, const std::string& v) { c.filter_t_final = to_double(k, v); }},
        {"study.kind", [](RunConfig& c, const std::string&, const std::string& v) { c.study_kind = v; }},
        {"study.delta_list", [](RunConfig& c, const std::string& k, const std::string& v) { c.delta_list = to_list(k, v); }},
        {"study.epsilon_list", [](RunConfig& c, const std::string& k, const std::string& v) { c.epsilon_list = to_list(k, v); }},
        {"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
        {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_int(k, v); }},
    };
    return table;
}

} // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto it = setters().find(key);
    if (it == setters().end())
        throw ConfigError("unknown config key: '" + key + "'");
    it->second(cfg, key, trim(value));
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ValidationResult validate(const RunConfig& cfg) {
    ValidationResult r;
    auto err = [&](const std::string& m) { r.errors.push_back(m); };

    if (cfg.dim != 1 && cfg.dim != 2)
        err("domain.dim: must be 1 or 2");
    if (!(cfg.hi_x > cfg.lo_x))
        err("domain.hi_x: domain must have positive extent");
    if (cfg.cells_x < 3)
        err("domain.cells_x: at least 3 cells per axis");
    if (cfg.dim == 2) {
        if (!(cfg.hi_y > cfg.lo_y))
            err("domain.hi_y: domain must have positive extent");
        if (cfg.cells_y < 3)
            err("domain.cells_y: at least 3 cells per axis");
    }

    if (cfg.kernel_family != "uniform-ball" && cfg.kernel_family != "truncated-gaussian")
        err("kernel.family: unknown family '" + cfg.kernel_family + "'");
    if (!(cfg.rho > 0.0))
        err("kernel.rho: support condition needs rho > 0");
    if (cfg.kernel_family == "truncated-gaussian" && !(cfg.width > 0.0))
        err("kernel.width: must be > 0");
    if (cfg.amplitude < 0.0)
        err("kernel.amplitude: kernel must be non-negative");
    if (cfg.delta < 0.0)
        err("kernel.delta: must be positive when set");

    auto coeff_check = [&](const char* key, double v) {
        if (v < 0.0)
            err(std::string(key) + ": model constants are non-negative");
    };
    coeff_check("coeffs.c1", cfg.coeffs.c1);
    coeff_check("coeffs.c2", cfg.coeffs.c2);
    coeff_check("coeffs.a1", cfg.coeffs.a1);
    coeff_check("coeffs.a2", cfg.coeffs.a2);
    coeff_check("coeffs.alpha1", cfg.coeffs.alpha1);
    coeff_check("coeffs.alpha2", cfg.coeffs.alpha2);
    coeff_check("coeffs.beta11", cfg.coeffs.beta11);
    coeff_check("coeffs.beta12", cfg.coeffs.beta12);
    coeff_check("coeffs.beta21", cfg.coeffs.beta21);
    coeff_check("coeffs.beta22", cfg.coeffs.beta22);
    coeff_check("coeffs.epsilon", cfg.coeffs.epsilon);

    if (!cfg.coeffs.theorem_condition()) {
        std::string msg = "coeffs: existence-theorem condition a_i + beta_ii > 0 fails";
        if (cfg.theorem_mode)
            err(msg);
        else
            r.warnings.push_back(msg);
    }

    if (!(cfg.t_final > 0.0))
        err("stepper.t_final: must be > 0");
    if (cfg.tau < 0.0)
        err("stepper.tau: must be positive when set");
    if (!(cfg.theta > 0.0 && cfg.theta < 1.0))
        err("stepper.theta: must lie in (0,1)");
    if (cfg.picard_tol < 0.0)
        err("stepper.picard_tol: must be positive when set");
    if (cfg.picard_max_iters < 1)
        err("stepper.picard_max_iters: must be >= 1");
    if (cfg.snapshot_stride < 1)
        err("stepper.snapshot_stride: must be >= 1");

    if (!(cfg.filter_rho > 0.0))
        err("filter.rho: must be > 0");
    if (!(cfg.filter_range_h > 0.0))
        err("filter.range_h: must be > 0");
    if (cfg.filter_tau < 0.0)
        err("filter.tau: must be positive when set");
    if (cfg.filter_t_final < 0.0)
        err("filter.t_final: must be non-negative");

    auto profile_check = [&](const char* key, const std::string& p) {
        static const char* known[] = {"constant", "cosine-bump", "two-bump",
                                      "bump-left", "bump-right", "csv"};
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return p == k; }) == std::end(known))
            err(std::string(key) + ": unknown profile '" + p + "'");
    };
    profile_check("init.profile1", cfg.profile1);
    profile_check("init.profile2", cfg.profile2);
    if (cfg.amp1 < 0.0)
        err("init.amp1: initial data are non-negative");
    if (cfg.amp2 < 0.0)
        err("init.amp2: initial data are non-negative");

    return r;
}

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "domain.dim = " << cfg.dim << "\n";
    out << "domain.lo_x = " << fmt(cfg.lo_x) << "\n";
    out << "domain.hi_x = " << fmt(cfg.hi_x) << "\n";
    out << "domain.lo_y = " << fmt(cfg.lo_y) << "\n";
    out << "domain.hi_y = " << fmt(cfg.hi_y) << "\n";
    out << "domain.cells_x = " << cfg.cells_x << "\n";
    out << "domain.cells_y = " << cfg.cells_y << "\n";
    out << "kernel.family = " << cfg.kernel_family << "\n";
    out << "kernel.rho = " << fmt(cfg.rho) << "\n";
    out << "kernel.width = " << fmt(cfg.width) << "\n";
    out << "kernel.amplitude = " << fmt(cfg.amplitude) << "\n";
    out << "kernel.delta = " << fmt(cfg.delta) << "\n";
    out << "kernel.calibrate = " << (cfg.calibrate ? "true" : "false") << "\n";
    out << "coeffs.c1 = " << fmt(cfg.coeffs.c1) << "\n";
    out << "coeffs.c2 = " << fmt(cfg.coeffs.c2) << "\n";
    out << "coeffs.a1 = " << fmt(cfg.coeffs.a1) << "\n";
    out << "coeffs.a2 = " << fmt(cfg.coeffs.a2) << "\n";
    out << "coeffs.alpha1 = " << fmt(cfg.coeffs.alpha1) << "\n";
    out << "coeffs.alpha2 = " << fmt(cfg.coeffs.alpha2) << "\n";
    out << "coeffs.beta11 = " << fmt(cfg.coeffs.beta11) << "\n";
    out << "coeffs.beta12 = " << fmt(cfg.coeffs.beta12) << "\n";
    out << "coeffs.beta21 = " << fmt(cfg.coeffs.beta21) << "\n";
    out << "coeffs.beta22 = " << fmt(cfg.coeffs.beta22) << "\n";
    out << "coeffs.epsilon = " << fmt(cfg.coeffs.epsilon) << "\n";
    out << "coeffs.theorem_mode = " << (cfg.theorem_mode ? "true" : "false") << "\n";
    out << "stepper.t_final = " << fmt(cfg.t_final) << "\n";
    out << "stepper.tau = " << fmt(cfg.tau) << "\n";
    out << "stepper.theta = " << fmt(cfg.theta) << "\n";
    out << "stepper.picard_tol = " << fmt(cfg.picard_tol) << "\n";
    out << "stepper.picard_max_iters = " << cfg.picard_max_iters << "\n";
    out << "stepper.snapshot_stride = " << cfg.snapshot_stride << "\n";
    out << "init.profile1 = " << cfg.profile1 << "\n";
    out << "init.profile2 = " << cfg.profile2 << "\n";
    out << "init.amp1 = " << fmt(cfg.amp1) << "\n";
    out << "init.amp2 = " << fmt(cfg.amp2) << "\n";
    if (!cfg.init_csv1.empty())
        out << "init.csv1 = " << cfg.init_csv1 << "\n";
    if (!cfg.init_csv2.empty())
        out << "init.csv2 = " << cfg.init_csv2 << "\n";
    if (!cfg.filter_input.empty())
        out << "filter.input = " << cfg.filter_input << "\n";
    out << "filter.rho = " << fmt(cfg.filter_rho) << "\n";
    out << "filter.range_h = " << fmt(cfg.filter_range_h) << "\n";
    out << "filter.tau = " << fmt(cfg.filter_tau) << "\n";
    out << "filter.t_final = " << fmt(cfg.filter_t_final) << "\n";
    if (!cfg.study_kind.empty())
        out << "study.kind = " << cfg.study_kind << "\n";
    if (!cfg.delta_list.empty())
        out << "study.delta_list = " << fmt_list(cfg.delta_list) << "\n";
    if (!cfg.epsilon_list.empty())
        out << "study.epsilon_list = " << fmt_list(cfg.epsilon_list) << "\n";
    out << "output.dir = " << cfg.out_dir << "\n";
    out << "seed = " << cfg.seed << "\n";
    return out.str();
}

Domain build_domain(const RunConfig& cfg) {
    if (cfg.dim == 1)
        return Domain(cfg.lo_x, cfg.hi_x, cfg.cells_x);
    return Domain({cfg.lo_x, cfg.lo_y}, {cfg.hi_x, cfg.hi_y}, {cfg.cells_x, cfg.cells_y});
}

KernelSpec build_kernel_spec(const RunConfig& cfg) {
    KernelSpec spec;
    if (cfg.kernel_family == "uniform-ball")
        spec = KernelSpec::uniform_ball(cfg.dim, cfg.rho, cfg.amplitude);
    else if (cfg.kernel_family == "truncated-gaussian")
        spec = KernelSpec::truncated_gaussian(cfg.dim, cfg.rho, cfg.width, cfg.amplitude);
    else
        throw ConfigError("unknown kernel family: " + cfg.kernel_family);
    if (cfg.delta > 0.0)
        spec = rescale(spec, cfg.delta);
    return spec;
}

KernelTable build_kernel_table(const RunConfig& cfg, const Domain& domain) {
    return build_table(build_kernel_spec(cfg), domain, cfg.calibrate);
}

StepConfig build_step_config(const RunConfig& cfg) {
    StepConfig sc;
    sc.picard_tol = cfg.picard_tol;
    sc.picard_max_iters = cfg.picard_max_iters;
    sc.tau_policy = cfg.tau > 0.0 ? TauPolicy::Fixed : TauPolicy::Auto;
    sc.tau_fixed = cfg.tau;
    sc.theta = cfg.theta;
    sc.t_final = cfg.t_final;
    sc.snapshot_stride = cfg.snapshot_stride;
    return sc;
}

namespace {

Field build_profile(const Domain& d, const std::string& profile, double amp,
                    const std::string& csv_path) {
    auto bump = [](double xi, double center) {
        double z = (xi - center) / 0.12;
        return std::exp(-z * z);
    };
    auto shape = [&](double xi) -> double {
        if (profile == "constant")
            return 1.0;
        if (profile == "cosine-bump") {
            double s = std::sin(3.14159265358979323846 * xi);
            return s * s;
        }
        if (profile == "bump-left")
            return bump(xi, 0.3);
        if (profile == "bump-right")
            return bump(xi, 0.7);
        if (profile == "two-bump")
            return bump(xi, 0.3) + bump(xi, 0.7);
        throw ConfigError("unknown initial profile: " + profile);
    };

    if (profile == "csv") {
        if (csv_path.empty())
            throw ConfigError("csv profile needs init.csv path");
        return read_snapshot_file(csv_path, d);
    }
    if (d.dim() == 1) {
        double lo = d.lower(0), len = d.upper(0) - lo;
        return Field::sample(d, [&](double x) { return amp * shape((x - lo) / len); });
    }
    double lox = d.lower(0), lenx = d.upper(0) - lox;
    double loy = d.lower(1), leny = d.upper(1) - loy;
    return Field::sample(d, [&](double x, double y) {
        return amp * shape((x - lox) / lenx) * shape((y - loy) / leny);
    });
}

} // namespace

State build_initial_state(const RunConfig& cfg, const Domain& domain) {
    Field u1 = build_profile(domain, cfg.profile1, cfg.amp1, cfg.init_csv1);
    Field u2 = build_profile(domain, cfg.profile2, cfg.amp2, cfg.init_csv2);
    return State(std::move(u1), std::move(u2));
}

} // namespace nlskt
