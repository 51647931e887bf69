#pragma once

#include "dynamics.hpp"
#include "grid.hpp"
#include "kernel.hpp"
#include "stepper.hpp"

#include <map>
#include <string>
#include <vector>

namespace nlskt {

/// Flat key-value run configuration with dotted block prefixes. Unknown
/// keys are rejected at parse time so typos surface early.
struct RunConfig {
    // domain block
    int dim = 1;
    double lo_x = 0.0, hi_x = 1.0;
    double lo_y = 0.0, hi_y = 1.0;
    int cells_x = 64, cells_y = 64;

    // kernel block
    std::string kernel_family = "uniform-ball";
    double rho = 0.25;
    double width = 0.1;
    double amplitude = 1.0;
    double delta = 0.0; // 0 = no rescaling
    bool calibrate = false;

    // coefficient block
    Coefficients coeffs;
    bool theorem_mode = false;

    // stepper block
    double t_final = 1.0;
    double tau = 0.0; // 0 = auto policy
    double theta = 0.5;
    double picard_tol = 0.0;
    int picard_max_iters = 200;
    int snapshot_stride = 1;

    // initial data block
    std::string profile1 = "constant";
    std::string profile2 = "constant";
    double amp1 = 1.0;
    double amp2 = 1.0;
    std::string init_csv1;
    std::string init_csv2;

    // study block
    std::string study_kind;
    std::vector<double> delta_list;
    std::vector<double> epsilon_list;

    // filter block (bilateral subcommand)
    std::string filter_input;       // .pgm or snapshot .csv
    double filter_rho = 0.1;
    double filter_range_h = 0.1;
    double filter_tau = 0.0;        // 0 = auto
    double filter_t_final = 0.0;    // 0 = single step

    // output block
    std::string out_dir = "out";
    long seed = 0;
};

struct ValidationResult {
    std::vector<std::string> errors;   // hard failures
    std::vector<std::string> warnings; // logged, run proceeds
    bool ok() const { return errors.empty(); }
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Executable form of the data assumptions: kernel support/nonnegativity,
// coefficient signs, initial-data signs, and (in theorem mode) the
// existence-theorem condition a_i + beta_ii > 0 as a hard error.
ValidationResult validate(const RunConfig& cfg);

// Effective-config emission; parsing the result reproduces the same object.
std::string emit_config(const RunConfig& cfg);

Domain build_domain(const RunConfig& cfg);
KernelSpec build_kernel_spec(const RunConfig& cfg);
KernelTable build_kernel_table(const RunConfig& cfg, const Domain& domain);
StepConfig build_step_config(const RunConfig& cfg);
State build_initial_state(const RunConfig& cfg, const Domain& domain);

} // namespace nlskt
