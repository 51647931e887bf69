// Command line front end. Talks to the engine exclusively through the
// shared-library C interface.
#include <nlskt/nlskt.h>

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

int fail(nlskt_status status) {
    std::fprintf(stderr, "error (%d): %s\n", static_cast<int>(status),
                 nlskt_last_error());
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocal cross-diffusion simulation engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;

    const char* names[] = {"simulate", "sweep", "verify", "filter"};
    const char* descs[] = {"integrate a trajectory and emit ledgers",
                           "run a delta or epsilon study",
                           "run the oracle verification suites",
                           "apply the bilateral filter to an image"};
    for (int i = 0; i < 4; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", config_path, "run configuration file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--override", overrides, "key=value config override");
    }

    CLI11_PARSE(app, argc, argv);
    std::string cmd = app.get_subcommands().front()->get_name();

    nlskt_config* cfg = nullptr;
    nlskt_status st = config_path.empty() ? nlskt_config_new(&cfg)
                                          : nlskt_config_load(config_path.c_str(), &cfg);
    if (st != NLSKT_OK)
        return fail(st);

    for (const std::string& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --override expects key=value, got '%s'\n",
                         ov.c_str());
            nlskt_config_free(cfg);
            return 1;
        }
        st = nlskt_config_override(cfg, ov.substr(0, eq).c_str(),
                                   ov.substr(eq + 1).c_str());
        if (st != NLSKT_OK) {
            nlskt_config_free(cfg);
            return fail(st);
        }
    }

    const char* out = out_dir.empty() ? nullptr : out_dir.c_str();
    if (cmd == "simulate")
        st = nlskt_run_simulate(cfg, out);
    else if (cmd == "sweep")
        st = nlskt_run_sweep(cfg, out);
    else if (cmd == "verify")
        st = nlskt_run_verify(cfg, out);
    else
        st = nlskt_run_filter(cfg, out);

    nlskt_config_free(cfg);
    if (st != NLSKT_OK)
        return fail(st);
    return 0;
}
