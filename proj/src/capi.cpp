#include "nlskt/nlskt.h"

#include "config.hpp"
#include "errors.hpp"
#include "runner.hpp"

#include <algorithm>
#include <cstring>
#include <string>

using namespace nlskt;

struct nlskt_config {
    RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

nlskt_status fail(nlskt_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

// Translates the C++ exception hierarchy into status codes.
template <typename Fn>
nlskt_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const ConfigError& e) {
        return fail(NLSKT_ERR_CONFIG, e.what());
    } catch (const DegenerateKernel& e) {
        return fail(NLSKT_ERR_KERNEL, e.what());
    } catch (const InvalidDelta& e) {
        return fail(NLSKT_ERR_KERNEL, e.what());
    } catch (const NoConvergence& e) {
        return fail(NLSKT_ERR_SOLVER, e.what());
    } catch (const NonContracting& e) {
        return fail(NLSKT_ERR_SOLVER, e.what());
    } catch (const UnstableStep& e) {
        return fail(NLSKT_ERR_SOLVER, e.what());
    } catch (const WindowTooLarge& e) {
        return fail(NLSKT_ERR_SOLVER, e.what());
    } catch (const LedgerViolation& e) {
        return fail(NLSKT_ERR_LEDGER, e.what());
    } catch (const std::exception& e) {
        return fail(NLSKT_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(NLSKT_ERR_INTERNAL, "unknown error");
    }
}

nlskt_status run_wrapped(const char* name, const nlskt_config* cfg,
                         const char* out_dir) {
    if (!cfg)
        return fail(NLSKT_ERR_INVALID_ARG, "null config handle");
    return guarded([&]() -> nlskt_status {
        RunResult r = run_subcommand(name, cfg->cfg, out_dir ? out_dir : "");
        if (r.exit_code != 0)
            return fail(NLSKT_ERR_RUN_FAILED, r.message);
        return NLSKT_OK;
    });
}

} // namespace

extern "C" {

const char* nlskt_version(void) { return kVersion; }

const char* nlskt_last_error(void) { return g_last_error.c_str(); }

nlskt_status nlskt_config_new(nlskt_config** out) {
    if (!out)
        return fail(NLSKT_ERR_INVALID_ARG, "null output pointer");
    return guarded([&]() -> nlskt_status {
        *out = new nlskt_config{};
        return NLSKT_OK;
    });
}

nlskt_status nlskt_config_load(const char* path, nlskt_config** out) {
    if (!path || !out)
        return fail(NLSKT_ERR_INVALID_ARG, "null path or output pointer");
    return guarded([&]() -> nlskt_status {
        auto* handle = new nlskt_config{load_config_file(path)};
        *out = handle;
        return NLSKT_OK;
    });
}

nlskt_status nlskt_config_from_string(const char* text, nlskt_config** out) {
    if (!text || !out)
        return fail(NLSKT_ERR_INVALID_ARG, "null text or output pointer");
    return guarded([&]() -> nlskt_status {
        auto* handle = new nlskt_config{parse_config_text(text)};
        *out = handle;
        return NLSKT_OK;
    });
}

nlskt_status nlskt_config_override(nlskt_config* cfg, const char* key,
                                   const char* value) {
    if (!cfg || !key || !value)
        return fail(NLSKT_ERR_INVALID_ARG, "null config, key, or value");
    return guarded([&]() -> nlskt_status {
        apply_override(cfg->cfg, key, value);
        return NLSKT_OK;
    });
}

void nlskt_config_free(nlskt_config* cfg) { delete cfg; }

nlskt_status nlskt_config_validate(const nlskt_config* cfg) {
    if (!cfg)
        return fail(NLSKT_ERR_INVALID_ARG, "null config handle");
    return guarded([&]() -> nlskt_status {
        ValidationResult v = validate(cfg->cfg);
        if (!v.ok()) {
            std::string msg = "invalid configuration:";
            for (const auto& e : v.errors)
                msg += "\n  - " + e;
            return fail(NLSKT_ERR_CONFIG, msg);
        }
        return NLSKT_OK;
    });
}

nlskt_status nlskt_config_emit(const nlskt_config* cfg, char* buf,
                               unsigned long buflen, unsigned long* needed) {
    if (!cfg)
        return fail(NLSKT_ERR_INVALID_ARG, "null config handle");
    return guarded([&]() -> nlskt_status {
        std::string text = emit_config(cfg->cfg);
        if (needed)
            *needed = static_cast<unsigned long>(text.size());
        if (buf && buflen > 0) {
            std::size_t n = std::min<std::size_t>(text.size(), buflen - 1);
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
        return NLSKT_OK;
    });
}

nlskt_status nlskt_run_simulate(const nlskt_config* cfg, const char* out_dir) {
    return run_wrapped("simulate", cfg, out_dir);
}

nlskt_status nlskt_run_sweep(const nlskt_config* cfg, const char* out_dir) {
    return run_wrapped("sweep", cfg, out_dir);
}

nlskt_status nlskt_run_verify(const nlskt_config* cfg, const char* out_dir) {
    return run_wrapped("verify", cfg, out_dir);
}

nlskt_status nlskt_run_filter(const nlskt_config* cfg, const char* out_dir) {
    return run_wrapped("filter", cfg, out_dir);
}

} // extern "C"
