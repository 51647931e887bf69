#pragma once

#include "config.hpp"
#include "grid.hpp"

#include <string>
#include <vector>

namespace nlskt {

inline constexpr const char* kVersion = "1.0.0";

/// One orchestrated run: subcommand dispatch plus deterministic artifact
/// emission (CSVs, snapshots, run manifest) into an output directory.
struct RunResult {
    int exit_code = 0;
    std::vector<std::string> artifacts;
    std::string message; // human-readable summary or failure reason
};

RunResult run_simulate(const RunConfig& cfg, const std::string& out_dir);
RunResult run_sweep(const RunConfig& cfg, const std::string& out_dir);
RunResult run_verify(const RunConfig& cfg, const std::string& out_dir);
RunResult run_filter(const RunConfig& cfg, const std::string& out_dir);

RunResult run_subcommand(const std::string& name, const RunConfig& cfg,
                         const std::string& out_dir);

// Portable graymap (P2) round trip. Values are stored as levels in
// [0, maxval]; read scales to [0,1], write clamps and rescales.
struct GrayImage {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<double> pixels; // row-major, normalized to [0,1]
};

GrayImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& img);

} // namespace nlskt
