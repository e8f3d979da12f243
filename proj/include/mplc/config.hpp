#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mplc/field.hpp"
#include "mplc/wfm.hpp"

namespace mplc {

/// Run-wide configuration with the experiment's defaults: 1024^2 grid,
/// 8 um pitch, 808 nm, 0.94 mm waist, three planes spaced 0.80 m
/// (SLM -> mirror -> SLM round trip). active_region = 0 modulates the whole
/// grid; set 630 to restrict the masks to the hardware extent.
struct RunConfig {
    int nx = 1024;
    int ny = 1024;
    double pitch_m = 8e-6;
    double wavelength_m = 808e-9;
    double waist_m = 0.94e-3;
    int n_planes = 3;
    std::vector<double> spacings_m;  // sized to n_planes; empty = 0.80 m each
    double target_overlap = 0.999;
    int max_sweeps = 200;
    int active_region = 0;
    std::uint64_t seed = 1;
    std::string output_dir = ".";

    GridSpec grid() const;
    WfmConfig wfm() const;
    std::vector<double> spacings() const;  // resolved to n_planes entries
    void validate() const;
};

/// Flat key=value lines; '#' starts a comment, blank lines are skipped.
/// Unknown keys are rejected. spacings_m takes a comma-separated list.
std::map<std::string, std::string> read_key_values(const std::string& path);

/// Apply file values onto a config (CLI flags are applied on top by callers).
void apply_key_values(RunConfig& config, const std::map<std::string, std::string>& kv);

/// Serialized snapshot of every field, in key=value form.
std::string config_snapshot(const RunConfig& config);

}  // namespace mplc
