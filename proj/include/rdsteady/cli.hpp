#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdsteady/report_io.hpp"

namespace rdsteady::cli {

/// Resolved run configuration. Flags override config-file values; the
/// config file is flat key=value text or JSON with the same keys.
struct RunConfig {
    std::string command; // solve | oracle | path | condition | dynamics |
                         // convergence-table | constants
    std::string pair_name;
    double p = 2.0;
    double q = 3.0;
    std::vector<int> n_list = {100};
    double alpha = 1.0;
    std::optional<std::pair<double, double>> alpha_interval; // normalized to [min, max]
    double eps = 1e-12;
    std::string mode = "adaptive"; // or "theoretical"
    ReportFormat format = ReportFormat::json;
    std::string output;  // empty -> stdout
    std::uint64_t seed = 0;
    // dynamics
    double dt = 20.0;
    double t_max = 1e6;
    double steady_tol = 1e-9;
    std::optional<double> ic_constant; // default 0.75 g^{-1}(alpha), inside the basin
    int probes = 1;
    // path / condition sampling
    int samples = 0; // 0 -> per-command default (path 9, condition 33)
    double beta_lo = 0.0;
    double oracle_tol = 1e-12;
    bool timings = false; // wall times are excluded by default so reports stay byte-identical
};

/// Parse argv (without the program name). Throws ConfigError on bad flags,
/// unknown commands, or unreadable config files. `--help` output goes to
/// `help_text` and leaves command empty.
RunConfig parse_args(const std::vector<std::string>& args, std::string* help_text = nullptr);

/// Dispatch a parsed run. Returns 0 on success; failures are reported by
/// throwing (ConfigError -> exit 2, ValidationError -> exit 4, any other
/// library error -> exit 3; the mapping lives in the executable).
int run(const RunConfig& config);

} // namespace rdsteady::cli
