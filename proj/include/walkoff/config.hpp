#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "walkoff/analysis.hpp"
#include "walkoff/crystal.hpp"
#include "walkoff/wigner.hpp"

namespace walkoff {

enum class RunMode { WignerSim, AnsatzSim, HeuristicMap, FitSections, Postselect };

std::string to_string(RunMode m);

// Parsed key = value config with [section] headers. Values keep their raw
// text; typed accessors parse on demand and raise ConfigError with the full
// "section.key" path. Unknown keys are rejected at validation time so typos
// fail loudly.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text, const std::string& origin = "<inline>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

    // Throws ConfigError when a present key is not in the allowed set.
    void reject_unknown(const std::map<std::string, std::vector<std::string>>& allowed) const;

    const std::string& raw_text() const { return raw_text_; }
    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::string raw_text_;
    std::string origin_;
};

// Fully validated run description. Field groups are populated according to
// mode; invariants: m >= 16, n_outer >= m, scan lists non-empty and sorted
// ascending, referenced input files exist.
struct RunConfig {
    RunMode mode = RunMode::WignerSim;
    std::string units = "dimensionless";  // "dimensionless" or "physical"
    int threads = 1;

    // WignerSim state (direct parameters, or derived from crystal below).
    MomentumStateParams state;
    std::optional<CrystalSpec> crystal;

    // Phase-space grid.
    int m = 124;
    int n_outer = 186;
    double window = 0.0;  // <= 0 requests automatic selection
    bool window_strict = true;
    ShearInterpolation interpolation = ShearInterpolation::Bilinear;

    // Scan.
    std::vector<double> mu_list;  // WignerSim
    std::vector<double> z_list;   // AnsatzSim
    double k = 1.0;               // carrier wavenumber for z propagation

    // AnsatzSim state and its position grid.
    AnsatzParams ansatz;
    double ansatz_half_width = 600.0;
    int ansatz_n = 4096;

    // HeuristicMap.
    struct HeuristicScan {
        double w_phi = 1.0, beta = 1.0, t = 0.0, l = 0.0, k = 1.0, w_p = 1.0;
        double x_plus_min = 0.0, x_plus_max = 1.0;
        int x_plus_n = 0;
        double z_min = 0.0, z_max = 1.0;
        int z_n = 0;
    } heuristic;

    // FitSections / Postselect.
    std::vector<std::string> inputs;
    std::vector<double> c_list;
    CutKind cut = CutKind::FixedSum;
    double section_step = 0.0;  // <= 0: native grid pitch
    bool poisson_weights = false;
    bool apply_magnification = false;

    // Output.
    std::string out_dir;
    bool heatmaps = true;
    int max_csv_dim = 512;  // larger matrices are block-binned before writing

    std::string config_echo;  // raw config text, reproduced in the manifest
};

// Parses and validates a config for the given mode. A [run] mode key, when
// present, must agree with the requested mode. cli_out and cli_threads
// override the config when nonempty / positive.
RunConfig load_run_config(const std::string& path, RunMode mode, const std::string& cli_out = "",
                          int cli_threads = 0);

}  // namespace walkoff
