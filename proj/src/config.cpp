#include "walkoff/config.hpp"

#include <algorithm>
#include <filesystem>

#include "walkoff/numeric.hpp"
#include "walkoff/outputs.hpp"

namespace walkoff {

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::WignerSim: return "simulate-wigner";
        case RunMode::AnsatzSim: return "simulate-ansatz";
        case RunMode::HeuristicMap: return "heuristic-map";
        case RunMode::FitSections: return "fit-sections";
        case RunMode::Postselect: return "postselect";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string path_of(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    return parse_text(read_file(path), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
    ConfigFile cf;
    cf.raw_text_ = text;
    cf.origin_ = origin;

    std::string section;
    std::size_t pos = 0;
    long line_no = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(origin + ":" + std::to_string(line_no) +
                                                   ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) +
                                                   ": empty section name");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        auto& sec = cf.sections_[section];
        if (!sec.emplace(key, value).second)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                              path_of(section, key) + "'");
    }
    return cf;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    if (it != sections_.end()) {
        auto kt = it->second.find(key);
        if (kt != it->second.end()) return kt->second;
    }
    throw ConfigError("missing required key '" + path_of(section, key) + "'");
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    std::string v = get_string(section, key);
    double out;
    if (!parse_double(v, out))
        throw ConfigError("key '" + path_of(section, key) + "' is not a number: '" + v + "'");
    return out;
}

double ConfigFile::get_double(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    double v = get_double(section, key);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("key '" + path_of(section, key) + "' must be an integer");
    return i;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = get_string(section, key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + path_of(section, key) + "' must be a boolean, got '" + v + "'");
}

std::vector<double> ConfigFile::get_double_list(const std::string& section, const std::string& key) const {
    std::string v = get_string(section, key);
    std::vector<double> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        double d;
        if (!parse_double(cur, d))
            throw ConfigError("key '" + path_of(section, key) + "' has a malformed number '" + cur + "'");
        out.push_back(d);
        cur.clear();
    };
    for (char c : v) {
        if (c == ' ' || c == '\t' || c == ',')
            flush();
        else
            cur += c;
    }
    flush();
    return out;
}

void ConfigFile::reject_unknown(const std::map<std::string, std::vector<std::string>>& allowed) const {
    for (const auto& [section, keys] : sections_) {
        auto it = allowed.find(section);
        if (it == allowed.end())
            throw ConfigError("unknown section '[" + section + "]' for this mode");
        for (const auto& [key, value] : keys) {
            (void)value;
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                throw ConfigError("unknown key '" + path_of(section, key) + "' for this mode");
        }
    }
}

namespace {

RunMode parse_mode(const std::string& s) {
    if (s == "simulate-wigner") return RunMode::WignerSim;
    if (s == "simulate-ansatz") return RunMode::AnsatzSim;
    if (s == "heuristic-map") return RunMode::HeuristicMap;
    if (s == "fit-sections") return RunMode::FitSections;
    if (s == "postselect") return RunMode::Postselect;
    throw ConfigError("unknown mode '" + s + "'");
}

std::vector<double> sorted_list(const ConfigFile& cf, const std::string& section,
                                const std::string& key) {
    std::vector<double> v = cf.get_double_list(section, key);
    if (v.empty()) throw ConfigError("key '" + section + "." + key + "' must not be empty");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1]))
            throw ConfigError("key '" + section + "." + key + "' must be sorted strictly ascending");
    return v;
}

void load_common(const ConfigFile& cf, RunConfig& rc, RunMode mode, const std::string& cli_out,
                 int cli_threads) {
    if (cf.has("run", "mode")) {
        RunMode declared = parse_mode(cf.get_string("run", "mode"));
        if (declared != mode)
            throw ConfigError("config declares mode '" + to_string(declared) +
                              "' but the command requests '" + to_string(mode) + "'");
    }
    rc.mode = mode;
    rc.units = cf.get_string("run", "units", "dimensionless");
    if (rc.units != "dimensionless" && rc.units != "physical")
        throw ConfigError("run.units must be 'dimensionless' or 'physical'");
    rc.threads = cli_threads > 0 ? cli_threads : cf.get_int("run", "threads", 1);
    if (rc.threads < 1 || rc.threads > 256) throw ConfigError("threads must be in [1, 256]");

    rc.out_dir = !cli_out.empty() ? cli_out : cf.get_string("output", "dir", "");
    if (rc.out_dir.empty())
        throw ConfigError("output directory required (output.dir key or --out option)");
    rc.heatmaps = cf.get_bool("output", "heatmaps", true);
    rc.max_csv_dim = cf.get_int("output", "max_csv_dim", 512);
    if (rc.max_csv_dim < 16) throw ConfigError("output.max_csv_dim must be at least 16");
    rc.config_echo = cf.raw_text();
}

void check_inputs_exist(const std::vector<std::string>& inputs) {
    if (inputs.empty()) throw ConfigError("at least one input file is required");
    for (const std::string& p : inputs)
        if (!std::filesystem::exists(p)) throw ConfigError("input file does not exist: " + p);
}

std::vector<std::string> split_paths(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Paths in configs are resolved relative to the config file's directory.
std::string resolve_relative(const std::string& origin, const std::string& p) {
    std::filesystem::path fp(p);
    if (fp.is_absolute()) return p;
    return (std::filesystem::path(origin).parent_path() / fp).string();
}

const std::vector<std::string> kRunKeys = {"mode", "units", "threads"};
const std::vector<std::string> kOutputKeys = {"dir", "heatmaps", "max_csv_dim"};

}  // namespace

RunConfig load_run_config(const std::string& path, RunMode mode, const std::string& cli_out,
                          int cli_threads) {
    ConfigFile cf = ConfigFile::parse_file(path);
    RunConfig rc;
    load_common(cf, rc, mode, cli_out, cli_threads);

    switch (mode) {
        case RunMode::WignerSim: {
            cf.reject_unknown({{"run", kRunKeys},
                               {"output", kOutputKeys},
                               {"state", {"w_p", "beta", "t", "l"}},
                               {"crystal", {"L", "theta", "n_o", "n_e", "k_p", "lambda_p"}},
                               {"grid", {"m", "n_outer", "window", "window_check", "interpolation"}},
                               {"scan", {"mu_list"}}});
            rc.state.w_p = cf.get_double("state", "w_p");
            bool direct = cf.has("state", "beta") || cf.has("state", "t") || cf.has("state", "l");
            bool from_crystal = cf.has("crystal", "L");
            if (direct && from_crystal)
                throw ConfigError("give either state.{beta,t,l} or a [crystal] block, not both");
            if (from_crystal) {
                CrystalSpec spec{};
                spec.L = cf.get_double("crystal", "L");
                spec.theta = cf.get_double("crystal", "theta");
                spec.n_o = cf.get_double("crystal", "n_o");
                spec.n_e = cf.get_double("crystal", "n_e");
                if (cf.has("crystal", "k_p") == cf.has("crystal", "lambda_p"))
                    throw ConfigError("give exactly one of crystal.k_p and crystal.lambda_p");
                spec.k_p = cf.has("crystal", "k_p") ? cf.get_double("crystal", "k_p")
                                                    : kTwoPi / cf.get_double("crystal", "lambda_p");
                rc.crystal = spec;
                WalkoffParams wp = derive_walkoff_params(spec);
                rc.state.beta = wp.beta;
                rc.state.t = wp.t;
                rc.state.l = wp.l;
            } else {
                rc.state.beta = cf.get_double("state", "beta");
                rc.state.t = cf.get_double("state", "t");
                rc.state.l = cf.get_double("state", "l");
            }
            rc.state.validate();

            rc.m = cf.get_int("grid", "m", 124);
            rc.n_outer = cf.get_int("grid", "n_outer", (3 * rc.m + 1) / 2);
            if (rc.m < 16) throw ConfigError("grid.m must be at least 16");
            if (rc.m % 2 != 0) throw ConfigError("grid.m must be even");
            if (rc.n_outer < rc.m) throw ConfigError("grid.n_outer must be at least grid.m");
            std::string window = cf.get_string("grid", "window", "auto");
            if (window == "auto") {
                rc.window = 0.0;
            } else if (!parse_double(window, rc.window) || !(rc.window > 0.0)) {
                throw ConfigError("grid.window must be a positive number or 'auto'");
            }
            std::string check = cf.get_string("grid", "window_check", "strict");
            if (check != "strict" && check != "warn")
                throw ConfigError("grid.window_check must be 'strict' or 'warn'");
            rc.window_strict = check == "strict";
            std::string interp = cf.get_string("grid", "interpolation", "bilinear");
            if (interp == "bilinear")
                rc.interpolation = ShearInterpolation::Bilinear;
            else if (interp == "catmull_rom")
                rc.interpolation = ShearInterpolation::CatmullRom;
            else
                throw ConfigError("grid.interpolation must be 'bilinear' or 'catmull_rom'");
            rc.mu_list = sorted_list(cf, "scan", "mu_list");
            break;
        }
        case RunMode::AnsatzSim: {
            cf.reject_unknown({{"run", kRunKeys},
                               {"output", kOutputKeys},
                               {"ansatz",
                                {"w_phi", "xi", "rho", "x0", "w_p", "curvature", "half_width", "n"}},
                               {"scan", {"z_list", "k"}}});
            rc.ansatz.w_phi = cf.get_double("ansatz", "w_phi");
            rc.ansatz.xi = cf.get_double("ansatz", "xi");
            rc.ansatz.rho = cf.get_double("ansatz", "rho", 1.0);
            rc.ansatz.x0 = cf.get_double("ansatz", "x0", 0.0);
            rc.ansatz.w_p = cf.get_double("ansatz", "w_p");
            rc.ansatz.curvature = cf.get_bool("ansatz", "curvature", true);
            rc.ansatz.validate();
            rc.ansatz_half_width = cf.get_double("ansatz", "half_width");
            rc.ansatz_n = cf.get_int("ansatz", "n", 0);
            if (!(rc.ansatz_half_width > 0.0)) throw ConfigError("ansatz.half_width must be positive");
            if (rc.ansatz_n < 16) throw ConfigError("ansatz.n must be at least 16");
            rc.z_list = sorted_list(cf, "scan", "z_list");
            if (rc.z_list.front() < 0.0) throw ConfigError("scan.z_list must be nonnegative");
            rc.k = cf.get_double("scan", "k", 1.0);
            if (!(rc.k > 0.0)) throw ConfigError("scan.k must be positive");
            break;
        }
        case RunMode::HeuristicMap: {
            cf.reject_unknown({{"run", kRunKeys},
                               {"output", kOutputKeys},
                               {"heuristic",
                                {"w_phi", "beta", "t", "l", "k", "w_p", "x_plus_min", "x_plus_max",
                                 "x_plus_n", "z_min", "z_max", "z_n"}}});
            auto& h = rc.heuristic;
            h.w_phi = cf.get_double("heuristic", "w_phi");
            h.beta = cf.get_double("heuristic", "beta");
            h.t = cf.get_double("heuristic", "t", 0.0);
            h.l = cf.get_double("heuristic", "l", 0.0);
            h.k = cf.get_double("heuristic", "k", 1.0);
            h.w_p = cf.get_double("heuristic", "w_p");
            h.x_plus_min = cf.get_double("heuristic", "x_plus_min");
            h.x_plus_max = cf.get_double("heuristic", "x_plus_max");
            h.x_plus_n = cf.get_int("heuristic", "x_plus_n", 0);
            h.z_min = cf.get_double("heuristic", "z_min");
            h.z_max = cf.get_double("heuristic", "z_max");
            h.z_n = cf.get_int("heuristic", "z_n", 0);
            if (h.x_plus_n < 2 || h.z_n < 2)
                throw ConfigError("heuristic.x_plus_n and heuristic.z_n must be at least 2");
            if (h.z_min < 0.0) throw ConfigError("heuristic.z_min must be nonnegative");
            break;
        }
        case RunMode::FitSections: {
            cf.reject_unknown({{"run", kRunKeys},
                               {"output", kOutputKeys},
                               {"fit",
                                {"inputs", "c_list", "cut", "step", "poisson_weights",
                                 "apply_magnification"}}});
            for (const std::string& p : split_paths(cf.get_string("fit", "inputs")))
                rc.inputs.push_back(resolve_relative(cf.origin(), p));
            check_inputs_exist(rc.inputs);
            rc.c_list = sorted_list(cf, "fit", "c_list");
            std::string cut = cf.get_string("fit", "cut", "fixed_sum");
            if (cut == "fixed_sum")
                rc.cut = CutKind::FixedSum;
            else if (cut == "fixed_difference")
                rc.cut = CutKind::FixedDifference;
            else
                throw ConfigError("fit.cut must be 'fixed_sum' or 'fixed_difference'");
            rc.section_step = cf.get_double("fit", "step", 0.0);
            rc.poisson_weights = cf.get_bool("fit", "poisson_weights", false);
            rc.apply_magnification = cf.get_bool("fit", "apply_magnification", false);
            break;
        }
        case RunMode::Postselect: {
            cf.reject_unknown({{"run", kRunKeys},
                               {"output", kOutputKeys},
                               {"postselect", {"input", "c_list", "apply_magnification"}}});
            rc.inputs.push_back(resolve_relative(cf.origin(), cf.get_string("postselect", "input")));
            check_inputs_exist(rc.inputs);
            rc.c_list = sorted_list(cf, "postselect", "c_list");
            rc.apply_magnification = cf.get_bool("postselect", "apply_magnification", false);
            break;
        }
    }
    return rc;
}

}  // namespace walkoff
