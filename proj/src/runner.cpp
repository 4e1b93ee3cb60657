#include "walkoff/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "walkoff/heuristic.hpp"
#include "walkoff/histogram_io.hpp"
#include "walkoff/numeric.hpp"
#include "walkoff/outputs.hpp"
#include "walkoff/spectrum.hpp"
#include "walkoff/wigner.hpp"

namespace walkoff {

namespace {

std::string plane_name(const char* stem, std::size_t idx, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%02zu.%s", stem, idx, ext);
    return buf;
}

void warn(const std::string& msg) { std::fprintf(stderr, "warning: %s\n", msg.c_str()); }

// Block-mean binning keeps huge simulation grids out of the CSV outputs while
// preserving the intensity density scale; incomplete tail blocks are cropped.
RealGrid2D bin_for_output(const RealGrid2D& g, int max_dim) {
    int n_max = std::max(g.axis_a.n, g.axis_b.n);
    if (n_max <= max_dim) return g;
    int d = (n_max + max_dim - 1) / max_dim;
    int na = g.axis_a.n / d, nb = g.axis_b.n / d;
    Axis aa(g.axis_a.min, g.axis_a.min + static_cast<double>(na) * d * g.axis_a.spacing(), na);
    Axis ab(g.axis_b.min, g.axis_b.min + static_cast<double>(nb) * d * g.axis_b.spacing(), nb);
    RealGrid2D out(aa, ab);
    double inv = 1.0 / (static_cast<double>(d) * d);
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b) {
            double s = 0.0;
            for (int da = 0; da < d; ++da)
                for (int db = 0; db < d; ++db) s += g.at(a * d + da, b * d + db);
            out.at(a, b) = s * inv;
        }
    return out;
}

void emit_joint(Manifest& manifest, const RunConfig& config, const char* stem, std::size_t idx,
                const JointIntensity& joint) {
    JointIntensity binned;
    binned.counts = bin_for_output(joint.counts, config.max_csv_dim);
    binned.z = joint.z;
    binned.magnification = joint.magnification;
    emit(manifest, config.out_dir, plane_name(stem, idx, "csv"), render_histogram(binned));
    if (config.heatmaps)
        emit(manifest, config.out_dir, plane_name(stem, idx, "ppm"), render_ppm_heatmap(binned.counts));
}

// The relative-momentum window and the outer grid share one half-width, so
// automatic selection must grow them together.
double choose_coupled_window(const MomentumAmplitude& amp, int m, int n_outer) {
    auto ok = [&](double p) { return window_support_ok(amp, m, p, Axis::symmetric(p, n_outer)); };
    double hi = 0.1;
    int guard = 0;
    while (!ok(hi)) {
        hi *= 1.2;
        if (++guard > 120)
            throw WindowTooSmall("no window up to " + format_double(hi) +
                                 " passes the boundary-support check");
    }
    double lo = guard == 0 ? 0.0 : hi / 1.2;
    for (int it = 0; it < 30 && hi - lo > 1e-3 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= 0.0) break;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    double rounded = std::ceil(hi / 0.1 - 1e-12) * 0.1;
    while (!ok(rounded)) rounded += 0.1;
    return rounded;
}

int run_wigner(const RunConfig& config, Manifest& manifest) {
    ClosedFormAmplitude amp(config.state);
    double window = config.window;
    if (window <= 0.0) {
        window = choose_coupled_window(amp, config.m, config.n_outer);
        warn("automatic window: " + format_double(window));
    }
    Axis p_outer = Axis::symmetric(window, config.n_outer);

    WignerOptions opts;
    opts.enforce_support = config.window_strict;
    opts.interpolation = config.interpolation;
    opts.threads = config.threads;
    if (!config.window_strict) {
        double worst = 0.0;
        if (!window_support_ok(amp, config.m, window, p_outer, &worst))
            warn("window check: boundary product " + format_double(worst) +
                 " of peak exceeds 1e-4; result may be truncated");
    }

    std::vector<Marginal> marginals =
        streamed_position_marginals(amp, config.m, window, p_outer, config.mu_list, opts);
    for (std::size_t i = 0; i < marginals.size(); ++i) {
        const Marginal& marg = marginals[i];
        if (marg.integrity_warning)
            warn(plane_name("joint", i, "csv") + std::string(": clipped negative fraction ") +
                 format_double(marg.clipped_fraction));
        if (marg.shear_warning)
            warn(plane_name("joint", i, "csv") + std::string(": shear moved >90% of mass out of window"));
        JointIntensity joint;
        joint.counts = marg.grid;
        joint.z = config.mu_list[i];
        emit_joint(manifest, config, "joint", i, joint);
    }
    return 0;
}

int run_ansatz(const RunConfig& config, Manifest& manifest) {
    Axis axis = Axis::symmetric(config.ansatz_half_width, config.ansatz_n);
    AnsatzPositionState state = build_ansatz_wavefunction(config.ansatz, axis);
    int failures = 0;
    for (std::size_t i = 0; i < config.z_list.size(); ++i) {
        double z = config.z_list[i];
        try {
            ComplexGrid2D psi = propagate_angular_spectrum(state.grid, PropagationSetting{z, config.k});
            JointIntensity joint;
            joint.counts = joint_intensity(psi);
            joint.z = z;
            emit_joint(manifest, config, "joint", i, joint);
        } catch (const Error& e) {
            warn("plane z = " + format_double(z) + " failed: " + e.what());
            ++failures;
        }
    }
    return failures > 0 ? 2 : 0;
}

int run_heuristic(const RunConfig& config, Manifest& manifest) {
    const auto& h = config.heuristic;
    HeuristicParams params;
    params.w_phi = h.w_phi;
    params.beta = h.beta;
    params.t = h.t;
    params.l = h.l;
    params.k = h.k;
    params.w_p = h.w_p;
    Axis x_axis(h.x_plus_min, h.x_plus_max, h.x_plus_n);
    Axis z_axis(h.z_min, h.z_max, h.z_n);
    RealGrid2D map = asymmetry_map(params, x_axis, z_axis);
    emit(manifest, config.out_dir, "asymmetry.csv",
         render_matrix_csv(map, "x_plus_axis", "z_axis",
                           {{"z_eff", format_double(params.z_eff())}}));
    if (config.heatmaps)
        emit(manifest, config.out_dir, "asymmetry.ppm", render_ppm_heatmap(map));
    return 0;
}

int run_fit(const RunConfig& config, Manifest& manifest) {
    std::vector<JointIntensity> frames;
    frames.reserve(config.inputs.size());
    for (const std::string& path : config.inputs)
        frames.push_back(ingest_histogram(path, config.apply_magnification));

    FitOptions fopts;
    fopts.poisson_weights = config.poisson_weights;
    std::vector<WidthMapRow> rows =
        width_map(frames, config.c_list, config.cut, config.section_step, fopts);

    std::string units = config.units == "physical"
                            ? "units: z, c, width in meters; A in 1/m^2; B dimensionless"
                            : "units: dimensionless";
    emit(manifest, config.out_dir, "sections.csv", render_width_table_csv(rows, units));

    int failures = 0;
    for (const WidthMapRow& r : rows)
        if (r.fit.flags & kFitFailed) ++failures;
    if (failures > 0)
        warn(std::to_string(failures) + " of " + std::to_string(rows.size()) + " cells failed to fit");
    return failures > 0 ? 2 : 0;
}

int run_postselect(const RunConfig& config, Manifest& manifest) {
    JointIntensity joint = ingest_histogram(config.inputs.front(), config.apply_magnification);
    int failures = 0;
    for (std::size_t i = 0; i < config.c_list.size(); ++i) {
        try {
            SectionProfile prof = postselect_profile(joint, config.c_list[i]);
            emit(manifest, config.out_dir, plane_name("postselect", i, "csv"),
                 render_profile_csv(prof, {{"z", format_double(joint.z)}}));
        } catch (const Error& e) {
            warn("post-selection at c = " + format_double(config.c_list[i]) + " failed: " + e.what());
            ++failures;
        }
    }
    return failures > 0 ? 2 : 0;
}

}  // namespace

int run(const RunConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.out_dir + ": " + ec.message());

    Manifest manifest;
    int status = 0;
    switch (config.mode) {
        case RunMode::WignerSim: status = run_wigner(config, manifest); break;
        case RunMode::AnsatzSim: status = run_ansatz(config, manifest); break;
        case RunMode::HeuristicMap: status = run_heuristic(config, manifest); break;
        case RunMode::FitSections: status = run_fit(config, manifest); break;
        case RunMode::Postselect: status = run_postselect(config, manifest); break;
    }
    atomic_write(config.out_dir + "/manifest.txt", manifest.render(config.units, config.config_echo));
    return status;
}

}  // namespace walkoff
