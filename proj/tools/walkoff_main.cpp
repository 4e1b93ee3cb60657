#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "walkoff/runner.hpp"

namespace {

struct VerbArgs {
    std::string config;
    std::string out;
    int threads = 0;
};

void add_verb(CLI::App& app, const char* name, const char* desc, walkoff::RunMode mode,
              VerbArgs& args, walkoff::RunMode& selected, bool& have_verb) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", args.config, "run configuration file")->required();
    sub->add_option("--out", args.out, "output directory (overrides output.dir)");
    sub->add_option("--threads", args.threads, "worker thread count (overrides run.threads)")
        ->check(CLI::Range(1, 256));
    sub->callback([mode, &selected, &have_verb] {
        selected = mode;
        have_verb = true;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-photon transverse walk-off simulator and analysis toolkit"};
    app.require_subcommand(0, 1);

    VerbArgs args;
    walkoff::RunMode mode = walkoff::RunMode::WignerSim;
    bool have_verb = false;
    add_verb(app, "simulate-wigner", "phase-space simulation of the joint intensity vs shear",
             walkoff::RunMode::WignerSim, args, mode, have_verb);
    add_verb(app, "simulate-ansatz", "angular-spectrum propagation of the position-space ansatz",
             walkoff::RunMode::AnsatzSim, args, mode, have_verb);
    add_verb(app, "heuristic-map", "closed-form width asymmetry map over (x_+, z)",
             walkoff::RunMode::HeuristicMap, args, mode, have_verb);
    add_verb(app, "fit-sections", "sinc^2 section fits over ingested joint histograms",
             walkoff::RunMode::FitSections, args, mode, have_verb);
    add_verb(app, "postselect", "conditional profiles under x_i = x_s + c post-selection",
             walkoff::RunMode::Postselect, args, mode, have_verb);

    CLI11_PARSE(app, argc, argv);
    if (!have_verb) {
        std::fputs(app.help().c_str(), stdout);
        return 1;
    }

    try {
        walkoff::RunConfig config = walkoff::load_run_config(args.config, mode, args.out, args.threads);
        return walkoff::run(config);
    } catch (const walkoff::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return 1;
    }
}
