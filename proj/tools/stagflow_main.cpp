#include <CLI11.hpp>
#include <iomanip>
#include <iostream>

#include "stagflow/config.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPositivity = 3;
constexpr int kExitSolver = 4;

struct CommonFlags {
    std::optional<std::string> config, preset;
    std::string output;
    stagflow::harness::Overrides ov;
};

void add_common(CLI::App* app, CommonFlags& fl) {
    app->add_option("--config", fl.config, "case file (key = value with sections)");
    app->add_option("--preset", fl.preset, "named benchmark case");
    app->add_option("--output", fl.output, "directory for CSV outputs");
    app->add_option("--scheme", fl.ov.scheme, "upwind|centered|muscl");
    app->add_option("--xi-plus", fl.ov.xi_plus, "limiter parameter xi+ in [0,2]");
    app->add_option("--xi-minus", fl.ov.xi_minus, "limiter parameter xi- in [0,2]");
    app->add_option("--nu", fl.ov.nu, "artificial viscosity");
    app->add_option("--dt", fl.ov.dt, "time step");
    app->add_option("--final-time", fl.ov.final_time, "final time");
    app->add_option("--snapshots", fl.ov.snapshots, "number of field snapshots");
    app->add_option("--cells", fl.ov.nx, "cells along x (rescales the case)");
}

} // namespace

int main(int argc, char** argv) {
    using namespace stagflow;
    CLI::App app{"staggered-grid MUSCL flow solver suite"};
    app.require_subcommand(1);

    CommonFlags run_fl, conv_fl;
    std::vector<int> levels;
    CLI::App* run = app.add_subcommand("run", "run one benchmark case");
    add_common(run, run_fl);
    CLI::App* conv = app.add_subcommand("converge", "grid-refinement study of one case");
    add_common(conv, conv_fl);
    conv->add_option("--levels", levels, "cell counts, e.g. --levels 32 64 128 256")
        ->expected(-2);
    app.add_subcommand("list-presets", "list the named cases");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (app.got_subcommand("list-presets")) {
            for (const auto& [name, desc] : harness::preset_catalog())
                std::cout << std::left << std::setw(24) << name << desc << "\n";
            return 0;
        }
        if (app.got_subcommand("run")) {
            const harness::Case c = harness::load_case(run_fl.config, run_fl.preset, run_fl.ov);
            harness::RunOptions opts;
            opts.output_dir = run_fl.output;
            const harness::RunReport rep = harness::run_case(c, opts);
            std::cout << std::setprecision(12);
            std::cout << "case " << c.name << ": " << rep.steps << " steps to t="
                      << rep.final_state.time << ", cfl=" << rep.last.cfl << "\n";
            std::cout << "mass " << rep.last.mass << ", kinetic " << rep.last.kinetic_energy
                      << ", internal " << rep.last.internal_energy << "\n";
            for (const auto& [k, v] : rep.l1_error)
                std::cout << "L1 error " << k << " = " << v << "\n";
            if (c.model.model == Model::incompressible && c.dim == 2) {
                std::cout << "streamfunction amplitude " << rep.streamfunction_amplitude
                          << ", primary vortex (" << rep.primary_vortex[0] << ", "
                          << rep.primary_vortex[1] << "), secondary ("
                          << rep.secondary_vortex[0] << ", " << rep.secondary_vortex[1]
                          << ")\n";
            }
            return 0;
        }
        // converge
        const harness::Case c = harness::load_case(conv_fl.config, conv_fl.preset, conv_fl.ov);
        if (levels.empty()) levels = {32, 64, 128, 256};
        harness::RunOptions opts;
        opts.output_dir = conv_fl.output;
        const harness::ConvergenceResult res = harness::convergence_study(c, levels, opts);
        std::cout << std::setprecision(6);
        for (const auto& lvl : res.levels) {
            std::cout << "nx=" << lvl.nx << " h=" << lvl.h;
            for (const auto& [k, v] : lvl.l1) std::cout << "  " << k << "=" << v;
            std::cout << "\n";
        }
        for (const auto& [k, v] : res.order)
            std::cout << "observed order " << k << " = " << v << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PositivityError& e) {
        std::cerr << "positivity failure: " << e.what() << "\n";
        return kExitPositivity;
    } catch (const SolverError& e) {
        std::cerr << "linear solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const ConsistencyError& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return kExitSolver;
    }
}
