#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stagflow/oracle.hpp"
#include "stagflow/solvers.hpp"

namespace stagflow {
namespace harness {

struct ExactSample {
    double rho = 0.0;
    Vec2 u{0.0, 0.0};
    double p = 0.0;
    bool has_pressure = false;
};

/// A fully specified benchmark case. Presets mirror the reference test
/// matrix; config files and CLI flags override the scalar knobs.
struct Case {
    std::string name;
    std::string description;
    int dim = 2;
    std::array<int, 2> cells{8, 8};
    Vec2 origin{0.0, 0.0};
    Vec2 extent{1.0, 1.0};
    BoundaryTags tags;
    ModelConfig model;
    double final_time = 0.0;
    double steady_tol = 0.0;
    int snapshots = 0;
    std::function<State(const FlowSolver&)> initial;
    std::function<ExactSample(Vec2, double)> exact; // optional
    std::function<double(double)> dt_of_h;          // optional refinement rule
    /// Rebuild hook for convergence studies: adapts grid-dependent knobs
    /// (e.g. the stripe height or a grid-scaled nu) to a new resolution.
    std::function<void(Case&, int nx)> rescale;
};

Case make_preset(const std::string& name);
std::vector<std::pair<std::string, std::string>> preset_catalog();

struct RunReport {
    State final_state;
    int steps = 0;
    std::map<std::string, double> l1_error; // vs exact, when available
    StepDiagnostics last;
    double streamfunction_amplitude = 0.0; // incompressible 2D only
    Vec2 primary_vortex{0.0, 0.0};
    Vec2 secondary_vortex{0.0, 0.0};
};

struct RunOptions {
    std::string output_dir; // empty: no files written
    bool identity_check = false;
};

/// Deterministic given the case (fixed summation orders, no wall-clock
/// dependence). Throws ConfigError / PositivityError / SolverError; the CLI
/// maps those to exit codes 2 / 3 / 4.
RunReport run_case(const Case& c, const RunOptions& opts = {});

/// L1 errors of the discrete fields against an exact sampler, measured at
/// primal cell centers (scalars) and face centers (velocity components).
std::map<std::string, double> l1_errors(const Grid& g, const State& s,
                                        const std::function<ExactSample(Vec2, double)>& exact,
                                        double t, const ModelConfig& model);

struct ConvergenceLevel {
    int nx = 0;
    double h = 0.0;
    std::map<std::string, double> l1;
};
struct ConvergenceResult {
    std::vector<ConvergenceLevel> levels;
    std::map<std::string, double> order; // least-squares fit of log err vs log h
};

ConvergenceResult convergence_study(const Case& c, const std::vector<int>& levels,
                                    const RunOptions& opts = {});

/// Position where a cell scalar crosses the midpoint between two plateau
/// values, scanning from the high-x side (front of a right-running wave).
double front_position(const Grid& g, const std::vector<double>& field, double behind,
                      double ahead);

void write_fields_csv(const std::string& path, const Grid& g, const State& s);
void write_orders_csv(const std::string& path, const ConvergenceResult& r);

} // namespace harness
} // namespace stagflow
