#pragma once

#include <functional>
#include <optional>
#include <string>

#include "stagflow/convection.hpp"
#include "stagflow/linsolve.hpp"
#include "stagflow/operators.hpp"
#include "stagflow/state.hpp"

namespace stagflow {

enum class Model { incompressible, barotropic, euler };
enum class TimeStepping { forward_euler, heun };

/// Boundary data for one tagged side. Dirichlet sides prescribe the face
/// velocity (and, for compressible models, the exterior state used by the
/// inflow convective fluxes).
struct SideBC {
    std::function<Vec2(Vec2, double)> velocity; // defaults to zero
    double rho_ext = 0.0;
    double e_ext = 0.0;
};

struct BoundaryData {
    SideBC x_neg, x_pos, y_neg, y_pos;
    const SideBC& side(const Grid& g, int f) const;
};

/// Optional manufactured source terms of the continuous balances. The
/// momentum residual is split: the discrete pressure gradient only acts on
/// the face-normal component, so the pressure part of the source does too.
struct SourceTerms {
    std::function<double(Vec2, double)> mass;
    std::function<Vec2(Vec2, double)> momentum;          // temporal + convective part
    std::function<Vec2(Vec2, double)> momentum_pressure; // grad p of the exact field
};

struct ModelConfig {
    Model model = Model::barotropic;
    TimeStepping stepping = TimeStepping::forward_euler;
    Eos eos = Eos::incompressible();
    double mu = 0.0; // physical viscosity
    SchemeParams scheme;
    ConvectionScheme mass_scheme = ConvectionScheme::muscl;   // face densities
    ConvectionScheme energy_scheme = ConvectionScheme::muscl; // face internal energies
    bool euler_correction = true; // corrective terms S_K in the energy balance
    bool symmetric_gradient = true;
    BoundaryData bc;
    SourceTerms sources;
    LinearSolverConfig linear;
    double balance_check_tol = 1e-9; // primal-balance guard for the dual fluxes

    void validate(const Grid& g) const;
};

struct StepDiagnostics {
    double time = 0.0;
    double cfl = 0.0;
    double tau = 0.0;
    double eta = 0.0;
    double mass = 0.0;
    double kinetic_energy = 0.0;
    double internal_energy = 0.0;
    double total_energy = 0.0;
    double identity_residual = 0.0; // filled when the check is enabled
    double sum_s = 0.0;             // corrective terms of the last transition
    double boundary_mass_flux = 0.0; // outward, integrated over the step
    double max_divergence = 0.0;     // incompressible only
    int linear_iterations = 0;
    double velocity_change = 0.0;    // max |u^{n+1}-u^n|
};

/// One solver instance owns the per-run workspace: assembled implicit
/// operators, the lagged kinetic ledger of the Euler correction, and
/// cumulative conservation tallies. One step maps an immutable state to a
/// fresh one; the orchestration loop is sequential.
class FlowSolver {
public:
    FlowSolver(const Grid& g, ModelConfig config);

    State make_initial_state() const; // rest state matching the model
    /// Projects cell scalars / face velocities from samplers.
    State sample_initial_state(std::function<double(Vec2)> rho,
                               std::function<Vec2(Vec2)> velocity,
                               std::function<double(Vec2)> e = {}) const;

    State step(const State& s);
    const StepDiagnostics& diagnostics() const { return diag_; }
    const Grid& grid() const { return grid_; }
    const ModelConfig& config() const { return config_; }

    /// Enables the per-step kinetic-identity residual in the diagnostics
    /// (costs one extra pass; meaningful for the compressible models).
    void set_identity_check(bool on) { check_identity_ = on; }
    /// Measured coercivity constant used for tau^n (lazy; scalar Laplacian).
    double coercivity_constant();

    /// True where the component is pinned by the boundary conditions.
    bool is_pinned(int face, int comp) const;
    const KineticLedger& last_ledger() const { return ledger_; }

private:
    State substep(const State& s, double dt);
    State incompressible_step(const State& s, double dt);
    State compressible_substep(const State& s, double dt);
    void apply_pinned(State& s, double t) const;
    std::vector<double> exterior_rho(double t) const;
    std::vector<double> exterior_e(double t) const;
    void setup_incompressible();
    void record_totals(const State& s);

    const Grid& grid_;
    ModelConfig config_;
    StepDiagnostics diag_;
    KineticLedger ledger_;            // of the most recent momentum transition
    std::vector<double> lagged_s_;    // S_K fed to the next energy update
    bool check_identity_ = false;
    bool outflow_warned_ = false;
    std::optional<double> coercivity_;

    // incompressible workspace
    Eigen::SparseMatrix<double> viscous_full_;
    SpdSolver prediction_;
    SpdSolver pressure_;
    std::vector<int> dof_id_;      // (face, comp) -> free unknown or -1
    std::vector<int> cell_id_;     // cell -> pressure unknown (pinned cell -1)
    Eigen::VectorXd pred_guess_, press_guess_;
    int n_free_ = 0;
    bool has_outflow_ = false;
};

/// Euler loop helper: advances until final_time (and optionally a steady
/// criterion), invoking the callback after every step.
struct RunControls {
    double final_time = 0.0;
    double steady_tol = 0.0; // 0 = disabled
    std::function<void(const State&, const StepDiagnostics&)> on_step;
};
State run_to_time(FlowSolver& solver, State s, const RunControls& rc);

} // namespace stagflow
