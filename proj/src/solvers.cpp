#include "stagflow/solvers.hpp"

#include <cmath>
#include <iostream>

namespace stagflow {

const SideBC& BoundaryData::side(const Grid& g, int f) const {
    const Face& face = g.face(f);
    if (face.axis == 0) return face.cell_neg < 0 ? x_neg : x_pos;
    return face.cell_neg < 0 ? y_neg : y_pos;
}

void ModelConfig::validate(const Grid& g) const {
    const std::string warn = scheme.validate();
    if (!warn.empty()) std::cerr << "stagflow: warning: " << warn << "\n";
    if (model == Model::incompressible) {
        if (stepping != TimeStepping::forward_euler)
            throw ConfigError("the incompressible model uses the projection scheme only");
        if (!(mu > 0.0)) throw ConfigError("incompressible model requires mu > 0");
    }
    if (model == Model::barotropic && eos.kind != EosKind::barotropic)
        throw ConfigError("barotropic model requires the barotropic EOS");
    if (model == Model::euler && eos.kind != EosKind::ideal_gas)
        throw ConfigError("euler model requires the ideal-gas EOS");
    auto check_side = [&](BoundaryTag tag, const char* name) {
        if (g.dim() == 1 && (tag == BoundaryTag::slip_wall || tag == BoundaryTag::symmetry))
            throw ConfigError(std::string("slip/symmetry boundary '") + name +
                              "' is meaningless in 1D");
    };
    check_side(g.face(g.x_face(0, 0)).tag, "x_neg");
    check_side(g.face(g.x_face(g.nx(), 0)).tag, "x_pos");
}

FlowSolver::FlowSolver(const Grid& g, ModelConfig config)
    : grid_(g), config_(std::move(config)) {
    config_.validate(grid_);
    lagged_s_.assign(grid_.n_cells(), 0.0);
    if (config_.model == Model::incompressible) setup_incompressible();
    else if (config_.mu > 0.0)
        viscous_full_ = assemble_viscous_matrix(grid_, config_.mu, config_.symmetric_gradient);
}

bool FlowSolver::is_pinned(int face, int comp) const {
    switch (grid_.face(face).tag) {
    case BoundaryTag::dirichlet:
        return true;
    case BoundaryTag::slip_wall:
    case BoundaryTag::symmetry:
        return comp == grid_.face(face).axis;
    default:
        return false;
    }
}

void FlowSolver::apply_pinned(State& s, double t) const {
    for (int f = 0; f < grid_.n_faces(); ++f) {
        const Face& face = grid_.face(f);
        if (face.tag == BoundaryTag::none || face.tag == BoundaryTag::neumann_outflow)
            continue;
        if (face.tag == BoundaryTag::dirichlet) {
            const SideBC& bc = config_.bc.side(grid_, f);
            const Vec2 v = bc.velocity ? bc.velocity(face.center, t) : Vec2{0.0, 0.0};
            for (int i = 0; i < grid_.dim(); ++i) s.u[i][f] = v[i];
        } else {
            s.u[face.axis][f] = 0.0; // impermeability
        }
    }
}

std::vector<double> FlowSolver::exterior_rho(double t) const {
    (void)t;
    std::vector<double> out(grid_.n_faces(), 0.0);
    for (int f = 0; f < grid_.n_faces(); ++f)
        if (!grid_.face(f).internal()) out[f] = config_.bc.side(grid_, f).rho_ext;
    return out;
}

std::vector<double> FlowSolver::exterior_e(double t) const {
    (void)t;
    std::vector<double> out(grid_.n_faces(), 0.0);
    for (int f = 0; f < grid_.n_faces(); ++f)
        if (!grid_.face(f).internal()) out[f] = config_.bc.side(grid_, f).e_ext;
    return out;
}

State FlowSolver::make_initial_state() const {
    State s = State::zeros(grid_, config_.model == Model::euler);
    std::fill(s.rho.begin(), s.rho.end(), 1.0);
    if (config_.model != Model::incompressible) {
        for (int c = 0; c < grid_.n_cells(); ++c)
            s.p[c] = eos_pressure(config_.eos, s.rho[c],
                                  config_.model == Model::euler ? s.e[c] : 0.0);
    }
    apply_pinned(s, 0.0);
    return s;
}

State FlowSolver::sample_initial_state(std::function<double(Vec2)> rho,
                                       std::function<Vec2(Vec2)> velocity,
                                       std::function<double(Vec2)> e) const {
    State s = State::zeros(grid_, config_.model == Model::euler);
    for (int c = 0; c < grid_.n_cells(); ++c) {
        s.rho[c] = rho ? rho(grid_.cell_center(c)) : 1.0;
        if (config_.model == Model::euler) {
            s.e[c] = e ? e(grid_.cell_center(c)) : 0.0;
            s.p[c] = eos_pressure(config_.eos, s.rho[c], s.e[c]);
        } else if (config_.model == Model::barotropic) {
            s.p[c] = eos_pressure(config_.eos, s.rho[c]);
        }
    }
    if (velocity) {
        for (int f = 0; f < grid_.n_faces(); ++f) {
            const Vec2 v = velocity(grid_.face(f).center);
            for (int i = 0; i < grid_.dim(); ++i) s.u[i][f] = v[i];
        }
    }
    apply_pinned(s, 0.0);
    s.check_admissible();
    return s;
}

double FlowSolver::coercivity_constant() {
    if (!coercivity_) coercivity_ = measure_coercivity_constant(grid_);
    return *coercivity_;
}

void FlowSolver::record_totals(const State& s) {
    diag_.mass = 0.0;
    diag_.internal_energy = 0.0;
    for (int c = 0; c < grid_.n_cells(); ++c) {
        diag_.mass += grid_.cell_measure() * s.rho[c];
        if (s.has_internal_energy())
            diag_.internal_energy += grid_.cell_measure() * s.rho[c] * s.e[c];
    }
    diag_.kinetic_energy = 0.0;
    const std::vector<double> rd = face_density(grid_, s.rho);
    for (int f = 0; f < grid_.n_faces(); ++f) {
        double u2 = 0.0;
        for (int i = 0; i < grid_.dim(); ++i) u2 += sqr(s.u[i][f]);
        diag_.kinetic_energy += 0.5 * grid_.dual_measure(f) * rd[f] * u2;
    }
    diag_.total_energy = diag_.kinetic_energy + diag_.internal_energy;
}

State FlowSolver::step(const State& s) {
    const double dt = config_.scheme.dt;
    State out;
    if (config_.model == Model::incompressible) {
        out = incompressible_step(s, dt);
    } else if (config_.stepping == TimeStepping::forward_euler) {
        out = compressible_substep(s, dt);
    } else {
        // Heun: two forward-Euler substeps, then the conservative average
        // (rho, rho u) with p (and e) re-derived.
        const State s1 = compressible_substep(s, dt);
        const State s2 = compressible_substep(s1, dt);
        out = State::zeros(grid_, s.has_internal_energy());
        const std::vector<double> rd0 = face_density(grid_, s.rho);
        const std::vector<double> rd2 = face_density(grid_, s2.rho);
        for (int c = 0; c < grid_.n_cells(); ++c) {
            out.rho[c] = 0.5 * (s.rho[c] + s2.rho[c]);
            if (s.has_internal_energy()) {
                out.e[c] = 0.5 * (s.rho[c] * s.e[c] + s2.rho[c] * s2.e[c]) / out.rho[c];
                out.p[c] = eos_pressure(config_.eos, out.rho[c], out.e[c]);
            } else {
                out.p[c] = eos_pressure(config_.eos, out.rho[c]);
            }
        }
        for (int i = 0; i < grid_.dim(); ++i)
            for (int f = 0; f < grid_.n_faces(); ++f)
                out.u[i][f] = (rd0[f] * s.u[i][f] + rd2[f] * s2.u[i][f]) /
                              (rd0[f] + rd2[f]);
        out.time = s.time + dt;
        apply_pinned(out, out.time);
        out.check_admissible();
    }
    diag_.time = out.time;
    diag_.velocity_change = 0.0;
    for (int i = 0; i < grid_.dim(); ++i)
        for (int f = 0; f < grid_.n_faces(); ++f)
            diag_.velocity_change =
                std::max(diag_.velocity_change, std::abs(out.u[i][f] - s.u[i][f]));
    record_totals(out);
    return out;
}

State FlowSolver::compressible_substep(const State& s, double dt) {
    const double t = s.time;
    const double t_new = t + dt;
    const SchemeParams& prm = config_.scheme;
    const bool euler = config_.model == Model::euler;

    const std::vector<double> ext_rho = exterior_rho(t);
    FluxSet fluxes;
    fluxes.primal = primal_mass_flux(grid_, s, config_.mass_scheme, prm.xi_plus, prm.xi_minus,
                                     &ext_rho);
    fluxes.face_density = face_density(grid_, s.rho);

    // Mass balance (explicit), with the manufactured source when present.
    std::vector<double> mass_src;
    if (config_.sources.mass) {
        mass_src.resize(grid_.n_cells());
        for (int c = 0; c < grid_.n_cells(); ++c)
            mass_src[c] = config_.sources.mass(grid_.cell_center(c), t);
    }
    std::vector<double> rho_new(grid_.n_cells());
    double boundary_flux = 0.0;
    for (int c = 0; c < grid_.n_cells(); ++c) {
        const auto cf = grid_.cell_faces(c);
        double div_flux = 0.0;
        for (int k = 0; k < 2 * grid_.dim(); ++k)
            div_flux += fluxes.primal_outward(grid_, cf[k], c);
        rho_new[c] = s.rho[c] - dt / grid_.cell_measure() * div_flux +
                     (mass_src.empty() ? 0.0 : dt * mass_src[c]);
    }
    for (int f = 0; f < grid_.n_faces(); ++f) {
        const Face& face = grid_.face(f);
        if (face.internal()) continue;
        boundary_flux += fluxes.primal_outward(grid_, f, face.owner());
        if (face.tag == BoundaryTag::neumann_outflow && !outflow_warned_ &&
            fluxes.primal_outward(grid_, f, face.owner()) < -1e-12) {
            std::cerr << "stagflow: warning: inflow through an outflow face " << f << "\n";
            outflow_warned_ = true;
        }
    }
    diag_.boundary_mass_flux = dt * boundary_flux;
    for (int c = 0; c < grid_.n_cells(); ++c) {
        if (!(rho_new[c] > 0.0)) {
            StabilityDiagnostics sd{diag_.cfl, diag_.tau, diag_.eta};
            throw PositivityError("density positivity failure in cell " + std::to_string(c) +
                                  " at t=" + std::to_string(t_new) +
                                  " (rho=" + std::to_string(rho_new[c]) +
                                  ", last cfl=" + std::to_string(sd.cfl) + ")");
        }
    }

    fluxes.dual = dual_mass_fluxes(grid_, fluxes.primal, s.rho, rho_new, dt,
                                   mass_src.empty() ? nullptr : &mass_src,
                                   config_.balance_check_tol);
    const MomentumFaceValues ufv = momentum_face_velocity(grid_, s.u, fluxes.dual, prm);
    const FaceField div = convection_divergence(grid_, fluxes, s.u, ufv);

    State out = State::zeros(grid_, euler);
    out.rho = rho_new;
    out.time = t_new;

    const FaceField stab = stabilization_term(grid_, s.u, prm.nu);
    FaceField visc;
    if (config_.mu > 0.0) visc = viscous_apply(grid_, viscous_full_, s.u);
    const std::vector<double>& rd_old = fluxes.face_density;
    const std::vector<double> rd_new = face_density(grid_, rho_new);

    // Pieces of the internal energy balance that do not depend on S_K. The
    // convected face value e_sigma is reconstructed through the conservative
    // variable q = rho e (so F e_sigma = |sigma| u q_sigma): a contact with
    // constant pressure is then transported without pressure wiggles, while
    // the upwind variant coincides with the plain upwind e_sigma.
    std::vector<double> e_explicit;
    if (euler) {
        const std::vector<double> div_u = velocity_divergence(grid_, s.u);
        std::vector<double> un(grid_.n_faces());
        for (int f = 0; f < grid_.n_faces(); ++f) un[f] = s.u[grid_.face(f).axis][f];
        std::vector<double> q(grid_.n_cells());
        for (int c = 0; c < grid_.n_cells(); ++c) q[c] = s.rho[c] * s.e[c];
        std::vector<double> ext_q = exterior_e(t);
        const std::vector<double> ext_rho = exterior_rho(t);
        for (int f = 0; f < grid_.n_faces(); ++f) ext_q[f] *= ext_rho[f];
        const std::vector<double> q_face =
            scalar_face_values(grid_, q, un, config_.energy_scheme, prm.xi_plus,
                               prm.xi_minus, &ext_q);
        e_explicit.resize(grid_.n_cells());
        for (int c = 0; c < grid_.n_cells(); ++c) {
            const auto cf = grid_.cell_faces(c);
            double conv = 0.0;
            for (int k = 0; k < 2 * grid_.dim(); ++k) {
                const Face& face = grid_.face(cf[k]);
                conv += face.measure * face.normal_sign(c) * un[cf[k]] * q_face[cf[k]];
            }
            e_explicit[c] = s.rho[c] * s.e[c] +
                            dt * (-conv / grid_.cell_measure() - s.p[c] * div_u[c]);
        }
    }

    auto update_energy = [&](const std::vector<double>& s_k) {
        for (int c = 0; c < grid_.n_cells(); ++c) {
            out.e[c] = (e_explicit[c] +
                        (config_.euler_correction ? dt * s_k[c] / grid_.cell_measure()
                                                  : 0.0)) /
                       rho_new[c];
            if (out.e[c] < 0.0)
                throw PositivityError("internal energy positivity failure in cell " +
                                      std::to_string(c) + " at t=" + std::to_string(t_new) +
                                      " (e=" + std::to_string(out.e[c]) + ")");
            out.p[c] = eos_pressure(config_.eos, rho_new[c], out.e[c]);
        }
    };
    auto update_momentum = [&]() {
        // Explicit convection and diffusion; the pressure gradient is
        // explicit for the barotropic model and end-of-step for Euler.
        const FaceField gradp = pressure_gradient(grid_, euler ? out.p : s.p);
        for (int f = 0; f < grid_.n_faces(); ++f) {
            const Face& face = grid_.face(f);
            const Vec2 x = face.center;
            for (int i = 0; i < grid_.dim(); ++i) {
                if (is_pinned(f, i)) continue; // set below by apply_pinned
                double rhs = -div[i][f] - gradp[i][f] - stab[i][f];
                if (config_.mu > 0.0) rhs -= visc[i][f] / grid_.dual_measure(f);
                if (config_.sources.momentum) rhs += config_.sources.momentum(x, t)[i];
                // The discrete gradient concentrates the pressure force on
                // the face-normal components with weight |K|/|D_sigma| = d.
                if (config_.sources.momentum_pressure && i == face.axis)
                    rhs += grid_.dim() * config_.sources.momentum_pressure(x, t)[i];
                out.u[i][f] = (rd_old[f] * s.u[i][f] + dt * rhs) / rd_new[f];
            }
        }
        apply_pinned(out, t_new);
    };

    if (!euler) {
        for (int c = 0; c < grid_.n_cells(); ++c)
            out.p[c] = eos_pressure(config_.eos, rho_new[c]);
        update_momentum();
        corrective_terms(grid_, rho_new, s.u, out.u, fluxes, ufv, dt, prm.nu, ledger_);
    } else {
        // The corrective terms use the stage-local velocity increment, which
        // feeds back through e -> p -> u: a short fixed-point resolves the
        // coupling (the previous transition's S_K is the initial guess; the
        // update contracts at O(dt^2)).
        std::vector<double> s_k = lagged_s_;
        for (int pass = 0; pass < 3; ++pass) {
            update_energy(s_k);
            update_momentum();
            if (!config_.euler_correction) break;
            corrective_terms(grid_, rho_new, s.u, out.u, fluxes, ufv, dt, prm.nu, ledger_);
            s_k = ledger_.s_total();
        }
        if (!config_.euler_correction)
            corrective_terms(grid_, rho_new, s.u, out.u, fluxes, ufv, dt, prm.nu, ledger_);
    }
    lagged_s_ = ledger_.s_total();
    diag_.sum_s = 0.0;
    for (double v : lagged_s_) diag_.sum_s += v;

    // mu entering tau^n: physical viscosity through the measured coercivity
    // constant, plus the graph viscosity rescaled to the h^{d-2} convention.
    double mu_eps_val = 0.0;
    if (config_.mu > 0.0) mu_eps_val += config_.mu * coercivity_constant();
    if (prm.nu > 0.0)
        mu_eps_val += prm.nu * std::pow(grid_.cell_diameter(), 2.0 - grid_.dim());
    const std::vector<double> mu_eps(grid_.n_dual_faces(), mu_eps_val);
    const StabilityDiagnostics sd =
        stability_diagnostics(grid_, fluxes, rd_old, rd_new, mu_eps, dt);
    diag_.cfl = sd.cfl;
    diag_.tau = sd.tau;
    diag_.eta = sd.eta;

    if (check_identity_ && mass_src.empty()) {
        diag_.identity_residual = kinetic_identity_check(grid_, s.rho, rho_new, s.u, out.u,
                                                         fluxes, ufv, dt, nullptr, 1e-9);
    }
    out.check_admissible();
    return out;
}

void FlowSolver::setup_incompressible() {
    viscous_full_ = assemble_viscous_matrix(grid_, config_.mu, config_.symmetric_gradient);
    const int nf = grid_.n_faces();
    dof_id_.assign(static_cast<std::size_t>(grid_.dim()) * nf, -1);
    n_free_ = 0;
    for (int i = 0; i < grid_.dim(); ++i)
        for (int f = 0; f < nf; ++f)
            if (!is_pinned(f, i)) dof_id_[dof_of(grid_, f, i)] = n_free_++;

    // Prediction operator: M/dt + viscous form, restricted to free unknowns.
    std::vector<Eigen::Triplet<double>> tp;
    for (int k = 0; k < viscous_full_.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(viscous_full_, k); it; ++it) {
            const int r = dof_id_[it.row()];
            const int c = dof_id_[it.col()];
            if (r >= 0 && c >= 0) tp.emplace_back(r, c, it.value());
        }
    for (int i = 0; i < grid_.dim(); ++i)
        for (int f = 0; f < nf; ++f) {
            const int id = dof_id_[dof_of(grid_, f, i)];
            if (id >= 0)
                tp.emplace_back(id, id, grid_.dual_measure(f) / config_.scheme.dt);
        }
    Eigen::SparseMatrix<double> pred(n_free_, n_free_);
    pred.setFromTriplets(tp.begin(), tp.end());
    prediction_.setup(pred, config_.linear);
    pred_guess_ = Eigen::VectorXd::Zero(n_free_);

    // Pressure operator from the grad-div duality pair; a Dirichlet ghost
    // (phi = 0) closes outflow faces, and one cell is pinned otherwise.
    has_outflow_ = false;
    for (const Face& face : grid_.faces())
        if (face.tag == BoundaryTag::neumann_outflow) has_outflow_ = true;
    cell_id_.assign(grid_.n_cells(), -1);
    int np = 0;
    for (int c = 0; c < grid_.n_cells(); ++c) {
        if (!has_outflow_ && c == 0) continue;
        cell_id_[c] = np++;
    }
    std::vector<Eigen::Triplet<double>> tq;
    for (int f = 0; f < nf; ++f) {
        const Face& face = grid_.face(f);
        const double coef = sqr(face.measure) / grid_.dual_measure(f);
        if (face.internal()) {
            const int a = cell_id_[face.cell_neg];
            const int b = cell_id_[face.cell_pos];
            if (a >= 0) tq.emplace_back(a, a, coef);
            if (b >= 0) tq.emplace_back(b, b, coef);
            if (a >= 0 && b >= 0) {
                tq.emplace_back(a, b, -coef);
                tq.emplace_back(b, a, -coef);
            }
        } else if (face.tag == BoundaryTag::neumann_outflow) {
            const int a = cell_id_[face.owner()];
            if (a >= 0) tq.emplace_back(a, a, coef);
        }
    }
    Eigen::SparseMatrix<double> press(np, np);
    press.setFromTriplets(tq.begin(), tq.end());
    pressure_.setup(press, config_.linear);
    press_guess_ = Eigen::VectorXd::Zero(np);
}

State FlowSolver::incompressible_step(const State& s, double dt) {
    const double t_new = s.time + dt;
    const SchemeParams& prm = config_.scheme;
    FluxSet fluxes;
    fluxes.primal.resize(grid_.n_faces());
    for (int f = 0; f < grid_.n_faces(); ++f)
        fluxes.primal[f] = grid_.face(f).measure * s.u[grid_.face(f).axis][f];
    fluxes.face_density.assign(grid_.n_faces(), 1.0);
    const std::vector<double> ones(grid_.n_cells(), 1.0);
    fluxes.dual = dual_mass_fluxes(grid_, fluxes.primal, ones, ones, dt, nullptr,
                                   config_.balance_check_tol);
    const MomentumFaceValues ufv = momentum_face_velocity(grid_, s.u, fluxes.dual, prm);
    const FaceField div = convection_divergence(grid_, fluxes, s.u, ufv);
    const FaceField gradp = pressure_gradient(grid_, s.p);

    // Prediction: solve (M/dt + A) u~ = M (u/dt - div - grad p + f) - A_pinned u_bc.
    State out = State::zeros(grid_, false);
    out.rho = s.rho;
    out.time = t_new;
    apply_pinned(out, t_new);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n_free_);
    for (int i = 0; i < grid_.dim(); ++i)
        for (int f = 0; f < grid_.n_faces(); ++f) {
            const int id = dof_id_[dof_of(grid_, f, i)];
            if (id < 0) continue;
            double rhs = s.u[i][f] / dt - div[i][f] - gradp[i][f];
            if (config_.sources.momentum)
                rhs += config_.sources.momentum(grid_.face(f).center, s.time)[i];
            if (config_.sources.momentum_pressure && i == grid_.face(f).axis)
                rhs += grid_.dim() *
                       config_.sources.momentum_pressure(grid_.face(f).center, s.time)[i];
            b[id] = grid_.dual_measure(f) * rhs;
        }
    for (int k = 0; k < viscous_full_.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(viscous_full_, k); it; ++it) {
            const int r = dof_id_[it.row()];
            if (r < 0 || dof_id_[it.col()] >= 0) continue;
            const int f = static_cast<int>(it.col()) % grid_.n_faces();
            const int i = static_cast<int>(it.col()) / grid_.n_faces();
            b[r] -= it.value() * out.u[i][f];
        }
    const LinearSolveResult pres = prediction_.solve(b, pred_guess_);
    diag_.linear_iterations = pres.iterations;
    for (int i = 0; i < grid_.dim(); ++i)
        for (int f = 0; f < grid_.n_faces(); ++f) {
            const int id = dof_id_[dof_of(grid_, f, i)];
            if (id >= 0) out.u[i][f] = pred_guess_[id];
        }

    // Correction: Q phi = -|K| div(u~)/dt, then u -= dt grad phi, p += phi.
    const std::vector<double> div_tilde = velocity_divergence(grid_, out.u);
    Eigen::VectorXd bp = Eigen::VectorXd::Zero(press_guess_.size());
    for (int c = 0; c < grid_.n_cells(); ++c)
        if (cell_id_[c] >= 0)
            bp[cell_id_[c]] = -grid_.cell_measure() * div_tilde[c] / dt;
    const LinearSolveResult cres = pressure_.solve(bp, press_guess_);
    diag_.linear_iterations += cres.iterations;
    std::vector<double> phi(grid_.n_cells(), 0.0);
    for (int c = 0; c < grid_.n_cells(); ++c)
        if (cell_id_[c] >= 0) phi[c] = press_guess_[cell_id_[c]];
    for (int f = 0; f < grid_.n_faces(); ++f) {
        const Face& face = grid_.face(f);
        const double coef = face.measure / grid_.dual_measure(f);
        if (face.internal()) {
            out.u[face.axis][f] -= dt * coef * (phi[face.cell_pos] - phi[face.cell_neg]);
        } else if (face.tag == BoundaryTag::neumann_outflow) {
            const double ghost_grad =
                face.cell_neg < 0 ? phi[face.cell_pos] : -phi[face.cell_neg];
            out.u[face.axis][f] -= dt * coef * ghost_grad;
        }
    }
    for (int c = 0; c < grid_.n_cells(); ++c) out.p[c] = s.p[c] + phi[c];

    const std::vector<double> div_new = velocity_divergence(grid_, out.u);
    diag_.max_divergence = 0.0;
    for (double v : div_new) diag_.max_divergence = std::max(diag_.max_divergence, std::abs(v));

    corrective_terms(grid_, ones, s.u, out.u, fluxes, ufv, dt, prm.nu, ledger_);
    lagged_s_ = ledger_.s_total();
    diag_.sum_s = 0.0;
    for (double v : lagged_s_) diag_.sum_s += v;
    std::vector<double> mu_eps(grid_.n_dual_faces(),
                               config_.mu * (coercivity_ ? *coercivity_ : 1.0));
    const StabilityDiagnostics sd =
        stability_diagnostics(grid_, fluxes, fluxes.face_density, fluxes.face_density, mu_eps, dt);
    diag_.cfl = sd.cfl;
    diag_.tau = sd.tau;
    diag_.eta = sd.eta;
    diag_.boundary_mass_flux = 0.0;
    return out;
}

State FlowSolver::substep(const State& s, double dt) { return compressible_substep(s, dt); }

State run_to_time(FlowSolver& solver, State s, const RunControls& rc) {
    const double dt = solver.config().scheme.dt;
    const double t_end = rc.final_time - 0.5 * dt;
    while (s.time < t_end) {
        State next = solver.step(s);
        if (rc.on_step) rc.on_step(next, solver.diagnostics());
        const bool steady =
            rc.steady_tol > 0.0 && solver.diagnostics().velocity_change <= rc.steady_tol;
        s = std::move(next);
        if (steady) break;
    }
    return s;
}

} // namespace stagflow
