#include "stagflow/convection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stagflow {

std::string SchemeParams::validate() const {
    if (!(dt > 0.0)) throw ConfigError("SchemeParams: dt must be positive");
    if (nu < 0.0) throw ConfigError("SchemeParams: stabilization viscosity must be >= 0");
    if (xi_plus < 0.0 || xi_plus > 2.0 || xi_minus < 0.0 || xi_minus > 2.0)
        throw ConfigError("SchemeParams: xi+ and xi- must lie in [0, 2]");
    if (scheme == ConvectionScheme::muscl && xi_plus > 1.0)
        return "xi+ > 1 disables the energetic-stability guarantee of the limiter";
    return {};
}

std::vector<double> KineticLedger::s_total() const {
    std::vector<double> out(s1.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = s1[k] + s2[k] + s3[k] + (s_stab.empty() ? 0.0 : s_stab[k]);
    return out;
}

MomentumFaceValues momentum_face_velocity(const Grid& g, const FaceField& u,
                                          const std::vector<double>& dual_flux,
                                          const SchemeParams& params) {
    MomentumFaceValues out;
    const int nd = g.n_dual_faces();
    for (int i = 0; i < g.dim(); ++i) {
        out.value[i].assign(nd, 0.0);
        out.xi_eff[i].assign(nd, 0.0);
    }
    for (int e = 0; e < nd; ++e) {
        const DualFace& df = g.dual_face(e);
        const double flux = dual_flux[e]; // oriented face_a -> face_b
        const int up = flux >= 0.0 ? df.face_a : df.face_b;
        const int down = flux >= 0.0 ? df.face_b : df.face_a;
        const int opp = flux >= 0.0 ? df.opp_a : df.opp_b;
        for (int i = 0; i < g.dim(); ++i) {
            const double u_up = u[i][up];
            const double u_down = u[i][down];
            double val = 0.0;
            switch (params.scheme) {
            case ConvectionScheme::upwind:
                val = u_up;
                break;
            case ConvectionScheme::centered:
                val = 0.5 * (u_up + u_down);
                out.xi_eff[i][e] = 1.0;
                break;
            case ConvectionScheme::muscl: {
                std::optional<double> u_opp;
                if (opp >= 0) u_opp = u[i][opp];
                val = scalar_muscl_face_value(u_up, u_down, u_opp, params.xi_plus,
                                              params.xi_minus, 0.5 * (u_up + u_down));
                const double diff = u_down - u_up;
                const double scale = std::max(std::abs(u_up), std::abs(u_down));
                if (std::abs(diff) > 1e-14 * std::max(scale, 1e-300)) {
                    const double xi = 2.0 * (val - u_up) / diff;
                    out.xi_eff[i][e] = std::clamp(xi, 0.0, params.xi_plus);
                }
                break;
            }
            }
            out.value[i][e] = val;
        }
    }
    return out;
}

FaceField convection_divergence(const Grid& g, const FluxSet& fluxes, const FaceField& u,
                                const MomentumFaceValues& ufv) {
    FaceField out;
    for (int i = 0; i < g.dim(); ++i) out[i].assign(g.n_faces(), 0.0);
    for (int f = 0; f < g.n_faces(); ++f) {
        const Face& face = g.face(f);
        const double inv_measure = 1.0 / g.dual_measure(f);
        for (int i = 0; i < g.dim(); ++i) {
            double acc = 0.0;
            for (const DualIncidence& di : g.face_duals(f))
                acc += di.sign * fluxes.dual[di.dual] * ufv.value[i][di.dual];
            if (!face.internal())
                acc += fluxes.primal_outward(g, f, face.owner()) * u[i][f];
            out[i][f] = acc * inv_measure;
        }
    }
    return out;
}

FaceField transport_update(const Grid& g, const std::vector<double>& rho_d_old,
                           const std::vector<double>& rho_d_new, const FaceField& u,
                           const FaceField& divergence, double dt) {
    FaceField out;
    for (int i = 0; i < g.dim(); ++i) {
        out[i].resize(g.n_faces());
        for (int f = 0; f < g.n_faces(); ++f)
            out[i][f] = (rho_d_old[f] * u[i][f] - dt * divergence[i][f]) / rho_d_new[f];
    }
    return out;
}

FaceField convection_operator(const Grid& g, const std::vector<double>& rho_d_old,
                              const std::vector<double>& rho_d_new, const FaceField& u_old,
                              const FaceField& u_new, const FaceField& divergence, double dt) {
    FaceField out;
    for (int i = 0; i < g.dim(); ++i) {
        out[i].resize(g.n_faces());
        for (int f = 0; f < g.n_faces(); ++f)
            out[i][f] = (rho_d_new[f] * u_new[i][f] - rho_d_old[f] * u_old[i][f]) / dt +
                        divergence[i][f];
    }
    return out;
}

double kinetic_identity_check(const Grid& g, const std::vector<double>& rho_old,
                              const std::vector<double>& rho_new, const FaceField& u_old,
                              const FaceField& u_new, const FluxSet& fluxes,
                              const MomentumFaceValues& ufv, double dt, KineticLedger* ledger,
                              double balance_tol) {
    const double balance = dual_mass_balance_residual(g, fluxes, rho_old, rho_new, dt);
    if (balance > balance_tol)
        throw ConsistencyError("kinetic_identity_check: dual mass balance residual " +
                               std::to_string(balance) + " exceeds " +
                               std::to_string(balance_tol));
    const std::vector<double> rd_old = face_density(g, rho_old);
    const std::vector<double> rd_new = face_density(g, rho_new);

    if (ledger) {
        for (int i = 0; i < g.dim(); ++i) {
            ledger->t_conservative[i].assign(g.n_dual_faces(), 0.0);
            ledger->t_dissipation[i].assign(g.n_dual_faces(), 0.0);
            ledger->xi_eff[i] = ufv.xi_eff[i];
            ledger->r[i].assign(g.n_faces(), 0.0);
        }
        for (int e = 0; e < g.n_dual_faces(); ++e) {
            const DualFace& df = g.dual_face(e);
            const double flux = fluxes.dual[e];
            for (int i = 0; i < g.dim(); ++i) {
                const double du = u_old[i][df.face_a] - u_old[i][df.face_b];
                const double xi = ufv.xi_eff[i][e];
                ledger->t_conservative[i][e] =
                    -0.125 * (1.0 + sqr(1.0 - xi)) * flux * sqr(du);
                ledger->t_dissipation[i][e] = 0.25 * (1.0 - xi) * std::abs(flux) * sqr(du);
            }
        }
    }

    double worst = 0.0;
    for (int f = 0; f < g.n_faces(); ++f) {
        const Face& face = g.face(f);
        if (!face.internal()) continue;
        const double dm = g.dual_measure(f);
        for (int i = 0; i < g.dim(); ++i) {
            const double un = u_old[i][f];
            const double unp = u_new[i][f];
            // Divergence and its companions over the dual faces of D_sigma.
            double div_flux = 0.0;     // sum F u_eps
            double flux_sq = 0.0;      // sum F u_eps^2
            double t_sum = 0.0;        // sum T = -1/2 sum F (u_eps - u_sigma)^2
            double grad_term = 0.0;    // sum F (u_eps - u_sigma)
            for (const DualIncidence& di : g.face_duals(f)) {
                const double flux = di.sign * fluxes.dual[di.dual];
                const double ueps = ufv.value[i][di.dual];
                div_flux += flux * ueps;
                flux_sq += flux * sqr(ueps);
                t_sum += -0.5 * flux * sqr(ueps - un);
                grad_term += flux * (ueps - un);
            }
            const double conv = (rd_new[f] * unp - rd_old[f] * un) / dt + div_flux / dm;
            const double lhs = dm * unp * conv;
            const double kin =
                dm / (2.0 * dt) * (rd_new[f] * sqr(unp) - rd_old[f] * sqr(un));
            const double r_term = dm / (2.0 * dt) * rd_new[f] * sqr(unp - un) +
                                  (unp - un) * grad_term;
            const double rhs = kin + 0.5 * flux_sq + t_sum + r_term;
            const double scale = std::max({std::abs(lhs), std::abs(kin), std::abs(flux_sq),
                                           std::abs(t_sum), std::abs(r_term), 1e-300});
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
            if (ledger) ledger->r[i][f] = r_term;
        }
    }
    return worst;
}

void corrective_terms(const Grid& g, const std::vector<double>& rho_cells,
                      const FaceField& u_old, const FaceField& u_new, const FluxSet& fluxes,
                      const MomentumFaceValues& ufv, double dt, double nu,
                      KineticLedger& ledger) {
    const int nc = g.n_cells();
    ledger.s1.assign(nc, 0.0);
    ledger.s2.assign(nc, 0.0);
    ledger.s3.assign(nc, 0.0);
    ledger.s_stab.assign(nc, 0.0);
    const double hd = g.half_diamond_measure();

    for (int c = 0; c < nc; ++c) {
        const auto cf = g.cell_faces(c);
        double s1 = 0.0;
        for (int k = 0; k < 2 * g.dim(); ++k)
            for (int i = 0; i < g.dim(); ++i)
                s1 += hd * sqr(u_new[i][cf[k]] - u_old[i][cf[k]]);
        ledger.s1[c] = rho_cells[c] / (2.0 * dt) * s1;

        // S2: the velocity-increment/flux cross terms, restricted per face
        // to the dual faces lying inside this cell.
        double s2 = 0.0;
        for (int k = 0; k < 2 * g.dim(); ++k) {
            const int f = cf[k];
            for (int i = 0; i < g.dim(); ++i) {
                const double dui = u_new[i][f] - u_old[i][f];
                double acc = 0.0;
                for (const DualIncidence& di : g.face_duals(f)) {
                    if (g.dual_face(di.dual).cell != c) continue;
                    acc += di.sign * fluxes.dual[di.dual] *
                           (ufv.value[i][di.dual] - u_old[i][f]);
                }
                // The boundary dual face (sigma itself) carries the upwind
                // value u_sigma, so its (u_eps - u_sigma) factor vanishes.
                s2 += dui * acc;
            }
        }
        ledger.s2[c] = s2;

        double s3 = 0.0;
        double s_stab = 0.0;
        for (int k = 0; k < g.duals_per_cell(); ++k) {
            const int e = g.cell_dual_faces(c)[k];
            const DualFace& df = g.dual_face(e);
            for (int i = 0; i < g.dim(); ++i) {
                const double du_old = u_old[i][df.face_a] - u_old[i][df.face_b];
                s3 += 0.5 * (1.0 - ufv.xi_eff[i][e]) * std::abs(fluxes.dual[e]) * sqr(du_old);
                if (nu > 0.0) {
                    const double du_new = u_new[i][df.face_a] - u_new[i][df.face_b];
                    s_stab += nu * du_old * du_new;
                }
            }
        }
        ledger.s3[c] = s3;
        ledger.s_stab[c] = s_stab;
    }
}

FaceField stabilization_term(const Grid& g, const FaceField& u, double nu) {
    FaceField out;
    for (int i = 0; i < g.dim(); ++i) out[i].assign(g.n_faces(), 0.0);
    if (nu == 0.0) return out;
    for (int e = 0; e < g.n_dual_faces(); ++e) {
        const DualFace& df = g.dual_face(e);
        for (int i = 0; i < g.dim(); ++i) {
            const double diff = u[i][df.face_a] - u[i][df.face_b];
            out[i][df.face_a] += nu * diff;
            out[i][df.face_b] -= nu * diff;
        }
    }
    return out;
}

StabilityDiagnostics stability_diagnostics(const Grid& g, const FluxSet& fluxes,
                                           const std::vector<double>& rho_d_old,
                                           const std::vector<double>& rho_d_new,
                                           const std::vector<double>& mu_eps, double dt) {
    StabilityDiagnostics out;
    out.tau = std::numeric_limits<double>::infinity();
    for (int f = 0; f < g.n_faces(); ++f) {
        const Face& face = g.face(f);
        // Dirichlet faces carry no momentum update, hence no cfl constraint.
        if (face.tag == BoundaryTag::dirichlet) continue;
        double abs_flux = 0.0;
        for (const DualIncidence& di : g.face_duals(f))
            abs_flux += std::abs(fluxes.dual[di.dual]);
        if (!face.internal())
            abs_flux += std::abs(fluxes.primal_outward(g, f, face.owner()));
        out.cfl = std::max(out.cfl, dt * abs_flux / (rho_d_old[f] * g.dual_measure(f)));
    }
    const double hk = g.cell_diameter();
    const double geom = std::pow(2.0, 1.0 - g.dim()) * std::pow(hk, g.dim() - 2.0);
    for (int e = 0; e < g.n_dual_faces(); ++e) {
        const DualFace& df = g.dual_face(e);
        const double flux2 = sqr(fluxes.dual[e]);
        if (flux2 == 0.0) continue;
        const double inv_mass = 1.0 / (g.dual_measure(df.face_a) * rho_d_new[df.face_a]) +
                                1.0 / (g.dual_measure(df.face_b) * rho_d_new[df.face_b]);
        out.tau = std::min(out.tau, geom * mu_eps[e] / (flux2 * inv_mass));
    }
    out.eta = std::isinf(out.tau) ? 0.0 : dt / out.tau;
    return out;
}

} // namespace stagflow
