#pragma once

#include <array>
#include <string>
#include <vector>

#include "stagflow/fluxes.hpp"
#include "stagflow/grid.hpp"

namespace stagflow {

/// Numerical parameters of the momentum convection operator.
/// xi_plus = xi_minus = 0 on the muscl path reproduces the upwind scheme;
/// centered bypasses the limitation entirely.
struct SchemeParams {
    ConvectionScheme scheme = ConvectionScheme::muscl;
    double xi_plus = 1.0;
    double xi_minus = 1.0;
    double nu = 0.0; // artificial (graph) viscosity, per unit volume
    double dt = 0.0;

    /// Throws on invalid ranges; returns a warning string for accepted but
    /// discouraged choices (xi > 1), empty otherwise.
    std::string validate() const;
};

using FaceField = std::array<std::vector<double>, 2>; // per face, per component

/// MUSCL/upwind/centered velocity values at the interior dual faces, plus
/// the effective limiter coefficient recovered from
///   u_eps = (1 - xi/2) u_upwind + (xi/2) u_downwind.
struct MomentumFaceValues {
    std::array<std::vector<double>, 2> value;   // per dual face, per component
    std::array<std::vector<double>, 2> xi_eff;  // in [0, xi_plus]
};

MomentumFaceValues momentum_face_velocity(const Grid& g, const FaceField& u,
                                          const std::vector<double>& dual_flux,
                                          const SchemeParams& params);

/// div(rho u_i u)_sigma = (1/|D_sigma|) sum_eps F_{sigma,eps} u_{eps,i}.
/// At a boundary face the dual face sigma itself carries the primal flux and
/// the upwind value u_{sigma,i} (Dirichlet faces carry their prescribed value,
/// which coincides with the same expression).
FaceField convection_divergence(const Grid& g, const FluxSet& fluxes, const FaceField& u,
                                const MomentumFaceValues& ufv);

/// ubar of the transport recast:
///   ubar = (rho_D^n u^n - dt * div(rho u_i u)) / rho_D^{n+1}.
FaceField transport_update(const Grid& g, const std::vector<double>& rho_d_old,
                           const std::vector<double>& rho_d_new, const FaceField& u,
                           const FaceField& divergence, double dt);

/// Assembled operator C = (rho_D^{n+1} u^{n+1} - rho_D^n u^n)/dt + divergence.
FaceField convection_operator(const Grid& g, const std::vector<double>& rho_d_old,
                              const std::vector<double>& rho_d_new, const FaceField& u_old,
                              const FaceField& u_new, const FaceField& divergence, double dt);

/// Remainder bookkeeping of the kinetic energy identity. T is stored per
/// interior dual face through its exact decomposition
///   T_{a,eps} = cons + diss,  T_{b,eps} = -cons + diss,
///   cons = -(1/8)(1+(1-xi)^2) F (u_a-u_b)^2,  diss = (1/4)(1-xi)|F|(u_a-u_b)^2,
/// which is conservative plus a dissipation, nonnegative when xi in [0,1].
struct KineticLedger {
    std::array<std::vector<double>, 2> t_conservative; // per dual face (oriented with face_a)
    std::array<std::vector<double>, 2> t_dissipation;  // per dual face
    std::array<std::vector<double>, 2> xi_eff;         // per dual face
    std::array<std::vector<double>, 2> r;              // per face
    std::vector<double> s1, s2, s3, s_stab;            // per cell

    std::vector<double> s_total() const;
};

/// Verifies the identity
///   |D| u^{n+1} C = (|D|/2dt)(rho^{n+1}(u^{n+1})^2 - rho^n(u^n)^2)
///                   + (1/2) sum F u_eps^2 + sum T + R
/// on every internal face and component; returns the max residual relative
/// to the local kinetic-energy scale and fills the T/R/xi parts of the
/// ledger. Refuses (ConsistencyError) if the dual mass balance does not hold.
double kinetic_identity_check(const Grid& g, const std::vector<double>& rho_old,
                              const std::vector<double>& rho_new, const FaceField& u_old,
                              const FaceField& u_new, const FluxSet& fluxes,
                              const MomentumFaceValues& ufv, double dt, KineticLedger* ledger,
                              double balance_tol = 1e-11);

/// Fills S1..S3 (and the stabilization dissipation when nu > 0):
///   S1_K = rho_K/(2 dt) sum_{sigma in E(K)} |D_{K,sigma}| |u^{n+1}_sigma - u^n_sigma|^2
///   S2_K = sum_i sum_{sigma in E(K)} (u^{n+1}-u^n) sum_{eps in D_sigma cap K} F (u_eps - u^n_sigma)
///   S3_K = sum_i sum_{eps in K} (1/2)(1-xi)|F|(u_a-u_b)^2
/// rho_cells is the density at the end of the momentum transition.
void corrective_terms(const Grid& g, const std::vector<double>& rho_cells,
                      const FaceField& u_old, const FaceField& u_new, const FluxSet& fluxes,
                      const MomentumFaceValues& ufv, double dt, double nu,
                      KineticLedger& ledger);

/// Graph Laplacian over the dual adjacency:
///   T_dif(sigma, i) = sum_{eps = D_sigma|D_sigma'} nu (u_{sigma,i} - u_{sigma',i}).
FaceField stabilization_term(const Grid& g, const FaceField& u, double nu);

struct StabilityDiagnostics {
    double cfl = 0.0;
    double tau = 0.0; // +inf when no dual flux is active
    double eta = 0.0; // dt / tau
};

/// cfl = max_sigma dt/(rho_D^n |D_sigma|) sum_eps |F_{sigma,eps}| and the
/// time-step bound tau^n of the stability theorem (which uses rho_D^{n+1}).
/// mu_eps is the per-dual-face diffusion entering the coercivity bound.
StabilityDiagnostics stability_diagnostics(const Grid& g, const FluxSet& fluxes,
                                           const std::vector<double>& rho_d_old,
                                           const std::vector<double>& rho_d_new,
                                           const std::vector<double>& mu_eps, double dt);

} // namespace stagflow
