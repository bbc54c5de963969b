#pragma once

#include <array>
#include <functional>

#include "stagflow/common.hpp"

namespace stagflow {
namespace oracle {

struct PrimState {
    double rho = 0.0;
    double u = 0.0;
    double p = 0.0;
};

enum class WaveType { shock, rarefaction };

/// Exact solution of the 1D ideal-gas Riemann problem. sample(xi) returns
/// the self-similar state at xi = x/t. Used only by tests and the harness;
/// shares no code with the flow solvers.
class RiemannSolution {
public:
    RiemannSolution(double gamma, PrimState left, PrimState right);

    double star_pressure() const { return p_star_; }
    double star_velocity() const { return u_star_; }
    WaveType left_wave() const { return left_wave_; }
    WaveType right_wave() const { return right_wave_; }

    PrimState sample(double xi) const;
    /// State at position x and time t for the discontinuity placed at x0.
    PrimState sample_at(double x, double t, double x0) const {
        return t > 0.0 ? sample((x - x0) / t) : (x < x0 ? left_ : right_);
    }

private:
    double gamma_;
    PrimState left_, right_;
    double p_star_ = 0.0, u_star_ = 0.0;
    double rho_star_l_ = 0.0, rho_star_r_ = 0.0;
    WaveType left_wave_ = WaveType::shock, right_wave_ = WaveType::shock;
};

RiemannSolution exact_riemann(double gamma, PrimState left, PrimState right);

/// Post-shock state of a shock of Mach number M (relative to the sound speed
/// of the quiescent state rho0) running into fluid at rest, for the
/// barotropic law p = a rho^2. Returns (rho_b, u_b, omega); the state
/// satisfies the Rankine-Hugoniot relations across speed omega exactly.
struct BarotropicShock {
    double rho_b = 0.0;
    double u_b = 0.0;
    double omega = 0.0;
};
BarotropicShock barotropic_shock_state(double a, double rho0, double mach);

/// Same for the ideal-gas Euler system with state (rho0, u=0, p0).
struct EulerShock {
    double rho_b = 0.0;
    double u_b = 0.0;
    double p_b = 0.0;
    double omega = 0.0;
};
EulerShock euler_shock_state(double gamma, double rho0, double p0, double mach);

/// Smooth manufactured fields for the barotropic model: trigonometric
/// bump-modulated density/velocity whose perturbations vanish to second
/// order on the domain boundary, plus the exact residual source terms of
///   d_t rho + div(rho u) = S_mass,
///   d_t(rho u_i) + div(rho u_i u) + d_i p(rho)
///     - div(mu (grad u + grad u^T))_i = S_mom_i,
/// with p = a rho^gamma. All derivatives are coded analytically. A nonzero
/// mu keeps the two staggered velocity families coupled, matching the
/// viscous setting of the reference convergence study.
class ManufacturedSolution {
public:
    struct Params {
        double a = 9.81 / 2.0;
        double gamma = 2.0;
        double mu = 2e-3;          // viscosity compensated by the source (explicit
                                   // diffusion must stay stable at dt = 0.03125 h)
        double rho_mean = 1.0;
        double rho_amp = 0.25;     // must stay below rho_mean
        Vec2 u_amp{0.5, 0.35};
        std::array<int, 2> waves{1, 1}; // spatial periods of the bump envelopes
        double omega_rho = 1.3;    // temporal frequencies
        Vec2 omega_u{1.0, 0.7};
        Vec2 origin{0.0, 0.0};
        Vec2 extent{1.0, 1.0};
    };

    explicit ManufacturedSolution(const Params& p);

    double rho(Vec2 x, double t) const;
    Vec2 velocity(Vec2 x, double t) const;
    double mass_source(Vec2 x, double t) const;
    Vec2 momentum_source(Vec2 x, double t) const;
    /// Pressure-gradient part of the momentum residual (staggered schemes
    /// apply it only to the face-normal component).
    Vec2 pressure_gradient(Vec2 x, double t) const;
    /// momentum_source minus pressure_gradient: temporal + convective +
    /// (compensated) viscous parts.
    Vec2 momentum_source_convective(Vec2 x, double t) const;
    /// div(mu (grad u + grad u^T)) of the exact velocity.
    Vec2 viscous_force(Vec2 x, double t) const;

private:
    struct Derivs {
        double v, dt, dx, dy, dxx, dyy, dxy;
    };
    Derivs rho_d(Vec2 x, double t) const;
    Derivs u_d(int comp, Vec2 x, double t) const;
    Params prm_;
};

} // namespace oracle
} // namespace stagflow
