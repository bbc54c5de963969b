#include "stagflow/oracle.hpp"

#include <cmath>

namespace stagflow {
namespace oracle {

namespace {

struct SideFn {
    double gamma;
    PrimState w;
    double a; // sound speed

    // Toro's pressure function and its derivative for one side.
    double f(double p) const {
        if (p > w.p) {
            const double A = 2.0 / ((gamma + 1.0) * w.rho);
            const double B = (gamma - 1.0) / (gamma + 1.0) * w.p;
            return (p - w.p) * std::sqrt(A / (p + B));
        }
        return 2.0 * a / (gamma - 1.0) *
               (std::pow(p / w.p, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
    }
    double df(double p) const {
        if (p > w.p) {
            const double A = 2.0 / ((gamma + 1.0) * w.rho);
            const double B = (gamma - 1.0) / (gamma + 1.0) * w.p;
            return std::sqrt(A / (p + B)) * (1.0 - 0.5 * (p - w.p) / (p + B));
        }
        return std::pow(p / w.p, -(gamma + 1.0) / (2.0 * gamma)) / (w.rho * a);
    }
};

} // namespace

RiemannSolution::RiemannSolution(double gamma, PrimState left, PrimState right)
    : gamma_(gamma), left_(left), right_(right) {
    if (!(left.rho > 0.0 && right.rho > 0.0 && left.p > 0.0 && right.p > 0.0))
        throw std::domain_error("exact_riemann: densities and pressures must be positive");
    const SideFn l{gamma, left, std::sqrt(gamma * left.p / left.rho)};
    const SideFn r{gamma, right, std::sqrt(gamma * right.p / right.rho)};
    const double du = right.u - left.u;
    if (2.0 * (l.a + r.a) / (gamma - 1.0) <= du)
        throw std::domain_error("exact_riemann: initial data generate vacuum");

    // PVRS guess, then safeguarded Newton on f_L + f_R + du = 0.
    double p = 0.5 * (left.p + right.p) -
               0.125 * du * (left.rho + right.rho) * (l.a + r.a);
    p = std::max(p, 1e-10 * std::min(left.p, right.p));
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const double g = l.f(p) + r.f(p) + du;
        if (g > 0.0) hi = std::min(hi, p);
        else lo = std::max(lo, p);
        const double dg = l.df(p) + r.df(p);
        double pn = p - g / dg;
        if (!(pn > lo) || !(pn < hi))
            pn = std::isinf(hi) ? 2.0 * p : 0.5 * (lo + hi);
        const bool done = std::abs(pn - p) <= 1e-13 * pn;
        p = pn;
        if (done) break;
    }
    p_star_ = p;
    u_star_ = 0.5 * (left.u + right.u) + 0.5 * (r.f(p) - l.f(p));

    const double g6 = (gamma - 1.0) / (gamma + 1.0);
    left_wave_ = p_star_ > left.p ? WaveType::shock : WaveType::rarefaction;
    right_wave_ = p_star_ > right.p ? WaveType::shock : WaveType::rarefaction;
    rho_star_l_ = left_wave_ == WaveType::shock
                      ? left.rho * (p_star_ / left.p + g6) / (g6 * p_star_ / left.p + 1.0)
                      : left.rho * std::pow(p_star_ / left.p, 1.0 / gamma);
    rho_star_r_ = right_wave_ == WaveType::shock
                      ? right.rho * (p_star_ / right.p + g6) / (g6 * p_star_ / right.p + 1.0)
                      : right.rho * std::pow(p_star_ / right.p, 1.0 / gamma);
}

PrimState RiemannSolution::sample(double xi) const {
    const double g = gamma_;
    if (xi <= u_star_) {
        const double a_l = std::sqrt(g * left_.p / left_.rho);
        if (left_wave_ == WaveType::shock) {
            const double s =
                left_.u - a_l * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / left_.p +
                                          (g - 1.0) / (2.0 * g));
            return xi < s ? left_ : PrimState{rho_star_l_, u_star_, p_star_};
        }
        const double head = left_.u - a_l;
        const double a_sl = a_l * std::pow(p_star_ / left_.p, (g - 1.0) / (2.0 * g));
        const double tail = u_star_ - a_sl;
        if (xi < head) return left_;
        if (xi > tail) return {rho_star_l_, u_star_, p_star_};
        const double c = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * a_l) * (left_.u - xi);
        return {left_.rho * std::pow(c, 2.0 / (g - 1.0)),
                2.0 / (g + 1.0) * (a_l + 0.5 * (g - 1.0) * left_.u + xi),
                left_.p * std::pow(c, 2.0 * g / (g - 1.0))};
    }
    const double a_r = std::sqrt(g * right_.p / right_.rho);
    if (right_wave_ == WaveType::shock) {
        const double s = right_.u + a_r * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / right_.p +
                                                    (g - 1.0) / (2.0 * g));
        return xi > s ? right_ : PrimState{rho_star_r_, u_star_, p_star_};
    }
    const double head = right_.u + a_r;
    const double a_sr = a_r * std::pow(p_star_ / right_.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star_ + a_sr;
    if (xi > head) return right_;
    if (xi < tail) return {rho_star_r_, u_star_, p_star_};
    const double c = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * a_r) * (right_.u - xi);
    return {right_.rho * std::pow(c, 2.0 / (g - 1.0)),
            2.0 / (g + 1.0) * (-a_r + 0.5 * (g - 1.0) * right_.u + xi),
            right_.p * std::pow(c, 2.0 * g / (g - 1.0))};
}

RiemannSolution exact_riemann(double gamma, PrimState left, PrimState right) {
    return RiemannSolution(gamma, left, right);
}

BarotropicShock barotropic_shock_state(double a, double rho0, double mach) {
    if (mach < 1.0)
        throw std::domain_error("barotropic_shock_state: M >= 1 required for a shock");
    const double c0 = std::sqrt(2.0 * a * rho0);
    BarotropicShock s;
    s.omega = mach * c0;
    // RH across a right-running shock into rest: rho_b/rho0 solves
    // r(r+1)/2 = M^2, i.e. r = (sqrt(1+8M^2)-1)/2.
    const double ratio = 0.5 * (std::sqrt(1.0 + 8.0 * mach * mach) - 1.0);
    s.rho_b = rho0 * ratio;
    s.u_b = s.omega * (1.0 - 1.0 / ratio);
    return s;
}

EulerShock euler_shock_state(double gamma, double rho0, double p0, double mach) {
    if (mach < 1.0)
        throw std::domain_error("euler_shock_state: M >= 1 required for a shock");
    EulerShock s;
    s.omega = mach * std::sqrt(gamma * p0 / rho0);
    s.rho_b = (gamma + 1.0) / (gamma - 1.0 + 2.0 / (mach * mach)) * rho0;
    s.u_b = s.omega * (1.0 - rho0 / s.rho_b);
    s.p_b = p0 + s.omega * s.omega * (1.0 - rho0 / s.rho_b) * rho0;
    return s;
}

ManufacturedSolution::ManufacturedSolution(const Params& p) : prm_(p) {
    if (std::abs(p.rho_amp) >= p.rho_mean)
        throw std::domain_error("manufactured_solution: density amplitude must stay below mean");
}

namespace {

// b(z) = sin^2(pi w (z - z0) / L): vanishes with its derivative at both ends.
struct Envelope {
    double b, db, ddb;
};
Envelope envelope(double z, double z0, double len, int waves) {
    if (waves == 0) return {1.0, 0.0, 0.0};
    const double k = M_PI * waves / len;
    const double th = k * (z - z0);
    const double s = std::sin(th);
    return {s * s, k * std::sin(2.0 * th), 2.0 * k * k * std::cos(2.0 * th)};
}

} // namespace

ManufacturedSolution::Derivs ManufacturedSolution::rho_d(Vec2 x, double t) const {
    const Envelope ex = envelope(x[0], prm_.origin[0], prm_.extent[0], prm_.waves[0]);
    const Envelope ey = envelope(x[1], prm_.origin[1], prm_.extent[1], prm_.waves[1]);
    const double ct = std::cos(prm_.omega_rho * t);
    const double st = std::sin(prm_.omega_rho * t);
    const double a = prm_.rho_amp;
    return {prm_.rho_mean + a * ex.b * ey.b * ct,
            -a * prm_.omega_rho * ex.b * ey.b * st,
            a * ex.db * ey.b * ct,
            a * ex.b * ey.db * ct,
            a * ex.ddb * ey.b * ct,
            a * ex.b * ey.ddb * ct,
            a * ex.db * ey.db * ct};
}

ManufacturedSolution::Derivs ManufacturedSolution::u_d(int comp, Vec2 x, double t) const {
    const Envelope ex = envelope(x[0], prm_.origin[0], prm_.extent[0], prm_.waves[0]);
    const Envelope ey = envelope(x[1], prm_.origin[1], prm_.extent[1], prm_.waves[1]);
    const double amp = prm_.u_amp[comp];
    const double om = prm_.omega_u[comp];
    const double ct = std::cos(om * t);
    return {amp * ex.b * ey.b * ct,
            -amp * om * ex.b * ey.b * std::sin(om * t),
            amp * ex.db * ey.b * ct,
            amp * ex.b * ey.db * ct,
            amp * ex.ddb * ey.b * ct,
            amp * ex.b * ey.ddb * ct,
            amp * ex.db * ey.db * ct};
}

Vec2 ManufacturedSolution::viscous_force(Vec2 x, double t) const {
    if (prm_.mu == 0.0) return {0.0, 0.0};
    const Derivs u = u_d(0, x, t);
    if (prm_.waves[1] == 0)
        // 1D: div(mu (grad u + grad u^T)) = 2 mu u''.
        return {2.0 * prm_.mu * u.dxx, 0.0};
    const Derivs v = u_d(1, x, t);
    // Constant mu: div(mu (grad u + grad u^T))_i = mu (lap u_i + d_i div u).
    return {prm_.mu * (u.dxx + u.dyy + u.dxx + v.dxy),
            prm_.mu * (v.dxx + v.dyy + u.dxy + v.dyy)};
}

double ManufacturedSolution::rho(Vec2 x, double t) const { return rho_d(x, t).v; }

Vec2 ManufacturedSolution::velocity(Vec2 x, double t) const {
    return {u_d(0, x, t).v, prm_.waves[1] == 0 ? 0.0 : u_d(1, x, t).v};
}

double ManufacturedSolution::mass_source(Vec2 x, double t) const {
    const Derivs r = rho_d(x, t);
    const Derivs u = u_d(0, x, t);
    double acc = r.dt + r.dx * u.v + r.v * u.dx;
    if (prm_.waves[1] != 0) {
        const Derivs v = u_d(1, x, t);
        acc += r.dy * v.v + r.v * v.dy;
    }
    return acc;
}

Vec2 ManufacturedSolution::pressure_gradient(Vec2 x, double t) const {
    const Derivs r = rho_d(x, t);
    const double dpdr = prm_.a * prm_.gamma * std::pow(r.v, prm_.gamma - 1.0);
    return {dpdr * r.dx, prm_.waves[1] == 0 ? 0.0 : dpdr * r.dy};
}

Vec2 ManufacturedSolution::momentum_source_convective(Vec2 x, double t) const {
    const Derivs r = rho_d(x, t);
    const Derivs u = u_d(0, x, t);
    const Vec2 visc = viscous_force(x, t);
    Vec2 out{0.0, 0.0};
    if (prm_.waves[1] == 0) {
        out[0] = r.dt * u.v + r.v * u.dt + r.dx * u.v * u.v + 2.0 * r.v * u.v * u.dx -
                 visc[0];
        return out;
    }
    const Derivs v = u_d(1, x, t);
    out[0] = r.dt * u.v + r.v * u.dt                          // d_t(rho u)
             + r.dx * u.v * u.v + 2.0 * r.v * u.v * u.dx      // d_x(rho u u)
             + r.dy * u.v * v.v + r.v * u.dy * v.v + r.v * u.v * v.dy // d_y(rho u v)
             - visc[0];
    out[1] = r.dt * v.v + r.v * v.dt                          // d_t(rho v)
             + r.dx * u.v * v.v + r.v * u.dx * v.v + r.v * u.v * v.dx // d_x(rho u v)
             + r.dy * v.v * v.v + 2.0 * r.v * v.v * v.dy      // d_y(rho v v)
             - visc[1];
    return out;
}

Vec2 ManufacturedSolution::momentum_source(Vec2 x, double t) const {
    const Vec2 conv = momentum_source_convective(x, t);
    const Vec2 grad = pressure_gradient(x, t);
    return {conv[0] + grad[0], conv[1] + grad[1]};
}

} // namespace oracle
} // namespace stagflow
