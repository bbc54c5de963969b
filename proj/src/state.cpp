#include "stagflow/state.hpp"

#include <cmath>

namespace stagflow {

State State::zeros(const Grid& g, bool with_internal_energy) {
    State s;
    s.rho.assign(g.n_cells(), 0.0);
    s.p.assign(g.n_cells(), 0.0);
    if (with_internal_energy) s.e.assign(g.n_cells(), 0.0);
    for (int i = 0; i < g.dim(); ++i) s.u[i].assign(g.n_faces(), 0.0);
    return s;
}

void State::check_admissible() const {
    for (std::size_t k = 0; k < rho.size(); ++k)
        if (!(rho[k] > 0.0))
            throw PositivityError("rho <= 0 in cell " + std::to_string(k) +
                                  " (rho=" + std::to_string(rho[k]) + ")");
    for (std::size_t k = 0; k < e.size(); ++k)
        if (e[k] < 0.0)
            throw PositivityError("internal energy < 0 in cell " + std::to_string(k) +
                                  " (e=" + std::to_string(e[k]) + ")");
}

Eos Eos::barotropic(double a, double gamma) {
    if (!(a > 0.0) || !(gamma >= 1.0))
        throw ConfigError("barotropic EOS requires a > 0 and gamma >= 1");
    return {EosKind::barotropic, a, gamma};
}

Eos Eos::ideal_gas(double gamma) {
    if (!(gamma > 1.0)) throw ConfigError("ideal-gas EOS requires gamma > 1");
    return {EosKind::ideal_gas, 0.0, gamma};
}

double eos_pressure(const Eos& eos, double rho, double e) {
    if (!(rho > 0.0))
        throw std::domain_error("eos_pressure: rho must be positive, got " + std::to_string(rho));
    switch (eos.kind) {
    case EosKind::barotropic:
        return eos.a * std::pow(rho, eos.gamma);
    case EosKind::ideal_gas:
        if (e < 0.0)
            throw std::domain_error("eos_pressure: internal energy must be nonnegative");
        return (eos.gamma - 1.0) * rho * e;
    case EosKind::incompressible:
        throw std::domain_error("eos_pressure: incompressible model has no equation of state");
    }
    return 0.0;
}

double eos_internal_energy(const Eos& eos, double rho, double p) {
    if (eos.kind != EosKind::ideal_gas)
        throw std::domain_error("eos_internal_energy: only the ideal-gas law is invertible");
    if (!(rho > 0.0) || p < 0.0)
        throw std::domain_error("eos_internal_energy: require rho > 0 and p >= 0");
    return p / ((eos.gamma - 1.0) * rho);
}

double sound_speed(const Eos& eos, double rho, double p) {
    if (!(rho > 0.0) || p < 0.0)
        throw std::domain_error("sound_speed: require rho > 0 and p >= 0");
    switch (eos.kind) {
    case EosKind::barotropic:
        // c^2 = p'(rho) = a gamma rho^(gamma-1); sqrt(2 a rho) for gamma = 2.
        return std::sqrt(eos.a * eos.gamma * std::pow(rho, eos.gamma - 1.0));
    case EosKind::ideal_gas:
        return std::sqrt(eos.gamma * p / rho);
    case EosKind::incompressible:
        return 0.0;
    }
    return 0.0;
}

} // namespace stagflow
