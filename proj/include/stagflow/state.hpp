#pragma once

#include <array>
#include <vector>

#include "stagflow/common.hpp"
#include "stagflow/grid.hpp"

namespace stagflow {

/// Discrete unknowns at one time level: cell scalars (rho, p, and e for the
/// full Euler model) plus one d-vector of velocity per face. Snapshots are
/// treated as immutable; a time step reads one and writes a fresh one.
struct State {
    std::vector<double> rho;               // per cell
    std::vector<double> p;                 // per cell
    std::vector<double> e;                 // per cell; empty unless Euler
    std::array<std::vector<double>, 2> u;  // per face, component i
    double time = 0.0;

    static State zeros(const Grid& g, bool with_internal_energy);
    bool has_internal_energy() const { return !e.empty(); }

    /// Throws PositivityError naming the first offending cell.
    void check_admissible() const;
};

enum class EosKind { incompressible, barotropic, ideal_gas };

/// Equation of state. barotropic: p = a rho^gamma (a > 0, gamma >= 1);
/// ideal gas: p = (gamma - 1) rho e (gamma > 1).
struct Eos {
    EosKind kind = EosKind::incompressible;
    double a = 0.0;
    double gamma = 1.0;

    static Eos incompressible() { return {EosKind::incompressible, 0.0, 1.0}; }
    static Eos barotropic(double a, double gamma);
    static Eos ideal_gas(double gamma);
};

double eos_pressure(const Eos& eos, double rho, double e = 0.0);
/// Inverts the ideal-gas law for e at given (rho, p).
double eos_internal_energy(const Eos& eos, double rho, double p);
double sound_speed(const Eos& eos, double rho, double p);

} // namespace stagflow
