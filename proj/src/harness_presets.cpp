#include "stagflow/harness.hpp"

#include <cmath>

namespace stagflow {
namespace harness {

namespace {

Case riemann_test3_1d() {
    Case c;
    c.name = "riemann_test3";
    c.description = "1D ideal-gas Riemann problem, strong left rarefaction / right shock";
    c.dim = 1;
    c.cells = {1000, 1};
    c.extent = {1.0, 0.0};
    const double gamma = 1.4;
    const oracle::PrimState left{1.0, 0.0, 1000.0};
    const oracle::PrimState right{1.0, 0.0, 0.001};
    c.model.model = Model::euler;
    c.model.eos = Eos::ideal_gas(gamma);
    c.model.stepping = TimeStepping::forward_euler;
    c.model.scheme.scheme = ConvectionScheme::muscl;
    c.final_time = 0.012;
    c.dt_of_h = [](double h) { return h / 100.0; };
    c.model.scheme.dt = c.dt_of_h(1.0 / 1000.0);
    Eos eos = c.model.eos;
    c.model.bc.x_neg.rho_ext = left.rho;
    c.model.bc.x_neg.e_ext = eos_internal_energy(eos, left.rho, left.p);
    c.model.bc.x_pos.rho_ext = right.rho;
    c.model.bc.x_pos.e_ext = eos_internal_energy(eos, right.rho, right.p);
    c.initial = [=](const FlowSolver& solver) {
        return solver.sample_initial_state(
            [=](Vec2 x) { return x[0] < 0.5 ? left.rho : right.rho; }, {},
            [=](Vec2 x) {
                const auto& w = x[0] < 0.5 ? left : right;
                return eos_internal_energy(eos, w.rho, w.p);
            });
    };
    auto sol = std::make_shared<oracle::RiemannSolution>(gamma, left, right);
    c.exact = [sol](Vec2 x, double t) {
        const oracle::PrimState w = sol->sample_at(x[0], t, 0.5);
        return ExactSample{w.rho, {w.u, 0.0}, w.p, true};
    };
    c.rescale = [](Case& cc, int nx) { cc.cells = {nx, 1}; };
    return c;
}

Case riemann_test3_stripe() {
    Case c = riemann_test3_1d();
    c.name = "riemann_test3_stripe";
    c.description = "Test 3 on a fictitious 2D stripe (one row of squares, "
                    "symmetry walls, stabilized)";
    c.dim = 2;
    c.tags.y_neg = BoundaryTag::symmetry;
    c.tags.y_pos = BoundaryTag::symmetry;
    c.dt_of_h = [](double h) { return h / 200.0; };
    c.rescale = [](Case& cc, int nx) {
        const double h = 1.0 / nx;
        cc.cells = {nx, 1};
        cc.extent = {1.0, h};
        cc.model.scheme.nu = 50.0 * h * 19.6 * 6.0;
        cc.model.scheme.dt = cc.dt_of_h(h);
    };
    c.rescale(c, 1000);
    return c;
}

Case barotropic_shock_1d() {
    Case c;
    c.name = "barotropic_shock_1d";
    c.description = "Mach-2 barotropic (shallow-water) moving shock fed from the inlet";
    c.dim = 1;
    c.cells = {500, 1};
    c.extent = {1.0, 0.0};
    const double a = 9.81 / 2.0;
    const double rho0 = 0.2;
    const auto shock = oracle::barotropic_shock_state(a, rho0, 2.0);
    c.model.model = Model::barotropic;
    c.model.eos = Eos::barotropic(a, 2.0);
    c.model.stepping = TimeStepping::heun;
    c.final_time = 0.25;
    c.dt_of_h = [](double h) { return h / 20.0; };
    c.model.scheme.dt = c.dt_of_h(1.0 / 500.0);
    c.model.bc.x_neg.velocity = [=](Vec2, double) { return Vec2{shock.u_b, 0.0}; };
    c.model.bc.x_neg.rho_ext = shock.rho_b;
    c.model.bc.x_pos.rho_ext = rho0;
    c.initial = [=](const FlowSolver& solver) {
        return solver.sample_initial_state([=](Vec2) { return rho0; }, {});
    };
    c.exact = [=](Vec2 x, double t) {
        const bool behind = x[0] < shock.omega * t;
        ExactSample s;
        s.rho = behind ? shock.rho_b : rho0;
        s.u = {behind ? shock.u_b : 0.0, 0.0};
        return s;
    };
    c.rescale = [](Case& cc, int nx) {
        cc.cells = {nx, 1};
        cc.model.scheme.dt = cc.dt_of_h(1.0 / nx);
    };
    return c;
}

Case euler_shock_1d() {
    Case c;
    c.name = "euler_shock_1d";
    c.description = "Mach-2 ideal-gas moving shock (gamma = 2), the non-isentropic "
                    "analogue of the barotropic case";
    c.dim = 1;
    c.cells = {500, 1};
    c.extent = {1.0, 0.0};
    const double a = 9.81 / 2.0;
    const double gamma = 2.0;
    const double rho0 = 0.2;
    const double e0 = a * rho0;
    const double p0 = (gamma - 1.0) * rho0 * e0;
    const auto shock = oracle::euler_shock_state(gamma, rho0, p0, 2.0);
    const double e_b = shock.p_b / ((gamma - 1.0) * shock.rho_b);
    c.model.model = Model::euler;
    c.model.eos = Eos::ideal_gas(gamma);
    c.model.stepping = TimeStepping::forward_euler;
    c.final_time = 0.25;
    c.dt_of_h = [](double h) { return h / 10.0; };
    c.model.scheme.dt = c.dt_of_h(1.0 / 500.0);
    c.model.bc.x_neg.velocity = [=](Vec2, double) { return Vec2{shock.u_b, 0.0}; };
    c.model.bc.x_neg.rho_ext = shock.rho_b;
    c.model.bc.x_neg.e_ext = e_b;
    c.model.bc.x_pos.rho_ext = rho0;
    c.model.bc.x_pos.e_ext = e0;
    c.initial = [=](const FlowSolver& solver) {
        return solver.sample_initial_state([=](Vec2) { return rho0; }, {},
                                           [=](Vec2) { return e0; });
    };
    c.exact = [=](Vec2 x, double t) {
        const bool behind = x[0] < shock.omega * t;
        ExactSample s;
        s.rho = behind ? shock.rho_b : rho0;
        s.u = {behind ? shock.u_b : 0.0, 0.0};
        s.p = behind ? shock.p_b : p0;
        s.has_pressure = true;
        return s;
    };
    c.rescale = [](Case& cc, int nx) {
        cc.cells = {nx, 1};
        cc.model.scheme.dt = cc.dt_of_h(1.0 / nx);
    };
    return c;
}

Case cavity(int n) {
    Case c;
    c.name = "cavity_re5000_" + std::to_string(n);
    c.description = "Lid-driven cavity at Re = 5000, run to the steady state";
    c.dim = 2;
    c.cells = {n, n};
    c.extent = {1.0, 1.0};
    c.model.model = Model::incompressible;
    c.model.mu = 2e-4;
    c.model.scheme.dt = 0.0025;
    c.final_time = 200.0;
    c.steady_tol = 1e-6;
    c.model.bc.y_pos.velocity = [](Vec2, double) { return Vec2{1.0, 0.0}; };
    c.initial = [](const FlowSolver& solver) { return solver.make_initial_state(); };
    c.rescale = [](Case& cc, int nx) { cc.cells = {nx, nx}; };
    return c;
}

Case backward_facing_step() {
    Case c;
    c.name = "backward_facing_step";
    c.description = "Backward-facing step at Re = 1000 (qualitative demo; no "
                    "quantitative reference exists)";
    c.dim = 2;
    c.cells = {250, 50};
    c.extent = {20.0, 1.9423};
    const double h_step = 0.9423;
    const double height = 1.9423;
    c.tags.x_pos = BoundaryTag::neumann_outflow;
    c.model.model = Model::incompressible;
    c.model.mu = 0.001;
    c.model.scheme.dt = 0.01;
    c.final_time = 20.0;
    c.model.bc.x_neg.velocity = [=](Vec2 x, double) {
        if (x[1] <= h_step) return Vec2{0.0, 0.0};
        const double s = 4.0 * (x[1] - h_step) * (height - x[1]) / sqr(height - h_step);
        return Vec2{s, 0.0};
    };
    c.initial = [](const FlowSolver& solver) { return solver.make_initial_state(); };
    c.rescale = [](Case& cc, int nx) { cc.cells = {nx, nx / 5}; };
    return c;
}

Case mms_barotropic() {
    Case c;
    c.name = "mms_barotropic";
    c.description = "Manufactured smooth barotropic flow for convergence-order studies";
    c.dim = 2;
    c.cells = {32, 32};
    c.extent = {1.0, 1.0};
    oracle::ManufacturedSolution::Params prm;
    prm.extent = c.extent;
    auto ms = std::make_shared<oracle::ManufacturedSolution>(prm);
    c.model.model = Model::barotropic;
    c.model.eos = Eos::barotropic(prm.a, prm.gamma);
    c.model.mu = prm.mu;
    c.model.stepping = TimeStepping::heun;
    c.model.bc.x_neg.rho_ext = prm.rho_mean;
    c.model.bc.x_pos.rho_ext = prm.rho_mean;
    c.model.bc.y_neg.rho_ext = prm.rho_mean;
    c.model.bc.y_pos.rho_ext = prm.rho_mean;
    c.model.sources.mass = [ms](Vec2 x, double t) { return ms->mass_source(x, t); };
    c.model.sources.momentum = [ms](Vec2 x, double t) {
        return ms->momentum_source_convective(x, t);
    };
    c.model.sources.momentum_pressure = [ms](Vec2 x, double t) {
        return ms->pressure_gradient(x, t);
    };
    c.final_time = 0.25;
    c.dt_of_h = [](double h) { return 0.03125 * h; };
    c.model.scheme.dt = c.dt_of_h(1.0 / 32.0);
    c.initial = [ms](const FlowSolver& solver) {
        return solver.sample_initial_state([ms](Vec2 x) { return ms->rho(x, 0.0); },
                                           [ms](Vec2 x) { return ms->velocity(x, 0.0); });
    };
    c.exact = [ms](Vec2 x, double t) {
        ExactSample s;
        s.rho = ms->rho(x, t);
        s.u = ms->velocity(x, t);
        return s;
    };
    c.rescale = [](Case& cc, int nx) {
        cc.cells = {nx, nx};
        cc.model.scheme.dt = cc.dt_of_h(1.0 / nx);
    };
    return c;
}

} // namespace

Case make_preset(const std::string& name) {
    if (name == "riemann_test3") return riemann_test3_1d();
    if (name == "riemann_test3_stripe") return riemann_test3_stripe();
    if (name == "barotropic_shock_1d") return barotropic_shock_1d();
    if (name == "euler_shock_1d") return euler_shock_1d();
    if (name == "cavity_re5000_128") return cavity(128);
    if (name == "cavity_re5000_256") return cavity(256);
    if (name == "backward_facing_step") return backward_facing_step();
    if (name == "mms_barotropic") return mms_barotropic();
    throw ConfigError("unknown preset '" + name + "' (try list-presets)");
}

std::vector<std::pair<std::string, std::string>> preset_catalog() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const char* n : {"riemann_test3", "riemann_test3_stripe", "barotropic_shock_1d",
                          "euler_shock_1d", "cavity_re5000_128", "cavity_re5000_256",
                          "backward_facing_step", "mms_barotropic"})
        out.emplace_back(n, make_preset(n).description);
    return out;
}

} // namespace harness
} // namespace stagflow
