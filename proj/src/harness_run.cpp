#include "stagflow/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include "stagflow/streamfunction.hpp"

namespace stagflow {
namespace harness {

namespace {

void write_diag_header(std::ofstream& os) {
    os << "time,cfl,tau,eta,mass,kinetic_energy,internal_energy,total_energy,"
          "identity_residual,sum_s,boundary_mass_flux,max_divergence,velocity_change\n";
}

void write_diag_row(std::ofstream& os, const StepDiagnostics& d) {
    os << std::setprecision(17) << d.time << ',' << d.cfl << ',' << d.tau << ',' << d.eta
       << ',' << d.mass << ',' << d.kinetic_energy << ',' << d.internal_energy << ','
       << d.total_energy << ',' << d.identity_residual << ',' << d.sum_s << ','
       << d.boundary_mass_flux << ',' << d.max_divergence << ',' << d.velocity_change
       << '\n';
}

} // namespace

void write_fields_csv(const std::string& path, const Grid& g, const State& s) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file " + path);
    os << std::setprecision(17);
    // Cell rows carry the scalars, face rows the velocity components.
    os << "kind,x,y,rho,p,e,ux,uy\n";
    for (int c = 0; c < g.n_cells(); ++c) {
        const Vec2 x = g.cell_center(c);
        os << "cell," << x[0] << ',' << x[1] << ',' << s.rho[c] << ',' << s.p[c] << ','
           << (s.has_internal_energy() ? s.e[c] : 0.0) << ",,\n";
    }
    for (int f = 0; f < g.n_faces(); ++f) {
        const Vec2 x = g.face(f).center;
        os << "face," << x[0] << ',' << x[1] << ",,,," << s.u[0][f] << ','
           << (g.dim() == 2 ? s.u[1][f] : 0.0) << '\n';
    }
}

std::map<std::string, double> l1_errors(const Grid& g, const State& s,
                                        const std::function<ExactSample(Vec2, double)>& exact,
                                        double t, const ModelConfig& model) {
    std::map<std::string, double> out;
    if (!exact) return out;
    double e_rho = 0.0, e_p = 0.0, e_e = 0.0;
    bool with_p = false;
    for (int c = 0; c < g.n_cells(); ++c) {
        const ExactSample w = exact(g.cell_center(c), t);
        e_rho += g.cell_measure() * std::abs(s.rho[c] - w.rho);
        if (w.has_pressure) {
            with_p = true;
            e_p += g.cell_measure() * std::abs(s.p[c] - w.p);
            if (s.has_internal_energy())
                e_e += g.cell_measure() *
                       std::abs(s.e[c] - eos_internal_energy(model.eos, w.rho, w.p));
        }
    }
    out["rho"] = e_rho;
    if (with_p) out["p"] = e_p;
    if (with_p && s.has_internal_energy()) out["e"] = e_e;
    for (int i = 0; i < g.dim(); ++i) {
        double acc = 0.0;
        for (int f = 0; f < g.n_faces(); ++f) {
            const ExactSample w = exact(g.face(f).center, t);
            acc += g.dual_measure(f) * std::abs(s.u[i][f] - w.u[i]);
        }
        out[i == 0 ? "ux" : "uy"] = acc;
    }
    return out;
}

double front_position(const Grid& g, const std::vector<double>& field, double behind,
                      double ahead) {
    const double mid = 0.5 * (behind + ahead);
    const bool rising = behind > ahead;
    for (int c = g.n_cells() - 1; c > 0; --c) {
        const double v0 = field[c - 1];
        const double v1 = field[c];
        const bool crossed = rising ? (v0 >= mid && v1 < mid) : (v0 <= mid && v1 > mid);
        if (crossed) {
            const double frac = (mid - v0) / (v1 - v0);
            return g.cell_center(c - 1)[0] + frac * g.hx();
        }
    }
    return g.origin()[0];
}

RunReport run_case(const Case& c, const RunOptions& opts) {
    const Grid grid = Grid::build_cartesian(c.dim, c.cells, c.origin, c.extent, c.tags);
    FlowSolver solver(grid, c.model);
    solver.set_identity_check(opts.identity_check);
    State s = c.initial ? c.initial(solver) : solver.make_initial_state();

    std::ofstream diag_os;
    const bool writing = !opts.output_dir.empty();
    if (writing) {
        std::filesystem::create_directories(opts.output_dir);
        diag_os.open(opts.output_dir + "/diagnostics.csv");
        write_diag_header(diag_os);
        write_fields_csv(opts.output_dir + "/fields_0.csv", grid, s);
    }
    double next_snapshot = c.snapshots > 0 ? c.final_time / c.snapshots : 0.0;
    int snapshot_idx = 1;

    RunReport report;
    RunControls rc;
    rc.final_time = c.final_time;
    rc.steady_tol = c.steady_tol;
    rc.on_step = [&](const State& sn, const StepDiagnostics& d) {
        ++report.steps;
        if (writing) {
            write_diag_row(diag_os, d);
            if (c.snapshots > 0 && sn.time >= next_snapshot - 1e-12) {
                write_fields_csv(opts.output_dir + "/fields_" +
                                     std::to_string(snapshot_idx) + ".csv",
                                 grid, sn);
                ++snapshot_idx;
                next_snapshot += c.final_time / c.snapshots;
            }
        }
    };
    s = run_to_time(solver, std::move(s), rc);
    report.last = solver.diagnostics();
    report.l1_error = l1_errors(grid, s, c.exact, s.time, c.model);

    if (c.model.model == Model::incompressible && grid.dim() == 2) {
        const StreamfunctionMetrics sf = streamfunction_metrics(grid, s.u);
        report.streamfunction_amplitude = sf.amplitude;
        report.primary_vortex = sf.primary;
        report.secondary_vortex = sf.secondary;
    }
    if (writing) {
        write_fields_csv(opts.output_dir + "/fields_final.csv", grid, s);
        std::ofstream rep(opts.output_dir + "/run_report");
        rep << std::setprecision(12);
        rep << "case: " << c.name << "\n";
        rep << "steps: " << report.steps << "\n";
        rep << "final_time: " << s.time << "\n";
        rep << "mass: " << report.last.mass << "\n";
        rep << "kinetic_energy: " << report.last.kinetic_energy << "\n";
        rep << "internal_energy: " << report.last.internal_energy << "\n";
        rep << "cfl: " << report.last.cfl << "\n";
        for (const auto& [k, v] : report.l1_error) rep << "l1_" << k << ": " << v << "\n";
        if (c.model.model == Model::incompressible && grid.dim() == 2) {
            rep << "streamfunction_amplitude: " << report.streamfunction_amplitude << "\n";
            rep << "primary_vortex: " << report.primary_vortex[0] << " "
                << report.primary_vortex[1] << "\n";
            rep << "secondary_vortex: " << report.secondary_vortex[0] << " "
                << report.secondary_vortex[1] << "\n";
        }
    }
    report.final_state = std::move(s);
    return report;
}

ConvergenceResult convergence_study(const Case& base, const std::vector<int>& levels,
                                    const RunOptions& opts) {
    if (levels.size() < 2)
        throw ConfigError("convergence_study needs at least 2 refinement levels");
    if (!base.exact) throw ConfigError("convergence_study requires an exact solution");
    ConvergenceResult out;
    for (int nx : levels) {
        Case c = base;
        if (c.rescale) c.rescale(c, nx);
        else c.cells = {nx, c.dim == 2 ? nx : 1};
        RunOptions level_opts = opts;
        level_opts.output_dir.clear();
        const RunReport rep = run_case(c, level_opts);
        ConvergenceLevel lvl;
        lvl.nx = nx;
        lvl.h = c.extent[0] / nx;
        lvl.l1 = rep.l1_error;
        out.levels.push_back(std::move(lvl));
    }
    // Least-squares slope of log(err) against log(h); zero-error variables
    // are reported with an unset (NaN) order.
    for (const auto& [var, unused] : out.levels.front().l1) {
        (void)unused;
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        int n = 0;
        bool degenerate = false;
        for (const auto& lvl : out.levels) {
            const double err = lvl.l1.at(var);
            if (err <= 0.0) {
                degenerate = true;
                break;
            }
            const double x = std::log(lvl.h);
            const double y = std::log(err);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++n;
        }
        out.order[var] = degenerate ? std::nan("") : (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    if (!opts.output_dir.empty()) {
        std::filesystem::create_directories(opts.output_dir);
        write_orders_csv(opts.output_dir + "/orders.csv", out);
    }
    return out;
}

void write_orders_csv(const std::string& path, const ConvergenceResult& r) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file " + path);
    os << std::setprecision(17) << "variable,nx,h,l1_error,fitted_order\n";
    for (const auto& [var, order] : r.order)
        for (const auto& lvl : r.levels)
            os << var << ',' << lvl.nx << ',' << lvl.h << ',' << lvl.l1.at(var) << ','
               << order << '\n';
}

} // namespace harness
} // namespace stagflow
