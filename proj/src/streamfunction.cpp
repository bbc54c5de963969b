#include "stagflow/streamfunction.hpp"

#include <cmath>

namespace stagflow {

StreamfunctionMetrics streamfunction_metrics(const Grid& g, const FaceField& u) {
    if (g.dim() != 2) throw ConfigError("streamfunction requires a 2D grid");
    const int nx = g.nx();
    const int ny = g.ny();
    StreamfunctionMetrics out;
    out.psi.assign(static_cast<std::size_t>(nx + 1) * (ny + 1), 0.0);
    auto node = [nx](int i, int j) { return i + (nx + 1) * j; };

    // First column upward (crossing x-normal faces), then rows rightward
    // (crossing y-normal faces).
    for (int j = 0; j < ny; ++j)
        out.psi[node(0, j + 1)] = out.psi[node(0, j)] + g.hy() * u[0][g.x_face(0, j)];
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            out.psi[node(i + 1, j)] = out.psi[node(i, j)] - g.hx() * u[1][g.y_face(i, j)];

    for (int c = 0; c < g.n_cells(); ++c) {
        const auto cf = g.cell_faces(c);
        const double loop = g.hy() * (u[0][cf[1]] - u[0][cf[0]]) +
                            g.hx() * (u[1][cf[3]] - u[1][cf[2]]);
        out.path_residual = std::max(out.path_residual, std::abs(loop));
    }

    double lo = out.psi[0], hi = out.psi[0];
    int lo_i = 0, lo_j = 0;
    const Vec2 o = g.origin();
    const Vec2 ext = g.extent();
    const double mid_x = o[0] + 0.5 * ext[0];
    const double mid_y = o[1] + 0.5 * ext[1];
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const double v = out.psi[node(i, j)];
            if (v < lo) { lo = v; lo_i = i; lo_j = j; }
            if (v > hi) hi = v;
        }
    out.amplitude = hi - lo;
    out.primary = {o[0] + lo_i * g.hx(), o[1] + lo_j * g.hy()};

    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const double x = o[0] + i * g.hx();
            const double y = o[1] + j * g.hy();
            if (x < mid_x || y > mid_y) continue;
            const double v = out.psi[node(i, j)];
            if (v > best) {
                best = v;
                out.secondary = {x, y};
            }
        }
    return out;
}

} // namespace stagflow
