#include "stagflow/operators.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

namespace stagflow {

FaceField pressure_gradient(const Grid& g, const std::vector<double>& p) {
    FaceField out;
    for (int i = 0; i < g.dim(); ++i) out[i].assign(g.n_faces(), 0.0);
    for (int f = 0; f < g.n_faces(); ++f) {
        const Face& face = g.face(f);
        if (!face.internal()) continue;
        out[face.axis][f] =
            face.measure / g.dual_measure(f) * (p[face.cell_pos] - p[face.cell_neg]);
    }
    return out;
}

std::vector<double> velocity_divergence(const Grid& g, const FaceField& u) {
    std::vector<double> out(g.n_cells(), 0.0);
    for (int c = 0; c < g.n_cells(); ++c) {
        const auto cf = g.cell_faces(c);
        double acc = 0.0;
        for (int k = 0; k < 2 * g.dim(); ++k) {
            const Face& face = g.face(cf[k]);
            acc += face.measure * face.normal_sign(c) * u[face.axis][cf[k]];
        }
        out[c] = acc / g.cell_measure();
    }
    return out;
}

namespace {

// Exact reference-element integrals on [-1,1]^2 for the face-mean basis
// phi_W = 1/4 - x/2 + 3/8 (x^2-y^2) and its three rotations, face order
// (W, E, S, N). X = int dphi/dx dphi/dx, Y likewise in y; the physical
// stiffness is (hy/hx) X + (hx/hy) Y. B = int dphi_row/dx dphi_col/dy has
// no metric factor.
constexpr double kX[4][4] = {{1.75, -0.25, -0.75, -0.75},
                             {-0.25, 1.75, -0.75, -0.75},
                             {-0.75, -0.75, 0.75, 0.75},
                             {-0.75, -0.75, 0.75, 0.75}};
constexpr double kY[4][4] = {{0.75, 0.75, -0.75, -0.75},
                             {0.75, 0.75, -0.75, -0.75},
                             {-0.75, -0.75, 1.75, -0.25},
                             {-0.75, -0.75, -0.25, 1.75}};
constexpr double kB[4][4] = {{0.0, 0.0, 1.0, -1.0},
                             {0.0, 0.0, -1.0, 1.0},
                             {0.0, 0.0, 0.0, 0.0},
                             {0.0, 0.0, 0.0, 0.0}};

// Cell faces reordered from the grid's (-x,+x,-y,+y) to (W,E,S,N): identical.

} // namespace

Eigen::SparseMatrix<double> assemble_viscous_matrix(const Grid& g, double mu,
                                                    bool symmetric_gradient) {
    const int n = g.dim() * g.n_faces();
    std::vector<Eigen::Triplet<double>> trips;
    if (g.dim() == 1) {
        // P1 on intervals; the symmetric gradient doubles the 1D stiffness.
        const double w = mu * (symmetric_gradient ? 2.0 : 1.0) / g.hx();
        for (int c = 0; c < g.n_cells(); ++c) {
            const auto cf = g.cell_faces(c);
            trips.emplace_back(cf[0], cf[0], w);
            trips.emplace_back(cf[1], cf[1], w);
            trips.emplace_back(cf[0], cf[1], -w);
            trips.emplace_back(cf[1], cf[0], -w);
        }
        Eigen::SparseMatrix<double> a(n, n);
        a.setFromTriplets(trips.begin(), trips.end());
        return a;
    }
    const double rx = g.hy() / g.hx();
    const double ry = g.hx() / g.hy();
    trips.reserve(static_cast<std::size_t>(g.n_cells()) * 64);
    for (int c = 0; c < g.n_cells(); ++c) {
        const auto cf = g.cell_faces(c);
        const int fo[4] = {cf[0], cf[1], cf[2], cf[3]}; // W, E, S, N
        for (int r = 0; r < 4; ++r) {
            for (int s = 0; s < 4; ++s) {
                const double lap = rx * kX[r][s] + ry * kY[r][s];
                if (!symmetric_gradient) {
                    for (int i = 0; i < 2; ++i)
                        trips.emplace_back(dof_of(g, fo[r], i), dof_of(g, fo[s], i), mu * lap);
                    continue;
                }
                // x-row: (A + Ax) u_x + B^T u_y;  y-row: B u_x + (A + Ay) u_y.
                trips.emplace_back(dof_of(g, fo[r], 0), dof_of(g, fo[s], 0),
                                   mu * (lap + rx * kX[r][s]));
                trips.emplace_back(dof_of(g, fo[r], 1), dof_of(g, fo[s], 1),
                                   mu * (lap + ry * kY[r][s]));
                // int dx phi_s dy phi_r = kB[s][r].
                trips.emplace_back(dof_of(g, fo[r], 0), dof_of(g, fo[s], 1), mu * kB[s][r]);
                trips.emplace_back(dof_of(g, fo[r], 1), dof_of(g, fo[s], 0), mu * kB[r][s]);
            }
        }
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

FaceField viscous_apply(const Grid& g, const Eigen::SparseMatrix<double>& matrix,
                        const FaceField& u) {
    Eigen::VectorXd x(matrix.rows());
    for (int i = 0; i < g.dim(); ++i)
        for (int f = 0; f < g.n_faces(); ++f) x[dof_of(g, f, i)] = u[i][f];
    const Eigen::VectorXd y = matrix * x;
    FaceField out;
    for (int i = 0; i < g.dim(); ++i) {
        out[i].resize(g.n_faces());
        for (int f = 0; f < g.n_faces(); ++f) out[i][f] = y[dof_of(g, f, i)];
    }
    return out;
}

double jump_seminorm_sq(const Grid& g, const std::vector<double>& u_comp, double mu_eps) {
    const double w = mu_eps * std::pow(g.cell_diameter(), g.dim() - 2.0);
    double acc = 0.0;
    for (const DualFace& df : g.dual_faces()) acc += w * sqr(u_comp[df.face_a] - u_comp[df.face_b]);
    return acc;
}

double measure_coercivity_constant(const Grid& g) {
    // Free unknowns: one scalar per internal face, boundary values pinned to 0.
    std::vector<int> id(g.n_faces(), -1);
    int n = 0;
    for (int f = 0; f < g.n_faces(); ++f)
        if (g.face(f).internal()) id[f] = n++;
    if (n == 0) return 1.0;

    const Eigen::SparseMatrix<double> full = assemble_viscous_matrix(g, 1.0, false);
    std::vector<Eigen::Triplet<double>> ta, tg;
    for (int f = 0; f < g.n_faces(); ++f) {
        if (id[f] < 0) continue;
        for (Eigen::SparseMatrix<double>::InnerIterator it(full, dof_of(g, f, 0)); it; ++it) {
            if (it.row() >= g.n_faces()) continue;
            const int fr = static_cast<int>(it.row());
            if (id[fr] >= 0) ta.emplace_back(id[fr], id[f], it.value());
        }
    }
    const double w = std::pow(g.cell_diameter(), g.dim() - 2.0);
    for (const DualFace& df : g.dual_faces()) {
        const int a = id[df.face_a];
        const int b = id[df.face_b];
        if (a >= 0) tg.emplace_back(a, a, w);
        if (b >= 0) tg.emplace_back(b, b, w);
        if (a >= 0 && b >= 0) {
            tg.emplace_back(a, b, -w);
            tg.emplace_back(b, a, -w);
        }
    }
    Eigen::SparseMatrix<double> a(n, n), gm(n, n);
    a.setFromTriplets(ta.begin(), ta.end());
    gm.setFromTriplets(tg.begin(), tg.end());

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(a);
    if (chol.info() != Eigen::Success)
        throw SolverError("coercivity measurement: stiffness factorization failed");

    // Power iteration on A^{-1} G: the largest eigenvalue theta of the pencil
    // G x = theta A x gives lambda = 1/theta.
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    for (int k = 0; k < n; ++k) x[k] += 1e-3 * std::sin(static_cast<double>(k + 1));
    double theta = 0.0;
    for (int it = 0; it < 500; ++it) {
        Eigen::VectorXd y = chol.solve(gm * x);
        const double norm = y.norm();
        if (norm == 0.0) return 1.0; // G vanished: no jump pairs
        y /= norm;
        const double theta_new = y.dot(gm * y) / y.dot(a * y);
        const bool done = std::abs(theta_new - theta) <= 1e-12 * std::abs(theta_new);
        theta = theta_new;
        x = y;
        if (done && it > 3) break;
    }
    return (1.0 - 1e-9) / theta;
}

} // namespace stagflow
