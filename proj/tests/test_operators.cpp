#include <doctest.h>

#include <random>

#include "stagflow/operators.hpp"

using namespace stagflow;

TEST_CASE("pressure gradient: constants, 1D stencil, grad-div duality") {
    SUBCASE("constant pressure gives zero on internal faces") {
        const Grid g = Grid::build_cartesian(2, {4, 4}, {0, 0}, {1, 1});
        const std::vector<double> p(g.n_cells(), 3.7);
        const auto grad = pressure_gradient(g, p);
        for (int i = 0; i < 2; ++i)
            for (double v : grad[i]) CHECK(v == 0.0);
    }
    SUBCASE("1D two cells, p = (0,1), h = 1") {
        const Grid g = Grid::build_cartesian(1, {2, 1}, {0, 0}, {2, 0});
        const auto grad = pressure_gradient(g, {0.0, 1.0});
        CHECK(grad[0][1] == doctest::Approx(1.0)); // |sigma|/|D| = 1/1
    }
    SUBCASE("duality: sum |K| p div(u) + sum |D| grad(p).u = 0 for u with zero "
            "boundary values") {
        const Grid g = Grid::build_cartesian(2, {6, 5}, {0, 0}, {1.2, 1.0});
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> val(-1.0, 1.0);
        std::vector<double> p(g.n_cells());
        for (auto& v : p) v = val(rng);
        FaceField u;
        for (int i = 0; i < 2; ++i) {
            u[i].assign(g.n_faces(), 0.0);
            for (int f = 0; f < g.n_faces(); ++f)
                if (g.face(f).internal()) u[i][f] = val(rng);
        }
        const auto grad = pressure_gradient(g, p);
        const auto div = velocity_divergence(g, u);
        double acc = 0.0;
        for (int c = 0; c < g.n_cells(); ++c) acc += g.cell_measure() * p[c] * div[c];
        for (int i = 0; i < 2; ++i)
            for (int f = 0; f < g.n_faces(); ++f)
                acc += g.dual_measure(f) * grad[i][f] * u[i][f];
        CHECK(acc == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("velocity divergence: uniform, linear interpolant, telescoping") {
    const Grid g = Grid::build_cartesian(2, {5, 4}, {0, 0}, {1.0, 0.8});
    SUBCASE("uniform flow") {
        FaceField u;
        u[0].assign(g.n_faces(), 1.0);
        u[1].assign(g.n_faces(), 0.0);
        for (double v : velocity_divergence(g, u)) CHECK(v == doctest::Approx(0.0));
    }
    SUBCASE("u_x = x gives div = 1") {
        FaceField u;
        for (int i = 0; i < 2; ++i) u[i].assign(g.n_faces(), 0.0);
        for (int f = 0; f < g.n_faces(); ++f)
            if (g.face(f).axis == 0) u[0][f] = g.face(f).center[0];
        for (double v : velocity_divergence(g, u)) CHECK(v == doctest::Approx(1.0));
    }
    SUBCASE("sum of |K| div equals the boundary flux") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> val(-1.0, 1.0);
        FaceField u;
        for (int i = 0; i < 2; ++i) {
            u[i].resize(g.n_faces());
            for (auto& v : u[i]) v = val(rng);
        }
        const auto div = velocity_divergence(g, u);
        double vol = 0.0;
        for (int c = 0; c < g.n_cells(); ++c) vol += g.cell_measure() * div[c];
        double bdry = 0.0;
        for (int f = 0; f < g.n_faces(); ++f) {
            const Face& face = g.face(f);
            if (face.internal()) continue;
            bdry += face.measure * face.normal_sign(face.owner()) * u[face.axis][f];
        }
        CHECK(vol == doctest::Approx(bdry).epsilon(1e-12));
    }
}

TEST_CASE("viscous operator: kernel, affine reproduction, positive semidefiniteness") {
    const Grid g = Grid::build_cartesian(2, {5, 5}, {0, 0}, {1.0, 1.0});
    for (const bool sym : {false, true}) {
        const auto a = assemble_viscous_matrix(g, 0.37, sym);
        SUBCASE(sym ? "symmetric gradient" : "plain gradient") {
            FaceField c;
            for (int i = 0; i < 2; ++i) c[i].assign(g.n_faces(), 2.0 - i);
            const auto fc = viscous_apply(g, a, c);
            for (int i = 0; i < 2; ++i)
                for (double v : fc[i]) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));

            // Affine field: zero viscous force away from the boundary.
            FaceField aff;
            for (int i = 0; i < 2; ++i) aff[i].resize(g.n_faces());
            for (int f = 0; f < g.n_faces(); ++f) {
                const Vec2 x = g.face(f).center;
                aff[0][f] = 0.3 * x[0] - 0.7 * x[1] + 0.1;
                aff[1][f] = -0.2 * x[0] + 0.5 * x[1] - 0.4;
            }
            const auto fa = viscous_apply(g, a, aff);
            for (int f = 0; f < g.n_faces(); ++f) {
                const Face& face = g.face(f);
                if (!face.internal()) continue;
                // Skip faces whose element patch touches the boundary.
                const Vec2 x = face.center;
                if (x[0] < 0.3 || x[0] > 0.7 || x[1] < 0.3 || x[1] > 0.7) continue;
                for (int i = 0; i < 2; ++i)
                    CHECK(fa[i][f] == doctest::Approx(0.0).epsilon(1e-11));
            }

            std::mt19937 rng(31);
            std::uniform_real_distribution<double> val(-1.0, 1.0);
            for (int trial = 0; trial < 50; ++trial) {
                FaceField u;
                for (int i = 0; i < 2; ++i) {
                    u[i].resize(g.n_faces());
                    for (auto& v : u[i]) v = val(rng);
                }
                const auto fu = viscous_apply(g, a, u);
                double energy = 0.0;
                for (int i = 0; i < 2; ++i)
                    for (int f = 0; f < g.n_faces(); ++f) energy += u[i][f] * fu[i][f];
                CHECK(energy >= -1e-11);
            }
        }
    }
}

TEST_CASE("1D viscous operator is the P1 stiffness") {
    const Grid g = Grid::build_cartesian(1, {4, 1}, {0, 0}, {1, 0});
    const auto a = assemble_viscous_matrix(g, 1.0, false);
    FaceField u;
    u[0] = {0.0, 0.0, 1.0, 0.0, 0.0};
    const auto fu = viscous_apply(g, a, u);
    CHECK(fu[0][1] == doctest::Approx(-4.0)); // 1/h = 4
    CHECK(fu[0][2] == doctest::Approx(8.0));
    CHECK(fu[0][3] == doctest::Approx(-4.0));
}

TEST_CASE("measured coercivity constant bounds the jump seminorm") {
    SUBCASE("1D: stiffness equals the jump form, lambda = 1") {
        const Grid g = Grid::build_cartesian(1, {12, 1}, {0, 0}, {1, 0});
        const double lambda = measure_coercivity_constant(g);
        CHECK(lambda == doctest::Approx(1.0).epsilon(1e-6));
    }
    for (const auto& [nx, ny, lx, ly] :
         {std::tuple{6, 6, 1.0, 1.0}, {8, 5, 2.0, 0.7}}) {
        const Grid g = Grid::build_cartesian(2, {nx, ny}, {0, 0}, {lx, ly});
        const double lambda = measure_coercivity_constant(g);
        CHECK(lambda > 0.0);
        const auto a = assemble_viscous_matrix(g, 1.0, false);
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> val(-1.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            // Random component with homogeneous Dirichlet boundary values.
            FaceField u;
            for (int i = 0; i < 2; ++i) u[i].assign(g.n_faces(), 0.0);
            for (int f = 0; f < g.n_faces(); ++f)
                if (g.face(f).internal()) u[0][f] = val(rng);
            const auto fu = viscous_apply(g, a, u);
            double energy = 0.0;
            for (int f = 0; f < g.n_faces(); ++f) energy += u[0][f] * fu[0][f];
            const double jump = jump_seminorm_sq(g, u[0], lambda);
            CHECK(energy >= jump * (1.0 - 1e-8) - 1e-12);
        }
    }
}
