#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "stagflow/convection.hpp"
#include "stagflow/grid.hpp"

namespace stagflow {

/// (grad p)_{sigma,i} = (|sigma|/|D_sigma|)(p_L - p_K) n_{K,sigma}.e_i.
/// Zero at boundary faces (Dirichlet faces never read it; outflow faces
/// assume a vanishing pressure gradient).
FaceField pressure_gradient(const Grid& g, const std::vector<double>& p);

/// div(u)_K = (1/|K|) sum |sigma| u_sigma . n_{K,sigma}.
std::vector<double> velocity_divergence(const Grid& g, const FaceField& u);

/// Unknown numbering for the (face, component) velocity degrees of freedom:
/// id = comp * n_faces + face.
inline int dof_of(const Grid& g, int face, int comp) { return comp * g.n_faces() + face; }

/// Finite element viscous form on the nonconforming low-order element
/// (face-mean degrees of freedom; space 1, x, y, x^2-y^2 on rectangles).
/// Assembles sum_K int_K mu (grad u + grad u^T) : grad phi (or the plain
/// grad u : grad phi form) over all (face, component) unknowns.
Eigen::SparseMatrix<double> assemble_viscous_matrix(const Grid& g, double mu,
                                                    bool symmetric_gradient);

/// Volume-integrated viscous force: row sigma,i of the assembled form applied
/// to u. The per-unit-volume term of the momentum equation is this divided
/// by |D_sigma|, entering the left-hand side with a + sign.
FaceField viscous_apply(const Grid& g, const Eigen::SparseMatrix<double>& matrix,
                        const FaceField& u);

/// Largest constant lambda such that u' A1 u >= lambda * sum_eps h_K^{d-2}
/// (u_a - u_b)^2 for every u vanishing on the boundary faces, where A1 is
/// the unit-viscosity scalar stiffness. mu_eps = mu * lambda then satisfies
/// the coercivity hypothesis of the stability theorem.
double measure_coercivity_constant(const Grid& g);

/// Discrete H^1 seminorm |u|^2 = sum_eps mu_eps h_K^{d-2} (u_a - u_b)^2 of a
/// single velocity component (boundary values included as stored).
double jump_seminorm_sq(const Grid& g, const std::vector<double>& u_comp, double mu_eps);

} // namespace stagflow
